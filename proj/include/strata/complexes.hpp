#pragma once

// Assembly of the four filtered complexes around a point pair: restricted
// Delaunay candidates, the implicitly-perturbed split nerve, and birth
// values, packaged as a FilteredPairComplex for the persistence engine.

#include <string>
#include <vector>

#include "strata/filtered_pair.hpp"
#include "strata/geometry.hpp"

namespace strata {

struct PairComplexBuild {
    FilteredPairComplex cx;
    std::vector<SplitSimplex> simplices;  // parallel to cx.cells
};

PairComplexBuild build_filtered_pair_full(const PointCloud& U, const PairContext& ctx,
                                          double alpha_cap);

inline FilteredPairComplex build_filtered_pair(const PointCloud& U, const PairContext& ctx,
                                               double alpha_cap) {
    return build_filtered_pair_full(U, ctx, alpha_cap).cx;
}

// Debug serializations: the whole filtration as CSV (one row per simplex,
// four birth values, `inf` for never), and an OFF-like text dump of the
// split complex snapshot at alpha (vertex list with coordinates, then
// simplex list by vertex name).
void write_filtration_csv(const std::string& path, const FilteredPairComplex& cx);
void write_complex_off(const std::string& path, const PointCloud& U, const PairComplexBuild& built,
                       double alpha);

}  // namespace strata
