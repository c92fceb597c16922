#pragma once

// Exact 2D geometric kernel: Delaunay/Voronoi with exact predicates,
// restricted-cell classification against the bisector of a point pair,
// the seven-case implicitly-perturbed nerve, convex regions, and the
// filtration birth values read off them.

#include <array>
#include <cstdint>
#include <vector>

#include "strata/common.hpp"
#include "strata/pointcloud.hpp"

namespace strata {

// Sign of the signed area of (a,b,c): +1 counterclockwise, -1 clockwise,
// 0 exactly collinear. Double filter with exact rational fallback.
int orient2d(Vec2 a, Vec2 b, Vec2 c);

// +1 iff d lies strictly inside the circumcircle of the *ccw* triangle
// (a,b,c), -1 strictly outside, 0 exactly on it.
int incircle(Vec2 a, Vec2 b, Vec2 c, Vec2 d);

struct Triangulation {
    size_t nsites = 0;
    std::vector<std::array<int32_t, 2>> edges;      // sorted pairs, ascending
    std::vector<std::array<int32_t, 3>> triangles;  // sorted triples, ascending
};

// Brute-force empty-circumcircle Delaunay. Cocircular clusters are fanned
// from their lowest-index site (index-order symbolic perturbation); fully
// collinear input degenerates to a path of consecutive edges.
Triangulation delaunay(const PointCloud& cloud);

struct PairContext {
    Vec2 p, q;
    double r = 0;    // ball radius, > 0
    double eps = 0;  // density bound, >= 0

    bool disjoint() const { return dist(p, q) > 2 * r; }
    double alpha_max() const { return 2 * eps + r; }
    double tol() const { return tau_geo(r); }
};

// Partition of the sites whose restricted Voronoi cells meet B_r(p):
// cells crossing the bisector (t_pq, ascending site index), and the rest
// by side. Indices refer to the cloud passed to classify_sites.
struct SiteClassification {
    std::vector<int32_t> t_p, t_q;
    std::vector<int32_t> t_pq;

    bool in_pq(int32_t i) const;
};

SiteClassification classify_sites(const PointCloud& U, const PairContext& ctx, double alpha_max);

// Sites close enough to p that they can be nearest (or tied) somewhere in
// B_r(p); all other sites' Voronoi constraints are redundant there.
std::vector<int32_t> relevant_sites(const PointCloud& U, const PairContext& ctx);

// A Voronoi cell of a bisector-crossing site splits into two convex pieces:
// the moon keeps the p side, the lune keeps the q side.
enum class Side : uint8_t { Whole = 0, Moon = 1, Lune = 2 };

struct SplitVertex {
    int32_t site = 0;
    Side side = Side::Whole;

    friend bool operator==(const SplitVertex&, const SplitVertex&) = default;
    friend auto operator<=>(const SplitVertex&, const SplitVertex&) = default;
};

using SplitSimplex = std::vector<SplitVertex>;  // sorted, distinct

// Expand restricted-Delaunay simplices into split-vertex simplices by the
// five constructive perturbation cases; output is face-closed and
// deduplicated. Throws NumericError if a simplex mixes strictly-p-side and
// strictly-q-side sites (impossible for exact Voronoi input).
std::vector<SplitSimplex> perturbed_nerve(const std::vector<std::vector<int32_t>>& simplices,
                                          const SiteClassification& cls);

struct HalfPlane {
    Vec2 n;        // unit normal
    double c = 0;  // constraint n . x <= c
};

struct Disk {
    Vec2 center;
    double radius = 0;
};

struct ConvexRegion {
    std::vector<HalfPlane> half;
    std::vector<Disk> disks;

    bool feasible(Vec2 x, double tol) const;
};

enum class RegionCap { None, CapQ };

// Intersection of the (split) Voronoi cells of the given vertices with
// B_r(p), and with B_r(q) as well under CapQ. May be empty.
ConvexRegion cell_region(const SplitSimplex& verts, const PointCloud& U, const PairContext& ctx,
                         RegionCap extra);

// Exact convex minimizers over a region, by candidate enumeration: the
// unconstrained optimum, single-constraint boundary optima, and all
// pairwise constraint intersections, filtered by feasibility at tol.
// Return +inf when no candidate is feasible (empty region).
double min_distance(const ConvexRegion& region, Vec2 site, double tol);
double min_affine(const ConvexRegion& region, Vec2 w, double d, double tol);  // min of w.x + d

struct BirthValues {
    double l = kInf, l0 = kInf, k = kInf, k0 = kInf;
};

// Filtration entry values of a split simplex: smallest alpha at which the
// joint cell meets U_alpha cap B_r(p) (l), the power-cell complement (l0),
// the same two within the lens B_r(p) cap B_r(q) (k, k0).
BirthValues birth_values(const SplitSimplex& verts, const PointCloud& U, const PairContext& ctx);

}  // namespace strata
