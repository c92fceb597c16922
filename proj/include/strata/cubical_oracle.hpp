#pragma once

// Grid-based oracle: exact distance fields sampled at cube centers, cubical
// realizations of the nested pairs (L, L0, K, K0) over sublevel sets, and the
// feature-size estimator. Independent of the nerve pipeline by construction —
// the two share only the persistence engine.

#include <string>
#include <vector>

#include "strata/filtered_pair.hpp"
#include "strata/persistence.hpp"
#include "strata/pointcloud.hpp"

namespace strata {

struct Box3 {
    Vec3 lo, hi;
};

// Axis-aligned cube grid with a distance value at each cube center. The field
// is exact Euclidean distance to the source (point set or synthetic space),
// so it is 1-Lipschitz; adjacent centers differ by at most h per axis step.
struct CubicalGrid {
    int dim = 2;  // ambient dimension; nz == 1 for 2D (z treated as flat)
    Vec3 lo;      // min corner of the box
    double h = 0;
    int32_t nx = 0, ny = 0, nz = 1;
    std::vector<double> d;  // distance at cube centers, x fastest, then y, z

    size_t cube_count() const { return size_t(nx) * size_t(ny) * size_t(nz); }
    size_t index(int32_t ix, int32_t iy, int32_t iz) const {
        return (size_t(iz) * size_t(ny) + size_t(iy)) * size_t(nx) + size_t(ix);
    }
    Vec3 center(int32_t ix, int32_t iy, int32_t iz) const {
        return {lo.x + (ix + 0.5) * h, lo.y + (iy + 0.5) * h,
                dim == 3 ? lo.z + (iz + 0.5) * h : 0.0};
    }
};

// Pair of ball centers for the oracle; 2D problems use z = 0.
struct PairContext3 {
    Vec3 p, q;
    double r = 0, eps = 0;
};

CubicalGrid rasterize(const PointCloud& cloud, Box3 bbox, double h);
CubicalGrid rasterize(const SpaceSpec& spec, Box3 bbox, double h);

// Smallest grid-aligned box covering B_r(p) and B_r(q) with margin >= 2h.
Box3 pair_bbox(const PairContext3& ctx, double h);

// Evenly spaced filtration levels 0 = l_0 < ... < l_{count-1} = cap.
std::vector<double> uniform_levels(double cap, size_t count);

// The cubical filtered pair at the given levels. Cube membership:
//   L : center in B_r(p), field value snapped to the nearest level
//   L0: L-cubes with a Chebyshev-neighbor cube whose center is outside B_r(p)
//       (the outermost cube layer of the discrete ball)
//   K : L-cubes with center also in B_r(q)
//   K0: K-cubes in L0, or with a neighbor centered outside B_r(q)
// Faces inherit memberships and births from their incident cubes (minima).
FilteredPairComplex cubical_pair_complex(const CubicalGrid& g, const PairContext3& ctx,
                                         const std::vector<double>& levels);

KerCokDiagrams cubical_kercok_diagrams(const CubicalGrid& g, const PairContext3& ctx,
                                       const std::vector<double>& levels);

// Feature sizes of the two relative modules on the source side: the ball pair
// about p and the intersection pair, each estimated as the smallest
// birth/death coordinate of its diagrams exceeding the resolution error bar
// (smaller values are grid quantization artifacts). rho is their minimum.
struct FeatureSizeReport {
    double sigma_p = kInf;
    double sigma_pq = kInf;
    double rho = kInf;
    double error_bar = 0;  // +- h * sqrt(dim) grid resolution uncertainty
    bool capped = false;   // no change observed below the top level
};

FeatureSizeReport feature_size_report(const CubicalGrid& g, const PairContext3& ctx,
                                      const std::vector<double>& levels);

void write_feature_size_report(std::ostream& os, const FeatureSizeReport& rep);

// Raw binary grid cache: header (dim, nx, ny, nz as int32, h and lo as f64),
// payload little-endian 64-bit floats.
void write_grid(const std::string& path, const CubicalGrid& g);
CubicalGrid read_grid(const std::string& path);

// Brute-force distance kernels over struct-of-arrays site coordinates. The
// vectorized variant is selected at runtime and is bit-identical to the
// scalar reference (same operation order per center, no fused contractions).
void distance_field_scalar(const double* sx, const double* sy, const double* sz, size_t nsites,
                           const double* px, const double* py, const double* pz, size_t n,
                           double* out);
bool distance_field_simd_available();
void distance_field_simd(const double* sx, const double* sy, const double* sz, size_t nsites,
                         const double* px, const double* py, const double* pz, size_t n,
                         double* out);
// dispatches to the best available kernel
void distance_field(const double* sx, const double* sy, const double* sz, size_t nsites,
                    const double* px, const double* py, const double* pz, size_t n, double* out);

}  // namespace strata
