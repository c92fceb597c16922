#pragma once

// Pairwise local-equivalence screening: the 0/1 weight matrix from
// kernel/cokernel window queries, connected components, and the spectral
// (Fiedler) variant.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "strata/pointcloud.hpp"

namespace strata {

struct StrataClustering {
    std::vector<std::vector<uint8_t>> W;  // symmetric; W[i][i] = 1 (self-loop)
    std::vector<int32_t> labels;          // component id per point, 0-based by first occurrence
    size_t degraded_pairs = 0;            // pipeline failures recorded as W = 0
};

// 1 iff p and q look locally equivalent at radius r: both directed pairs
// build, and every kernel/cokernel diagram window (eps, 2*eps) is empty in
// homological dims 0..(ambient-1). 0 when the balls are disjoint or any
// pipeline step fails (conservative: a false edge merges strata).
int pair_weight(const PointCloud& U, size_t p, size_t q, double r, double eps);

// All-pairs screening by default; `pairs` restricts the evaluated edges
// (unlisted entries stay 0) and `jobs` bounds the worker count. Output is
// deterministic regardless of jobs.
StrataClustering strata_clusters(const PointCloud& U, double r, double eps,
                                 const std::vector<std::pair<size_t, size_t>>* pairs = nullptr,
                                 int jobs = 1);

struct SpectralResult {
    double lambda1 = 0;  // smallest nontrivial Laplacian eigenvalue (Fiedler constant)
    std::vector<double> fiedler;
    std::vector<int> split;  // sign cut of the Fiedler vector
};

SpectralResult spectral_partition(const std::vector<std::vector<double>>& W);

void write_clustering_csv(const std::string& path, const StrataClustering& c);
void write_w_csv(const std::string& path, const StrataClustering& c);  // sparse triplets

}  // namespace strata
