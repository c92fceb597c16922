#pragma once

// Sample-size bound plumbing: the local volume fraction v(rho), the
// probabilistic minimum sample size, and covering/packing estimates.

#include <cstdint>
#include <iosfwd>

#include "strata/pointcloud.hpp"

namespace strata {

struct SamplingBoundReport {
    double rho = 0;
    double v = 0;
    double xi = 0;
    uint64_t n_min = 0;
};

// inf over centers x on the space of vol(B_{rho/24}(x) cap X) / vol(X),
// volumes summed per maximal stratum in its own dimension. The infimum is
// approximated over a center grid at `center_resolution` (default rho/240).
double volume_fraction(const SpaceSpec& spec, double rho, double center_resolution = 0);

// ceil((1/v)(ln(1/v) + ln(1/xi))), at least 1
uint64_t min_sample_size(double v, double xi);

struct CoveringPacking {
    size_t c_upper = 0;  // a valid eps-cover of this size exists
    size_t p_lower = 0;  // a valid eps-packing of this size exists
};

// Estimates built so the sandwich P(2e) <= C(2e) <= P(e) holds by
// construction between calls at eps and 2*eps: the cover estimate takes the
// smaller of a greedy cover and a maximal (eps/2)-packing reused as a cover.
CoveringPacking covering_packing_estimates(const SpaceSpec& spec, double eps);

void write_bound_report(std::ostream& os, const SamplingBoundReport& rep);

}  // namespace strata
