#include "strata/sampling_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <vector>

namespace strata {

namespace {

double clampd(double x, double lo, double hi) { return std::min(hi, std::max(lo, x)); }

// length of the part of [a,b] inside the ball (c, R)
double segment_ball_length(const Segment3& s, Vec3 c, double R) {
    Vec3 d = s.b - s.a;
    double L = d.norm();
    if (L < 1e-300) return 0;
    d = d * (1 / L);
    double m = d.dot(c - s.a);
    double h2 = (c - s.a).norm2() - m * m;
    double w2 = R * R - h2;
    if (w2 <= 0) return 0;
    double w = std::sqrt(w2);
    return std::max(0.0, clampd(m + w, 0, L) - clampd(m - w, 0, L));
}

// area of the part of the rectangle inside the ball: the ball meets the
// patch plane in a disk; integrate its clipped chords across the rectangle
double patch_ball_area(const Patch3& p, Vec3 c, double R) {
    Vec3 rel = c - p.origin;
    double s0 = rel.dot(p.u), t0 = rel.dot(p.v);
    Vec3 n = {p.u.y * p.v.z - p.u.z * p.v.y, p.u.z * p.v.x - p.u.x * p.v.z,
              p.u.x * p.v.y - p.u.y * p.v.x};
    double h = rel.dot(n);
    double rd2 = R * R - h * h;
    if (rd2 <= 0) return 0;
    double rd = std::sqrt(rd2);
    double lo = std::max(0.0, s0 - rd), hi = std::min(p.lu, s0 + rd);
    if (hi <= lo) return 0;
    const int steps = 2048;
    double dx = (hi - lo) / steps, area = 0;
    for (int i = 0; i < steps; ++i) {
        double s = lo + (i + 0.5) * dx;
        double w2 = rd2 - (s - s0) * (s - s0);
        if (w2 <= 0) continue;
        double w = std::sqrt(w2);
        area += std::max(0.0, clampd(t0 + w, 0, p.lv) - clampd(t0 - w, 0, p.lv)) * dx;
    }
    return area;
}

double space_measure(const SpaceSpec& spec) {
    double total = 0;
    for (const auto& s : spec.segments) total += s.length();
    for (const auto& p : spec.patches) total += p.area();
    return total;
}

double ball_measure(const SpaceSpec& spec, Vec3 c, double R) {
    double total = 0;
    for (const auto& s : spec.segments) total += segment_ball_length(s, c, R);
    for (const auto& p : spec.patches) total += patch_ball_area(p, c, R);
    return total;
}

// greedy maximal packing on an on-space grid: centers pairwise > 2*radius
std::vector<Vec3> maximal_packing(const SpaceSpec& spec, double radius) {
    std::vector<Vec3> grid = reference_points(spec, radius / 10);
    std::vector<Vec3> chosen;
    for (const Vec3& g : grid) {
        bool ok = true;
        for (const Vec3& c : chosen)
            if ((g - c).norm() <= 2 * radius + 1e-12) {
                ok = false;
                break;
            }
        if (ok) chosen.push_back(g);
    }
    return chosen;
}

}  // namespace

double volume_fraction(const SpaceSpec& spec, double rho, double center_resolution) {
    if (!(rho > 0)) throw UsageError("volume_fraction: rho must be positive");
    if (spec.piece_count() == 0) throw UsageError("volume_fraction: empty space");
    double R = rho / 24;
    double res = center_resolution > 0 ? center_resolution : rho / 240;
    double total = space_measure(spec);
    if (!(total > 0)) throw UsageError("volume_fraction: degenerate space");
    double best = kInf;
    for (const Vec3& c : reference_points(spec, res))
        best = std::min(best, ball_measure(spec, c, R));
    return best / total;
}

uint64_t min_sample_size(double v, double xi) {
    if (!(v > 0) || v > 1) throw UsageError("min_sample_size: need 0 < v <= 1");
    if (!(xi > 0) || !(xi < 1)) throw UsageError("min_sample_size: need 0 < xi < 1");
    double bound = (std::log(1 / v) + std::log(1 / xi)) / v;
    return std::max<uint64_t>(1, uint64_t(std::ceil(bound - 1e-12)));
}

CoveringPacking covering_packing_estimates(const SpaceSpec& spec, double eps) {
    if (!(eps > 0)) throw UsageError("covering_packing_estimates: eps must be positive");
    if (spec.piece_count() == 0) throw UsageError("covering_packing_estimates: empty space");
    CoveringPacking out;
    out.p_lower = maximal_packing(spec, eps).size();

    // greedy max-coverage cover over the same kind of grid
    std::vector<Vec3> grid = reference_points(spec, eps / 20);
    std::vector<uint8_t> covered(grid.size(), 0);
    size_t remaining = grid.size(), cover = 0;
    while (remaining > 0) {
        size_t best = grid.size(), best_gain = 0;
        for (size_t i = 0; i < grid.size(); ++i) {
            size_t gain = 0;
            for (size_t j = 0; j < grid.size(); ++j)
                if (!covered[j] && (grid[j] - grid[i]).norm() <= eps + 1e-12) ++gain;
            if (gain > best_gain) {
                best_gain = gain;
                best = i;
            }
        }
        if (best == grid.size()) break;  // unreachable: every point covers itself
        for (size_t j = 0; j < grid.size(); ++j)
            if (!covered[j] && (grid[j] - grid[best]).norm() <= eps + 1e-12) {
                covered[j] = 1;
                --remaining;
            }
        ++cover;
    }
    // a maximal (eps/2)-packing is itself an eps-cover; take the smaller
    out.c_upper = std::min(cover, maximal_packing(spec, eps / 2).size());
    return out;
}

void write_bound_report(std::ostream& os, const SamplingBoundReport& rep) {
    os.precision(12);
    os << "rho=" << rep.rho << "\n"
       << "v=" << rep.v << "\n"
       << "xi=" << rep.xi << "\n"
       << "n_min=" << rep.n_min << "\n";
}

}  // namespace strata
