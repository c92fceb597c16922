#include "strata/pointcloud.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace strata {

namespace {

double clamp01(double t) { return std::max(0.0, std::min(1.0, t)); }

double point_segment_dist(Vec3 x, const Segment3& s) {
    Vec3 d = s.b - s.a;
    double len2 = d.norm2();
    double t = len2 > 0 ? clamp01((x - s.a).dot(d) / len2) : 0.0;
    return (x - (s.a + d * t)).norm();
}

double point_patch_dist(Vec3 x, const Patch3& p) {
    Vec3 rel = x - p.origin;
    double cu = std::max(0.0, std::min(p.lu, rel.dot(p.u)));
    double cv = std::max(0.0, std::min(p.lv, rel.dot(p.v)));
    return (x - (p.origin + p.u * cu + p.v * cv)).norm();
}

// deterministic uniform doubles in [0,1) from the raw engine stream
struct Rng {
    std::mt19937_64 eng;
    explicit Rng(uint64_t seed) : eng(seed) {}
    double uniform() { return double(eng() >> 11) * 0x1.0p-53; }
    size_t index(size_t n) { return size_t(uniform() * double(n)) % n; }
};

}  // namespace

SpaceSpec SpaceSpec::cross2d(double extent, double spacing) {
    SpaceSpec s;
    s.kind = Kind::cross2d;
    s.dim = 2;
    s.grid_spacing = spacing;
    s.segments.push_back({{-extent, 0, 0}, {extent, 0, 0}});
    s.segments.push_back({{0, -extent, 0}, {0, extent, 0}});
    return s;
}

SpaceSpec SpaceSpec::segment1d(double length, double spacing) {
    SpaceSpec s;
    s.kind = Kind::segment;
    s.dim = 2;
    s.grid_spacing = spacing;
    s.segments.push_back({{0, 0, 0}, {length, 0, 0}});
    return s;
}

SpaceSpec SpaceSpec::plane_line3d(double extent, double spacing) {
    SpaceSpec s;
    s.kind = Kind::plane_line3d;
    s.dim = 3;
    s.grid_spacing = spacing;
    s.patches.push_back({{-extent, -extent, 0}, {1, 0, 0}, {0, 1, 0}, 2 * extent, 2 * extent});
    s.segments.push_back({{0, 0, -extent}, {0, 0, extent}});
    return s;
}

SpaceSpec SpaceSpec::two_planes3d(double extent, double spacing) {
    SpaceSpec s;
    s.kind = Kind::two_planes3d;
    s.dim = 3;
    s.grid_spacing = spacing;
    s.patches.push_back({{-extent, -extent, 0}, {1, 0, 0}, {0, 1, 0}, 2 * extent, 2 * extent});
    s.patches.push_back({{0, -extent, -extent}, {0, 1, 0}, {0, 0, 1}, 2 * extent, 2 * extent});
    return s;
}

double spec_distance(const SpaceSpec& spec, Vec3 x) {
    double d = kInf;
    for (const auto& s : spec.segments) d = std::min(d, point_segment_dist(x, s));
    for (const auto& p : spec.patches) d = std::min(d, point_patch_dist(x, p));
    return d;
}

PointCloud load_points(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open point file: " + path);
    PointCloud cloud;
    std::string line;
    int lineno = 0;
    int arity = -1;
    while (std::getline(in, line)) {
        ++lineno;
        // tolerate comments and blank lines
        if (line.empty() || line[0] == '#') continue;
        for (char& c : line)
            if (c == ',') c = ' ';
        std::istringstream ss(line);
        std::vector<double> vals;
        double v;
        while (ss >> v) vals.push_back(v);
        ss.clear();
        std::string rest;
        if (ss >> rest) throw DataError("parse error at line " + std::to_string(lineno));
        if (vals.empty()) continue;
        if (vals.size() != 2 && vals.size() != 3)
            throw DataError("line " + std::to_string(lineno) + ": expected 2 or 3 coordinates");
        if (arity < 0) arity = int(vals.size());
        if (int(vals.size()) != arity)
            throw DataError("line " + std::to_string(lineno) + ": dimension mismatch");
        for (double x : vals)
            if (!std::isfinite(x))
                throw DataError("line " + std::to_string(lineno) + ": non-finite coordinate");
        cloud.points.push_back({vals[0], vals[1], arity == 3 ? vals[2] : 0.0});
    }
    if (cloud.points.empty()) throw DataError("empty point file: " + path);
    cloud.dim = arity;
    for (size_t i = 0; i < cloud.points.size(); ++i)
        for (size_t j = i + 1; j < cloud.points.size(); ++j)
            if ((cloud.points[i] - cloud.points[j]).norm() <= kDuplicateTol)
                throw DataError("duplicate points at rows " + std::to_string(i + 1) + " and " +
                                std::to_string(j + 1));
    return cloud;
}

void save_points(const std::string& path, const PointCloud& cloud) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write point file: " + path);
    out.precision(17);
    for (const auto& p : cloud.points) {
        out << p.x << "," << p.y;
        if (cloud.dim == 3) out << "," << p.z;
        out << "\n";
    }
}

std::vector<Vec3> reference_points(const SpaceSpec& spec, double spacing) {
    if (spacing <= 0) throw UsageError("grid spacing must be positive");
    std::vector<Vec3> pts;
    auto push_unique = [&](Vec3 p) {
        for (const auto& q : pts)
            if ((p - q).norm() <= kDuplicateTol) return;
        pts.push_back(p);
    };
    for (const auto& s : spec.segments) {
        Vec3 d = s.b - s.a;
        double len = d.norm();
        Vec3 u = d * (1.0 / len);
        long n = long(std::floor(len / spacing + 1e-9));
        for (long k = 0; k <= n; ++k) push_unique(s.a + u * (double(k) * spacing));
    }
    for (const auto& p : spec.patches) {
        long nu = long(std::floor(p.lu / spacing + 1e-9));
        long nv = long(std::floor(p.lv / spacing + 1e-9));
        for (long i = 0; i <= nu; ++i)
            for (long j = 0; j <= nv; ++j)
                push_unique(p.origin + p.u * (double(i) * spacing) + p.v * (double(j) * spacing));
    }
    return pts;
}

PointCloud generate_synthetic(const SpaceSpec& spec) {
    PointCloud cloud;
    cloud.dim = spec.dim;
    cloud.points = reference_points(spec, spec.grid_spacing);
    return cloud;
}

double hausdorff_distance(const PointCloud& a, const PointCloud& b) {
    if (a.points.empty() || b.points.empty()) throw DataError("hausdorff: empty cloud");
    if (a.dim != b.dim) throw DataError("hausdorff: dimension mismatch");
    auto directed = [](const PointCloud& x, const PointCloud& y) {
        double worst = 0;
        for (const auto& p : x.points) {
            double best = kInf;
            for (const auto& q : y.points) best = std::min(best, (p - q).norm());
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(directed(a, b), directed(b, a));
}

PointCloud sample(const SpaceSpec& spec, const SamplingModel& model, size_t n) {
    if (n < 1) throw UsageError("sample: n must be >= 1");
    Rng rng(model.seed);
    PointCloud cloud;
    cloud.dim = spec.dim;

    if (model.model == SampleModel::M2) {
        // equal-weight mixture over the maximal-strata closures, then uniform
        // on the chosen piece
        size_t K = spec.piece_count();
        if (K == 0) throw DataError("sample: spec has no pieces");
        for (size_t i = 0; i < n; ++i) {
            size_t piece = rng.index(K);
            if (piece < spec.segments.size()) {
                const Segment3& s = spec.segments[piece];
                cloud.points.push_back(s.a + (s.b - s.a) * rng.uniform());
            } else {
                const Patch3& p = spec.patches[piece - spec.segments.size()];
                cloud.points.push_back(p.origin + p.u * (rng.uniform() * p.lu) +
                                       p.v * (rng.uniform() * p.lv));
            }
        }
        return cloud;
    }

    // M1: uniform on the delta-thickening via rejection sampling in the
    // bounding box of the thickened space
    if (model.delta <= 0) throw UsageError("sample: M1 requires delta > 0");
    Vec3 lo{kInf, kInf, kInf}, hi{-kInf, -kInf, -kInf};
    auto grow = [&](Vec3 p) {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
    };
    for (const auto& s : spec.segments) {
        grow(s.a);
        grow(s.b);
    }
    for (const auto& p : spec.patches) {
        grow(p.origin);
        grow(p.origin + p.u * p.lu);
        grow(p.origin + p.v * p.lv);
        grow(p.origin + p.u * p.lu + p.v * p.lv);
    }
    Vec3 pad{model.delta, model.delta, spec.dim == 3 ? model.delta : 0.0};
    lo = lo - pad;
    hi = hi + pad;
    constexpr long kMaxAttempts = 1000000;  // per point, documented failure bound
    for (size_t i = 0; i < n; ++i) {
        bool ok = false;
        for (long attempt = 0; attempt < kMaxAttempts; ++attempt) {
            Vec3 c{lo.x + rng.uniform() * (hi.x - lo.x), lo.y + rng.uniform() * (hi.y - lo.y),
                   spec.dim == 3 ? lo.z + rng.uniform() * (hi.z - lo.z) : 0.0};
            if (spec_distance(spec, c) <= model.delta) {
                cloud.points.push_back(c);
                ok = true;
                break;
            }
        }
        if (!ok) throw NumericError("sample: M1 rejection sampling exceeded 1e6 attempts");
    }
    return cloud;
}

double covering_radius(const SpaceSpec& spec, const PointCloud& cloud, double resolution) {
    if (cloud.points.empty()) throw DataError("covering_radius: empty cloud");
    double worst = 0;
    for (const auto& g : reference_points(spec, resolution)) {
        double best = kInf;
        for (const auto& p : cloud.points) best = std::min(best, (g - p).norm());
        worst = std::max(worst, best);
    }
    return worst;
}

}  // namespace strata
