#include "strata/cubical_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>

namespace strata {

void distance_field_scalar(const double* sx, const double* sy, const double* sz, size_t nsites,
                           const double* px, const double* py, const double* pz, size_t n,
                           double* out) {
    for (size_t i = 0; i < n; ++i) {
        const double x = px[i], y = py[i], z = pz[i];
        double best = kInf;
        for (size_t s = 0; s < nsites; ++s) {
            const double dx = x - sx[s], dy = y - sy[s], dz = z - sz[s];
            const double d2 = (dx * dx + dy * dy) + dz * dz;
            if (d2 < best) best = d2;
        }
        out[i] = std::sqrt(best);
    }
}

void distance_field(const double* sx, const double* sy, const double* sz, size_t nsites,
                    const double* px, const double* py, const double* pz, size_t n, double* out) {
    if (distance_field_simd_available() && n >= 8)
        distance_field_simd(sx, sy, sz, nsites, px, py, pz, n, out);
    else
        distance_field_scalar(sx, sy, sz, nsites, px, py, pz, n, out);
}

namespace {

CubicalGrid make_grid(int dim, Box3 bbox, double h) {
    if (!(h > 0)) throw UsageError("rasterize: h must be positive");
    if (!(bbox.hi.x > bbox.lo.x) || !(bbox.hi.y > bbox.lo.y) ||
        (dim == 3 && !(bbox.hi.z > bbox.lo.z)))
        throw UsageError("rasterize: degenerate bounding box");
    CubicalGrid g;
    g.dim = dim;
    g.lo = bbox.lo;
    g.h = h;
    auto count = [&](double lo, double hi) {
        return std::max<int32_t>(1, int32_t(std::ceil((hi - lo) / h - 1e-12)));
    };
    g.nx = count(bbox.lo.x, bbox.hi.x);
    g.ny = count(bbox.lo.y, bbox.hi.y);
    g.nz = dim == 3 ? count(bbox.lo.z, bbox.hi.z) : 1;
    if (dim != 3) g.lo.z = 0;
    g.d.assign(g.cube_count(), kInf);
    return g;
}

}  // namespace

CubicalGrid rasterize(const PointCloud& cloud, Box3 bbox, double h) {
    if (cloud.size() == 0) throw UsageError("rasterize: empty cloud");
    CubicalGrid g = make_grid(cloud.dim, bbox, h);
    const size_t n = g.cube_count();
    std::vector<double> sx, sy, sz;
    for (const Vec3& s : cloud.points) {
        sx.push_back(s.x);
        sy.push_back(s.y);
        sz.push_back(s.z);
    }
    std::vector<double> px(n), py(n), pz(n);
    size_t i = 0;
    for (int32_t iz = 0; iz < g.nz; ++iz)
        for (int32_t iy = 0; iy < g.ny; ++iy)
            for (int32_t ix = 0; ix < g.nx; ++ix, ++i) {
                Vec3 c = g.center(ix, iy, iz);
                px[i] = c.x;
                py[i] = c.y;
                pz[i] = c.z;
            }
    distance_field(sx.data(), sy.data(), sz.data(), sx.size(), px.data(), py.data(), pz.data(),
                   n, g.d.data());
    return g;
}

CubicalGrid rasterize(const SpaceSpec& spec, Box3 bbox, double h) {
    if (spec.piece_count() == 0) throw UsageError("rasterize: empty space");
    CubicalGrid g = make_grid(spec.dim, bbox, h);
    size_t i = 0;
    for (int32_t iz = 0; iz < g.nz; ++iz)
        for (int32_t iy = 0; iy < g.ny; ++iy)
            for (int32_t ix = 0; ix < g.nx; ++ix, ++i) g.d[i] = spec_distance(spec, g.center(ix, iy, iz));
    return g;
}

Box3 pair_bbox(const PairContext3& ctx, double h) {
    double pad = ctx.r + 2 * h;
    Box3 b;
    b.lo = {std::min(ctx.p.x, ctx.q.x) - pad, std::min(ctx.p.y, ctx.q.y) - pad,
            std::min(ctx.p.z, ctx.q.z) - pad};
    b.hi = {std::max(ctx.p.x, ctx.q.x) + pad, std::max(ctx.p.y, ctx.q.y) + pad,
            std::max(ctx.p.z, ctx.q.z) + pad};
    return b;
}

std::vector<double> uniform_levels(double cap, size_t count) {
    if (!(cap > 0) || count < 2) throw UsageError("uniform_levels: need cap > 0 and count >= 2");
    std::vector<double> lv(count);
    for (size_t i = 0; i < count; ++i) lv[i] = cap * double(i) / double(count - 1);
    return lv;
}

namespace {

// snap to the nearest level; values beyond the top level by more than half
// the last gap fall outside the filtration entirely
double snap_level(double d, const std::vector<double>& levels) {
    auto it = std::lower_bound(levels.begin(), levels.end(), d);
    if (it == levels.begin()) return levels.front();
    if (it == levels.end()) {
        double gap = levels.size() >= 2 ? levels.back() - levels[levels.size() - 2] : 0;
        return d - levels.back() <= 0.5 * gap ? levels.back() : kInf;
    }
    double hi = *it, lo = *(it - 1);
    return d - lo <= hi - d ? lo : hi;
}

size_t component_count(const std::vector<Vec3>& pts, double link) {
    std::vector<size_t> parent(pts.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = i + 1; j < pts.size(); ++j)
            if ((pts[i] - pts[j]).norm() <= link) parent[find(i)] = find(j);
    size_t roots = 0;
    for (size_t i = 0; i < pts.size(); ++i) roots += find(i) == i;
    return roots;
}

struct CellAcc {
    double l = kInf, l0 = kInf, k = kInf, k0 = kInf;
};

}  // namespace

FilteredPairComplex cubical_pair_complex(const CubicalGrid& g, const PairContext3& ctx,
                                         const std::vector<double>& levels) {
    if (!(ctx.r > 0)) throw UsageError("cubical: r must be positive");
    if (levels.empty() || levels.front() < 0)
        throw UsageError("cubical: levels must be nonnegative and nonempty");
    for (size_t i = 0; i + 1 < levels.size(); ++i)
        if (!(levels[i] < levels[i + 1])) throw UsageError("cubical: levels must be increasing");
    Box3 need = pair_bbox(ctx, g.h);
    Vec3 ghi = g.lo + Vec3{g.nx * g.h, g.ny * g.h, g.dim == 3 ? g.nz * g.h : 0.0};
    double slack = 1e-9 * g.h;
    if (need.lo.x < g.lo.x - slack || need.lo.y < g.lo.y - slack ||
        need.hi.x > ghi.x + slack || need.hi.y > ghi.y + slack ||
        (g.dim == 3 && (need.lo.z < g.lo.z - slack || need.hi.z > ghi.z + slack)))
        throw UsageError("cubical: grid box does not cover both balls with a 2h margin");

    const double delta = g.h * std::sqrt(double(g.dim));

    // cube membership per ball (by center); the boundary subcomplexes are the
    // outermost cube layers of these discrete regions: a cube is in the band
    // iff one of its Chebyshev neighbors has its center outside the ball.
    // This makes the partial identity a strict morphism (any two cubes sharing
    // a cell are Chebyshev neighbors) and keeps the bands gap-free.
    std::vector<uint8_t> in_p(g.cube_count(), 0), in_q(g.cube_count(), 0);
    for (int32_t iz = 0; iz < g.nz; ++iz)
        for (int32_t iy = 0; iy < g.ny; ++iy)
            for (int32_t ix = 0; ix < g.nx; ++ix) {
                Vec3 x = g.center(ix, iy, iz);
                size_t i = g.index(ix, iy, iz);
                in_p[i] = (x - ctx.p).norm() <= ctx.r;
                in_q[i] = (x - ctx.q).norm() <= ctx.r;
            }
    // true iff some Chebyshev neighbor (or out-of-grid position) is outside
    auto touches_outside = [&](const std::vector<uint8_t>& in, int32_t ix, int32_t iy,
                               int32_t iz) {
        const int dz_top = g.dim == 3 ? 1 : 0;
        for (int dx = -1; dx <= 1; ++dx)
            for (int dy = -1; dy <= 1; ++dy)
                for (int dz = -dz_top; dz <= dz_top; ++dz) {
                    int32_t jx = ix + dx, jy = iy + dy, jz = iz + dz;
                    if (jx < 0 || jx >= g.nx || jy < 0 || jy >= g.ny || jz < 0 || jz >= g.nz)
                        return true;
                    if (!in[g.index(jx, jy, jz)]) return true;
                }
        return false;
    };

    // doubled coordinates: cube (ix,iy,iz) occupies [2ix, 2ix+2] per axis;
    // a cell is odd in exactly the axes it extends along
    const int64_t wy = 2 * int64_t(g.ny) + 1;
    const int64_t wz = g.dim == 3 ? 2 * int64_t(g.nz) + 1 : 1;
    auto key_of = [&](int64_t a, int64_t b, int64_t c) { return (a * wy + b) * wz + c; };

    std::map<int64_t, CellAcc> acc;
    std::vector<Vec3> l0_band, k0_band;
    for (int32_t iz = 0; iz < g.nz; ++iz)
        for (int32_t iy = 0; iy < g.ny; ++iy)
            for (int32_t ix = 0; ix < g.nx; ++ix) {
                if (!in_p[g.index(ix, iy, iz)]) continue;
                Vec3 x = g.center(ix, iy, iz);
                bool in_l0 = touches_outside(in_p, ix, iy, iz);
                bool in_k = in_q[g.index(ix, iy, iz)];
                bool in_k0 = in_k && (in_l0 || touches_outside(in_q, ix, iy, iz));
                // band connectivity is a property of the grid geometry, so it
                // is recorded before the filtration cap excludes any cube
                if (in_l0) l0_band.push_back(x);
                if (in_k0) k0_band.push_back(x);
                double b = snap_level(g.d[g.index(ix, iy, iz)], levels);
                if (!std::isfinite(b)) continue;
                const int dz_top = g.dim == 3 ? 2 : 0;
                for (int dx = 0; dx <= 2; ++dx)
                    for (int dy = 0; dy <= 2; ++dy)
                        for (int dz = 0; dz <= dz_top; ++dz) {
                            CellAcc& a = acc[key_of(2 * ix + dx, 2 * iy + dy, 2 * iz + dz)];
                            a.l = std::min(a.l, b);
                            if (in_l0) a.l0 = std::min(a.l0, b);
                            if (in_k) a.k = std::min(a.k, b);
                            if (in_k0) a.k0 = std::min(a.k0, b);
                        }
            }

    FilteredPairComplex cx;
    std::map<int64_t, int32_t> id;
    for (const auto& [key, a] : acc) {
        id[key] = int32_t(cx.cells.size());
        int64_t cz = key % wz, rest = key / wz;
        int64_t cb = rest % wy, ca = rest / wy;
        PairCell cell;
        cell.dim = int(ca % 2) + int(cb % 2) + int(cz % 2);
        cell.birth_l = a.l;
        cell.birth_l0 = a.l0;
        cell.birth_k = a.k;
        cell.birth_k0 = a.k0;
        cx.cells.push_back(cell);
        std::string name = std::to_string(ca) + "." + std::to_string(cb);
        if (g.dim == 3) name += "." + std::to_string(cz);
        cx.cell_names.push_back(name);
    }
    for (const auto& [key, a] : acc) {
        (void)a;
        int64_t cz = key % wz, rest = key / wz;
        int64_t cb = rest % wy, ca = rest / wy;
        PairCell& cell = cx.cells[size_t(id.at(key))];
        const int64_t strides[3] = {wy * wz, wz, 1};
        const int64_t coords[3] = {ca, cb, cz};
        for (int axis = 0; axis < 3; ++axis) {
            if (coords[axis] % 2 == 0) continue;
            cell.faces.push_back(id.at(key - strides[axis]));
            cell.faces.push_back(id.at(key + strides[axis]));
        }
    }

    cx.alpha_cap = levels.back();
    cx.finalize(1e-9 * ctx.r, 1e-9 * ctx.r);

    if (l0_band.size() > 1 && component_count(l0_band, delta + 1e-12) > 1)
        std::cerr << "warning: cubical boundary band about p is disconnected; "
                     "resolution h may be too coarse\n";
    if (k0_band.size() > 1 && component_count(k0_band, delta + 1e-12) > 1)
        std::cerr << "warning: cubical boundary band of the intersection is disconnected; "
                     "resolution h may be too coarse\n";
    return cx;
}

KerCokDiagrams cubical_kercok_diagrams(const CubicalGrid& g, const PairContext3& ctx,
                                       const std::vector<double>& levels) {
    FilteredPairComplex cx = cubical_pair_complex(g, ctx, levels);
    return kernel_cokernel_diagrams(cx, g.dim);
}

FeatureSizeReport feature_size_report(const CubicalGrid& g, const PairContext3& ctx,
                                      const std::vector<double>& levels) {
    FilteredPairComplex cx = cubical_pair_complex(g, ctx, levels);
    // coordinates at or below the grid resolution cannot be told apart from
    // zero: the whole complex materializes up to h*sqrt(dim)/2 late, so such
    // values are quantization artifacts, not features
    const double tol = g.h * std::sqrt(double(g.dim));
    auto smallest_positive = [&](ModuleKind kind, bool& capped) {
        double best = kInf;
        for (int d = 0; d <= g.dim; ++d) {
            PersistenceDiagram dg = diagram_from_ranks(module_ranks(cx, kind, d), cx.alpha_cap);
            for (const auto& pt : dg.points) {
                if (pt.birth > tol) best = std::min(best, pt.birth);
                if (!pt.capped() && pt.death > tol) best = std::min(best, pt.death);
            }
        }
        capped = !(best < kInf);
        return capped ? levels.back() : best;
    };
    FeatureSizeReport rep;
    bool cap_p = false, cap_pq = false;
    rep.sigma_p = smallest_positive(ModuleKind::DomainPair, cap_p);
    rep.sigma_pq = smallest_positive(ModuleKind::RangePair, cap_pq);
    rep.rho = std::min(rep.sigma_p, rep.sigma_pq);
    rep.capped = rep.sigma_p <= rep.sigma_pq ? cap_p : cap_pq;
    rep.error_bar = g.h * std::sqrt(double(g.dim));
    return rep;
}

void write_feature_size_report(std::ostream& os, const FeatureSizeReport& rep) {
    os.precision(12);
    os << "sigma_p=" << rep.sigma_p << "\n"
       << "sigma_pq=" << rep.sigma_pq << "\n"
       << "rho=" << rep.rho << (rep.capped ? " (lower bound: capped at the top level)" : "")
       << "\n"
       << "error_bar=" << rep.error_bar << "\n";
}

void write_grid(const std::string& path, const CubicalGrid& g) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot write " + path);
    f.write("CGRD", 4);
    int32_t head[4] = {int32_t(g.dim), g.nx, g.ny, g.nz};
    f.write(reinterpret_cast<const char*>(head), sizeof(head));
    double geo[4] = {g.h, g.lo.x, g.lo.y, g.lo.z};
    f.write(reinterpret_cast<const char*>(geo), sizeof(geo));
    f.write(reinterpret_cast<const char*>(g.d.data()), std::streamsize(g.d.size() * 8));
    if (!f) throw DataError("short write to " + path);
}

CubicalGrid read_grid(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot read " + path);
    char magic[4];
    f.read(magic, 4);
    if (!f || std::memcmp(magic, "CGRD", 4) != 0) throw DataError("not a grid file: " + path);
    int32_t head[4];
    f.read(reinterpret_cast<char*>(head), sizeof(head));
    double geo[4];
    f.read(reinterpret_cast<char*>(geo), sizeof(geo));
    if (!f) throw DataError("truncated grid header: " + path);
    CubicalGrid g;
    g.dim = head[0];
    g.nx = head[1];
    g.ny = head[2];
    g.nz = head[3];
    g.h = geo[0];
    g.lo = {geo[1], geo[2], geo[3]};
    if ((g.dim != 2 && g.dim != 3) || g.nx <= 0 || g.ny <= 0 || g.nz <= 0 || !(g.h > 0))
        throw DataError("invalid grid header: " + path);
    g.d.resize(g.cube_count());
    f.read(reinterpret_cast<char*>(g.d.data()), std::streamsize(g.d.size() * 8));
    if (!f) throw DataError("truncated grid payload: " + path);
    return g;
}

}  // namespace strata
