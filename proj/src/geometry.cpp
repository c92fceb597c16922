#include "strata/geometry.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <map>
#include <set>

namespace strata {

namespace {

using Rat = boost::multiprecision::cpp_rational;

int sign_of(const Rat& v) { return v == 0 ? 0 : (v > 0 ? 1 : -1); }

}  // namespace

int orient2d(Vec2 a, Vec2 b, Vec2 c) {
    double l = (a.x - c.x) * (b.y - c.y);
    double r = (a.y - c.y) * (b.x - c.x);
    double det = l - r;
    double bound = 4e-16 * (std::abs(l) + std::abs(r));
    if (det > bound) return 1;
    if (det < -bound) return -1;
    if (bound == 0) return 0;  // every term is exactly zero
    Rat ax(a.x), ay(a.y), bx(b.x), by(b.y), cx(c.x), cy(c.y);
    return sign_of((ax - cx) * (by - cy) - (ay - cy) * (bx - cx));
}

int incircle(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    double adx = a.x - d.x, ady = a.y - d.y;
    double bdx = b.x - d.x, bdy = b.y - d.y;
    double cdx = c.x - d.x, cdy = c.y - d.y;
    double alift = adx * adx + ady * ady;
    double blift = bdx * bdx + bdy * bdy;
    double clift = cdx * cdx + cdy * cdy;
    double bcdet = bdx * cdy - cdx * bdy;
    double cadet = cdx * ady - adx * cdy;
    double abdet = adx * bdy - bdx * ady;
    double det = alift * bcdet + blift * cadet + clift * abdet;
    double permanent = alift * (std::abs(bdx * cdy) + std::abs(cdx * bdy)) +
                       blift * (std::abs(cdx * ady) + std::abs(adx * cdy)) +
                       clift * (std::abs(adx * bdy) + std::abs(bdx * ady));
    double bound = 1e-14 * permanent;
    if (det > bound) return 1;
    if (det < -bound) return -1;
    if (bound == 0) return 0;
    Rat rax(a.x), ray(a.y), rbx(b.x), rby(b.y), rcx(c.x), rcy(c.y), rdx(d.x), rdy(d.y);
    Rat x1 = rax - rdx, y1 = ray - rdy;
    Rat x2 = rbx - rdx, y2 = rby - rdy;
    Rat x3 = rcx - rdx, y3 = rcy - rdy;
    Rat l1 = x1 * x1 + y1 * y1, l2 = x2 * x2 + y2 * y2, l3 = x3 * x3 + y3 * y3;
    return sign_of(l1 * (x2 * y3 - x3 * y2) + l2 * (x3 * y1 - x1 * y3) + l3 * (x1 * y2 - x2 * y1));
}

namespace {

Vec2 circumcenter(Vec2 a, Vec2 b, Vec2 c) {
    double d = 2 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
    double ux = (a.norm2() * (b.y - c.y) + b.norm2() * (c.y - a.y) + c.norm2() * (a.y - b.y)) / d;
    double uy = (a.norm2() * (c.x - b.x) + b.norm2() * (a.x - c.x) + c.norm2() * (b.x - a.x)) / d;
    return {ux, uy};
}

// Cocircular clusters are triangulated as a fan from their lowest-index
// member: the triangulation the index-order symbolic perturbation selects.
bool in_fan(const std::vector<int32_t>& cluster, std::array<int32_t, 3> t, const PointCloud& pts) {
    Vec2 ctr = circumcenter(pts.p2(size_t(cluster[0])), pts.p2(size_t(cluster[1])),
                            pts.p2(size_t(cluster[2])));
    std::vector<int32_t> ord = cluster;  // cluster is sorted, so cluster[0] is the apex
    std::sort(ord.begin(), ord.end(), [&](int32_t u, int32_t v) {
        Vec2 du = pts.p2(size_t(u)) - ctr, dv = pts.p2(size_t(v)) - ctr;
        return std::atan2(du.y, du.x) < std::atan2(dv.y, dv.x);
    });
    auto apex = std::find(ord.begin(), ord.end(), cluster[0]);
    std::rotate(ord.begin(), apex, ord.end());
    for (size_t i = 1; i + 1 < ord.size(); ++i) {
        std::array<int32_t, 3> f = {ord[0], ord[i], ord[i + 1]};
        std::sort(f.begin(), f.end());
        if (f == t) return true;
    }
    return false;
}

}  // namespace

Triangulation delaunay(const PointCloud& cloud) {
    if (cloud.dim != 2) throw UsageError("delaunay: 2D point clouds only");
    size_t n = cloud.size();
    if (n == 0) throw UsageError("delaunay: empty cloud");
    Triangulation tri;
    tri.nsites = n;
    if (n == 1) return tri;
    if (n == 2) {
        tri.edges.push_back({0, 1});
        return tri;
    }

    std::set<std::array<int32_t, 3>> tset;
    for (int32_t i = 0; i < int32_t(n); ++i)
        for (int32_t j = i + 1; j < int32_t(n); ++j)
            for (int32_t k = j + 1; k < int32_t(n); ++k) {
                Vec2 a = cloud.p2(size_t(i)), b = cloud.p2(size_t(j)), c = cloud.p2(size_t(k));
                int o = orient2d(a, b, c);
                if (o == 0) continue;
                if (o < 0) std::swap(b, c);  // ccw for the in-circle test
                bool empty_circle = true;
                std::vector<int32_t> cocirc = {i, j, k};
                for (int32_t s = 0; s < int32_t(n) && empty_circle; ++s) {
                    if (s == i || s == j || s == k) continue;
                    int v = incircle(a, b, c, cloud.p2(size_t(s)));
                    if (v > 0) empty_circle = false;
                    if (v == 0) cocirc.push_back(s);
                }
                if (!empty_circle) continue;
                std::array<int32_t, 3> key = {i, j, k};
                if (cocirc.size() == 3) {
                    tset.insert(key);
                } else {
                    std::sort(cocirc.begin(), cocirc.end());
                    if (in_fan(cocirc, key, cloud)) tset.insert(key);
                }
            }

    if (tset.empty()) {
        // fully collinear: a path along the line, in lexicographic order
        std::vector<int32_t> ord(n);
        for (size_t i = 0; i < n; ++i) ord[i] = int32_t(i);
        std::sort(ord.begin(), ord.end(), [&](int32_t u, int32_t v) {
            Vec2 pu = cloud.p2(size_t(u)), pv = cloud.p2(size_t(v));
            return pu.x != pv.x ? pu.x < pv.x : pu.y < pv.y;
        });
        for (size_t i = 0; i + 1 < n; ++i) {
            std::array<int32_t, 2> e = {ord[i], ord[i + 1]};
            std::sort(e.begin(), e.end());
            tri.edges.push_back(e);
        }
        std::sort(tri.edges.begin(), tri.edges.end());
        return tri;
    }

    std::set<std::array<int32_t, 2>> eset;
    for (const auto& t : tset) {
        eset.insert({t[0], t[1]});
        eset.insert({t[0], t[2]});
        eset.insert({t[1], t[2]});
    }
    tri.triangles.assign(tset.begin(), tset.end());
    tri.edges.assign(eset.begin(), eset.end());
    return tri;
}

bool SiteClassification::in_pq(int32_t i) const {
    return std::binary_search(t_pq.begin(), t_pq.end(), i);
}

bool ConvexRegion::feasible(Vec2 x, double tol) const {
    for (const auto& h : half)
        if (h.n.dot(x) - h.c > tol) return false;
    for (const auto& d : disks)
        if (dist(x, d.center) - d.radius > tol) return false;
    return true;
}

// For x in B_r(p), the nearest site is within r + min_i |u_i - p| of x, so a
// site farther than 2r + min_i |u_i - p| from p can never be nearest or tied.
std::vector<int32_t> relevant_sites(const PointCloud& U, const PairContext& ctx) {
    double dmin = kInf;
    for (size_t i = 0; i < U.size(); ++i) dmin = std::min(dmin, dist(U.p2(i), ctx.p));
    std::vector<int32_t> out;
    for (size_t i = 0; i < U.size(); ++i)
        if (dist(U.p2(i), ctx.p) <= 2 * ctx.r + dmin + ctx.tol()) out.push_back(int32_t(i));
    return out;
}

namespace {

Vec2 perp(Vec2 v) { return {-v.y, v.x}; }

void pairwise_candidates(const ConvexRegion& R, std::vector<Vec2>& out) {
    for (size_t i = 0; i < R.half.size(); ++i)
        for (size_t j = i + 1; j < R.half.size(); ++j) {
            const auto &a = R.half[i], &b = R.half[j];
            double det = cross(a.n, b.n);
            if (std::abs(det) < 1e-12) continue;
            out.push_back({(a.c * b.n.y - b.c * a.n.y) / det, (a.n.x * b.c - b.n.x * a.c) / det});
        }
    for (const auto& h : R.half)
        for (const auto& d : R.disks) {
            double off = h.c - h.n.dot(d.center);
            double h2 = d.radius * d.radius - off * off;
            if (h2 < -1e-12 * d.radius * d.radius) continue;
            Vec2 foot = d.center + h.n * off;
            Vec2 t = perp(h.n) * std::sqrt(std::max(0.0, h2));
            out.push_back(foot + t);
            out.push_back(foot - t);
        }
    for (size_t i = 0; i < R.disks.size(); ++i)
        for (size_t j = i + 1; j < R.disks.size(); ++j) {
            const auto &a = R.disks[i], &b = R.disks[j];
            double d2 = (b.center - a.center).norm2();
            if (d2 < 1e-300) continue;
            double t = (d2 + a.radius * a.radius - b.radius * b.radius) / (2 * d2);
            double h2 = a.radius * a.radius - t * t * d2;
            if (h2 < -1e-12 * a.radius * a.radius) continue;
            Vec2 foot = a.center + (b.center - a.center) * t;
            Vec2 s = perp(b.center - a.center) * std::sqrt(std::max(0.0, h2 / d2));
            out.push_back(foot + s);
            out.push_back(foot - s);
        }
}

}  // namespace

ConvexRegion cell_region(const SplitSimplex& verts, const PointCloud& U, const PairContext& ctx,
                         RegionCap extra) {
    if (verts.empty()) throw UsageError("cell_region: no vertices");
    ConvexRegion R;
    R.disks.push_back({ctx.p, ctx.r});
    if (extra == RegionCap::CapQ) R.disks.push_back({ctx.q, ctx.r});

    std::vector<int32_t> nbrs = relevant_sites(U, ctx);
    std::set<int32_t> members;
    bool moon = false, lune = false;
    for (const auto& v : verts) {
        members.insert(v.site);
        if (v.side == Side::Moon) moon = true;
        if (v.side == Side::Lune) lune = true;
    }
    for (int32_t i : members) {
        Vec2 ui = U.p2(size_t(i));
        for (int32_t j : nbrs) {
            if (j == i) continue;
            Vec2 uj = U.p2(size_t(j));
            Vec2 n = uj - ui;
            double len = n.norm();
            if (len < 1e-300) continue;
            n = n * (1 / len);
            R.half.push_back({n, n.dot((ui + uj) * 0.5)});
        }
    }
    if (moon || lune) {
        Vec2 n = ctx.q - ctx.p;
        n = n * (1 / n.norm());
        double c = n.dot((ctx.p + ctx.q) * 0.5);
        if (moon) R.half.push_back({n, c});
        if (lune) R.half.push_back({n * -1.0, -c});
    }
    return R;
}

double min_distance(const ConvexRegion& region, Vec2 site, double tol) {
    double best = kInf;
    auto consider = [&](Vec2 x) {
        if (region.feasible(x, tol)) best = std::min(best, dist(x, site));
    };
    consider(site);
    for (const auto& h : region.half) consider(site + h.n * (h.c - h.n.dot(site)));
    for (const auto& d : region.disks) {
        double l = dist(site, d.center);
        if (l > 1e-300) consider(d.center + (site - d.center) * (d.radius / l));
    }
    std::vector<Vec2> cand;
    pairwise_candidates(region, cand);
    for (Vec2 x : cand) consider(x);
    return best;
}

double min_affine(const ConvexRegion& region, Vec2 w, double d, double tol) {
    double wn = w.norm();
    if (wn < 1e-300) {
        // constant objective: only region emptiness matters
        Vec2 probe = region.disks.empty() ? Vec2{0, 0} : region.disks[0].center;
        return std::isfinite(min_distance(region, probe, tol)) ? d : kInf;
    }
    double best = kInf;
    auto consider = [&](Vec2 x) {
        if (region.feasible(x, tol)) best = std::min(best, w.dot(x) + d);
    };
    for (const auto& disk : region.disks) consider(disk.center - w * (disk.radius / wn));
    std::vector<Vec2> cand;
    pairwise_candidates(region, cand);
    for (Vec2 x : cand) consider(x);
    return best;
}

SiteClassification classify_sites(const PointCloud& U, const PairContext& ctx, double alpha_max) {
    if (U.dim != 2) throw UsageError("classify_sites: 2D point clouds only");
    if (!(ctx.r > 0)) throw UsageError("classify_sites: radius must be positive");
    if (dist(ctx.p, ctx.q) < kDuplicateTol) throw UsageError("classify_sites: coincident pair");
    if (ctx.disjoint()) throw UsageError("classify_sites: disjoint pair (|p-q| > 2r)");
    double tol = ctx.tol();
    Vec2 n = ctx.q - ctx.p;
    n = n * (1 / n.norm());
    double c = n.dot((ctx.p + ctx.q) * 0.5);

    SiteClassification out;
    for (int32_t i : relevant_sites(U, ctx)) {
        SplitSimplex whole = {{i, Side::Whole}};
        ConvexRegion R = cell_region(whole, U, ctx, RegionCap::None);
        Vec2 ui = U.p2(size_t(i));
        if (min_distance(R, ui, tol) > alpha_max + tol) continue;
        ConvexRegion Rb = R;
        Rb.half.push_back({n, c});
        Rb.half.push_back({n * -1.0, -c});
        if (min_distance(Rb, ui, tol) <= alpha_max + tol) {
            out.t_pq.push_back(i);
        } else {
            // the restricted cell is convex and misses the bisector, so it
            // lies wholly on one side; classify by the cell, not the site
            // (they can differ for sites outside B_r(p))
            ConvexRegion Rq = R;
            Rq.half.push_back({n * -1.0, -c});  // keep the q side
            if (min_distance(Rq, ui, tol) <= alpha_max + tol)
                out.t_q.push_back(i);
            else
                out.t_p.push_back(i);
        }
    }
    return out;
}

std::vector<SplitSimplex> perturbed_nerve(const std::vector<std::vector<int32_t>>& simplices,
                                          const SiteClassification& cls) {
    std::map<int32_t, int> klass;  // 0 = p side, 1 = q side, 2 = bisector-crossing
    for (int32_t i : cls.t_p) klass[i] = 0;
    for (int32_t i : cls.t_q) klass[i] = 1;
    for (int32_t i : cls.t_pq) klass[i] = 2;

    std::set<SplitSimplex> out;
    auto emit = [&](SplitSimplex s) {
        std::sort(s.begin(), s.end());
        // close under faces: all nonempty vertex subsets
        size_t m = s.size();
        for (size_t mask = 1; mask < (size_t(1) << m); ++mask) {
            SplitSimplex face;
            for (size_t b = 0; b < m; ++b)
                if (mask & (size_t(1) << b)) face.push_back(s[b]);
            out.insert(face);
        }
    };

    for (const auto& sigma : simplices) {
        std::vector<int32_t> P, Q, M;
        for (int32_t y : sigma) {
            auto it = klass.find(y);
            if (it == klass.end()) throw NumericError("perturbed_nerve: unclassified site");
            (it->second == 0 ? P : it->second == 1 ? Q : M).push_back(y);
        }
        if (!P.empty() && !Q.empty())
            throw NumericError("perturbed_nerve: simplex joins both sides of the bisector");
        std::sort(M.begin(), M.end());
        if (M.empty()) {  // entirely one-sided: taken as-is
            SplitSimplex s;
            for (int32_t y : sigma) s.push_back({y, Side::Whole});
            emit(s);
        } else if (!P.empty() || !Q.empty()) {  // one-sided plus crossing: split pieces on that side
            Side tag = P.empty() ? Side::Lune : Side::Moon;
            SplitSimplex s;
            for (int32_t y : P) s.push_back({y, Side::Whole});
            for (int32_t y : Q) s.push_back({y, Side::Whole});
            for (int32_t y : M) s.push_back({y, tag});
            emit(s);
        } else {  // all crossing: staircase of both-side pieces
            size_t k = M.size();
            for (size_t t = 1; t <= k; ++t) {
                SplitSimplex s;
                for (size_t a = t - 1; a < k; ++a) s.push_back({M[a], Side::Moon});
                for (size_t a = 0; a < t; ++a) s.push_back({M[a], Side::Lune});
                emit(s);
            }
        }
    }
    return {out.begin(), out.end()};
}

BirthValues birth_values(const SplitSimplex& verts, const PointCloud& U, const PairContext& ctx) {
    double tol = ctx.tol();
    Vec2 u = U.p2(size_t(verts.at(0).site));
    // the power threshold ||x-u||^2 - ||x-center||^2 + r^2 is affine in x
    auto power_min = [&](const ConvexRegion& reg, Vec2 center) {
        Vec2 w = (u - center) * -2.0;
        double d = u.norm2() - center.norm2() + ctx.r * ctx.r;
        return min_affine(reg, w, d, tol);
    };
    BirthValues b;
    ConvexRegion R = cell_region(verts, U, ctx, RegionCap::None);
    b.l = min_distance(R, u, tol);
    b.l0 = std::sqrt(std::max(0.0, power_min(R, ctx.p)));
    ConvexRegion Rq = cell_region(verts, U, ctx, RegionCap::CapQ);
    b.k = min_distance(Rq, u, tol);
    // leaving the lens power cell = leaving whichever of the two power cells
    // is exited first; both thresholds are affine, so take the smaller min
    b.k0 = std::sqrt(std::max(0.0, std::min(power_min(Rq, ctx.p), power_min(Rq, ctx.q))));
    return b;
}

}  // namespace strata
