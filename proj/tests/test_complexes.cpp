#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "strata/complexes.hpp"
#include "strata/persistence.hpp"

using namespace strata;

namespace {

PointCloud cloud2(std::vector<Vec2> pts) {
    PointCloud c;
    c.dim = 2;
    for (Vec2 p : pts) c.points.push_back({p.x, p.y, 0});
    return c;
}

std::vector<double> eval_points(const FilteredPairComplex& cx) {
    std::vector<double> out;
    const auto& cv = cx.critical_values;
    for (size_t i = 0; i + 1 < cv.size(); ++i) out.push_back((cv[i] + cv[i + 1]) / 2);
    if (!cv.empty()) out.push_back(std::min(cv.back() + cx.alpha_cap * 0.01, cx.alpha_cap));
    return out;
}

}  // namespace

TEST_CASE("two lens sites: vertices at zero, edge at the shared-face entry") {
    PairContext ctx{{-0.3, 0}, {0.3, 0}, 1.0, 0.45};
    PointCloud U = cloud2({{-0.2, 0.05}, {0.25, -0.1}});
    PairComplexBuild b = build_filtered_pair_full(U, ctx, 2 * ctx.eps);

    // with only two sites both huge cells cross the bisector, so each site
    // appears as split pieces; the piece containing the site enters K at 0
    for (int32_t site : {0, 1}) {
        double vk = kInf;
        for (size_t i = 0; i < b.simplices.size(); ++i)
            if (b.simplices[i].size() == 1 && b.simplices[i][0].site == site)
                vk = std::min(vk, b.cx.cells[i].birth_k);
        CHECK(vk == 0.0);
    }

    // the adjacency between the two cells: earliest K entry of an edge
    // joining pieces of site 0 and site 1
    double ek = kInf;
    std::vector<int32_t> spanning;
    for (size_t i = 0; i < b.simplices.size(); ++i) {
        const SplitSimplex& s = b.simplices[i];
        if (s.size() == 2 && s[0].site != s[1].site) {
            ek = std::min(ek, b.cx.cells[i].birth_k);
            spanning.push_back(int32_t(i));
        }
    }
    REQUIRE(std::isfinite(ek));
    CHECK(ek > 0.0);
    // matches the unsplit shared-cell computation (the side pieces cover it)
    BirthValues direct = birth_values({{0, Side::Whole}, {1, Side::Whole}}, U, ctx);
    CHECK(ek == doctest::Approx(direct.k).epsilon(1e-9));

    // snapshots flip across that entry value
    auto k_has_spanning = [&](double a) {
        Snapshot s = snapshot(b.cx, a);
        for (int32_t id : spanning)
            if (std::find(s.K.begin(), s.K.end(), id) != s.K.end()) return true;
        return false;
    };
    CHECK(!k_has_spanning(ek * 0.99));
    CHECK(k_has_spanning(std::min(ek * 1.01, b.cx.alpha_cap)));
}

TEST_CASE("bisector-crossing sites contribute two split vertices") {
    PairContext ctx{{-0.35, 0}, {0.35, 0}, 1.0, 0.4};
    PointCloud U = cloud2({{-0.05, 0.3}, {0.05, -0.25}, {-0.7, 0.0}, {0.7, 0.1}});
    SiteClassification cls = classify_sites(U, ctx, ctx.alpha_max());
    REQUIRE(cls.t_pq.size() >= 2);

    PairComplexBuild b = build_filtered_pair_full(U, ctx, 2 * ctx.eps);
    for (int32_t site : cls.t_pq) {
        bool moon = false, lune = false;
        for (size_t i = 0; i < b.simplices.size(); ++i) {
            const SplitSimplex& s = b.simplices[i];
            if (s.size() == 1 && s[0].site == site) {
                moon |= s[0].side == Side::Moon;
                lune |= s[0].side == Side::Lune;
            }
        }
        CHECK(moon);
        CHECK(lune);
    }
}

TEST_CASE("snapshots are nested and chain conditions hold at regular values") {
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> u(-1, 1);
    std::uniform_int_distribution<int> npts(4, 10);
    int built = 0;
    for (int trial = 0; trial < 25; ++trial) {
        int n = npts(rng);
        std::vector<Vec2> pts;
        for (int i = 0; i < n; ++i) pts.push_back({u(rng), u(rng)});
        PointCloud U = cloud2(pts);
        size_t pi = size_t(trial) % U.size(), qi = (pi + 3) % U.size();
        if (pi == qi) continue;
        PairContext ctx{U.p2(pi), U.p2(qi), 0.8, 0.2};
        if (ctx.disjoint() || dist(ctx.p, ctx.q) < 1e-6) continue;
        PairComplexBuild b = build_filtered_pair_full(U, ctx, 2 * ctx.eps * (1 + 1e-6));
        ++built;

        Snapshot prev;
        bool first = true;
        for (double a : eval_points(b.cx)) {
            CHECK_NOTHROW(check_chain_conditions(b.cx, a));
            Snapshot s = snapshot(b.cx, a);
            // subcomplex containments at every level
            std::set<int32_t> L(s.L.begin(), s.L.end()), K(s.K.begin(), s.K.end());
            for (int32_t id : s.L0) CHECK(L.count(id) == 1);
            for (int32_t id : s.K) CHECK(L.count(id) == 1);
            for (int32_t id : s.K0) CHECK(K.count(id) == 1);
            if (!first) {
                std::set<int32_t> now(s.L.begin(), s.L.end());
                for (int32_t id : prev.L) CHECK(now.count(id) == 1);
            }
            prev = s;
            first = false;
        }
    }
    CHECK(built >= 12);
}

TEST_CASE("kernel/cokernel diagrams come out of built pairs without violations") {
    std::mt19937_64 rng(83);
    std::uniform_real_distribution<double> u(-1, 1);
    int built = 0;
    for (int trial = 0; trial < 15; ++trial) {
        std::vector<Vec2> pts;
        for (int i = 0; i < 8; ++i) pts.push_back({u(rng), u(rng)});
        PointCloud U = cloud2(pts);
        PairContext ctx{U.p2(0), U.p2(1), 0.8, 0.2};
        if (ctx.disjoint() || dist(ctx.p, ctx.q) < 1e-6) continue;
        FilteredPairComplex cx = build_filtered_pair(U, ctx, 2 * ctx.eps * (1 + 1e-6));
        KerCokDiagrams d = kernel_cokernel_diagrams(cx, 1);  // must not throw (beta >= 0)
        for (const auto& pt : d.kernel.points) {
            CHECK(pt.multiplicity > 0);
            CHECK(pt.birth >= 0);
            if (!pt.capped()) CHECK(pt.death > pt.birth);
        }
        ++built;
    }
    CHECK(built >= 10);
}

TEST_CASE("dense cross: relative H1 of the domain pair has rank 3") {
    // samples of an X around its crossing: B cap X is a cone on four points,
    // so H1 of (ball, boundary collar) has rank 3 once the collar is resolved
    SpaceSpec spec = SpaceSpec::cross2d(1.0, 0.1);
    PointCloud U = generate_synthetic(spec);
    PairContext ctx{{0, 0}, {0.1, 0}, 0.4, 0.15};
    FilteredPairComplex cx = build_filtered_pair(U, ctx, 2 * ctx.eps * (1 + 1e-6));
    RankFunction rf = module_ranks(cx, ModuleKind::DomainPair, 1);
    REQUIRE(!rf.eval_values.empty());
    // rank 3 holds across the working range once the collar is resolved
    // (below the sample spacing) and before the pair degenerates at the cap
    int hits = 0;
    for (size_t i = 0; i < rf.eval_values.size(); ++i) {
        double a = rf.eval_values[i];
        if (a < 0.06 || a > 0.27) continue;
        CHECK(rf.at(int(i), int(i)) == 3);
        ++hits;
    }
    CHECK(hits >= 5);
}

TEST_CASE("filtration CSV and OFF dumps are written") {
    PairContext ctx{{-0.3, 0}, {0.3, 0}, 1.0, 0.3};
    PointCloud U = cloud2({{-0.2, 0.05}, {0.25, -0.1}, {0.0, 0.5}});
    PairComplexBuild b = build_filtered_pair_full(U, ctx, 2 * ctx.eps);
    write_filtration_csv("complexes_test_filt.csv", b.cx);
    write_complex_off("complexes_test_snap.off", U, b, b.cx.alpha_cap);
    std::ifstream csv("complexes_test_filt.csv"), off("complexes_test_snap.off");
    std::string line;
    std::getline(csv, line);
    CHECK(line.rfind("# alpha_cap=", 0) == 0);
    std::getline(csv, line);
    CHECK(line == "simplex,birth_l,birth_l0,birth_k,birth_k0");
    std::getline(off, line);
    CHECK(line.rfind("# split complex", 0) == 0);
    std::remove("complexes_test_filt.csv");
    std::remove("complexes_test_snap.off");
}
