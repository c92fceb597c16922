#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "strata/persistence.hpp"

using namespace strata;
using namespace strata::testing;

namespace {

PairCell cell(int dim, std::vector<int32_t> faces, double bl, double bl0, double bk, double bk0) {
    PairCell c;
    c.dim = dim;
    c.faces = std::move(faces);
    c.birth_l = bl;
    c.birth_l0 = bl0;
    c.birth_k = bk;
    c.birth_k0 = bk0;
    return c;
}

// triangle boundary (3 vertices, 3 edges), optionally filled at fill_birth
FilteredPairComplex triangle_complex(double born, double fill_birth, bool with_k, double cap) {
    FilteredPairComplex cx;
    cx.alpha_cap = cap;
    double bk = with_k ? born : kInf;
    for (int v = 0; v < 3; ++v) cx.cells.push_back(cell(0, {}, born, kInf, bk, kInf));
    cx.cells.push_back(cell(1, {0, 1}, born, kInf, bk, kInf));
    cx.cells.push_back(cell(1, {1, 2}, born, kInf, bk, kInf));
    cx.cells.push_back(cell(1, {0, 2}, born, kInf, bk, kInf));
    if (fill_birth != kInf) {
        double fk = with_k ? fill_birth : kInf;
        cx.cells.push_back(cell(2, {3, 4, 5}, fill_birth, kInf, fk, kInf));
    }
    cx.finalize(0.0, 1e-12);
    return cx;
}

}  // namespace

TEST_CASE("constant complex with psi an isomorphism: kernel and cokernel vanish") {
    FilteredPairComplex cx = triangle_complex(0.0, kInf, true, 1.0);
    for (int d = 0; d <= 1; ++d) {
        RankFunction k = module_ranks(cx, ModuleKind::KernelOfPsi, d);
        RankFunction c = module_ranks(cx, ModuleKind::CokernelOfPsi, d);
        for (size_t i = 0; i < k.rank.size(); ++i)
            for (size_t j = 0; j < k.rank[i].size(); ++j) {
                CHECK(k.rank[i][j] == 0);
                CHECK(c.rank[i][j] == 0);
            }
    }
    // the domain pair still sees the component and the loop
    RankFunction h0 = module_ranks(cx, ModuleKind::DomainPair, 0);
    RankFunction h1 = module_ranks(cx, ModuleKind::DomainPair, 1);
    CHECK(h0.at(0, 0) == 1);
    CHECK(h1.at(0, 0) == 1);
    auto kc = kernel_cokernel_diagrams(cx, 1);
    CHECK(kc.kernel.points.empty());
    CHECK(kc.cokernel.points.empty());
}

TEST_CASE("single relative 1-class with psi = 0: kernel rank 1 exactly on [c1, c2)") {
    FilteredPairComplex cx = triangle_complex(1.0, 2.0, false, 3.0);
    RankFunction k1 = module_ranks(cx, ModuleKind::KernelOfPsi, 1);
    REQUIRE(k1.critical_values == std::vector<double>{1.0, 2.0});
    CHECK(k1.at(0, 0) == 1);  // alive between 1 and 2
    CHECK(k1.at(0, 1) == 0);  // dead past 2
    CHECK(k1.at(1, 1) == 0);
    PersistenceDiagram d = diagram_from_ranks(k1, cx.alpha_cap);
    REQUIRE(d.points.size() == 1);
    CHECK(d.points[0].birth == 1.0);
    CHECK(d.points[0].death == 2.0);
    CHECK(d.points[0].multiplicity == 1);
    // with K empty, the cokernel module vanishes
    PersistenceDiagram c1 =
        diagram_from_ranks(module_ranks(cx, ModuleKind::CokernelOfPsi, 1), cx.alpha_cap);
    CHECK(c1.points.empty());
}

TEST_CASE("relative pair: absolute class killed when a vertex enters the subcomplex") {
    // segment [a, b]; b enters L0 at alpha = 1, making the pair contractible
    FilteredPairComplex cx;
    cx.alpha_cap = 2.0;
    cx.cells.push_back(cell(0, {}, 0.0, kInf, kInf, kInf));
    cx.cells.push_back(cell(0, {}, 0.0, 1.0, kInf, kInf));
    cx.cells.push_back(cell(1, {0, 1}, 0.0, kInf, kInf, kInf));
    cx.finalize(0.0, 1e-12);
    PersistenceDiagram d =
        diagram_from_ranks(module_ranks(cx, ModuleKind::DomainPair, 0), cx.alpha_cap);
    REQUIRE(d.points.size() == 1);
    CHECK(d.points[0].birth == 0.0);
    CHECK(d.points[0].death == 1.0);
}

TEST_CASE("diagram_from_ranks on hand-written rank functions") {
    RankFunction rf;
    rf.dim = 1;
    rf.critical_values = {1.0, 2.0};
    rf.eval_values = {1.5, 2.5};
    rf.rank = {{1, 0}, {0}};
    PersistenceDiagram d = diagram_from_ranks(rf, 5.0);
    REQUIRE(d.points.size() == 1);
    CHECK(d.points[0].birth == 1.0);
    CHECK(d.points[0].death == 2.0);

    rf.rank = {{0, 0}, {0}};
    CHECK(diagram_from_ranks(rf, 5.0).points.empty());

    // class alive at the last level gets a capped death
    rf.rank = {{1, 1}, {1}};
    d = diagram_from_ranks(rf, 5.0);
    REQUIRE(d.points.size() == 1);
    CHECK(d.points[0].capped());
}

TEST_CASE("rank-function diagrams match column-reduction persistence on random filtrations") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        auto cells = random_filtered_complex(rng);
        double cap = 0;
        for (const auto& c : cells) cap = std::max(cap, c.birth);
        cap += 1.0;
        FilteredPairComplex cx = as_domain_pair(cells, cap);
        auto bars = column_reduction_persistence(cells);
        for (int d = 0; d <= 2; ++d) {
            PersistenceDiagram dg =
                diagram_from_ranks(module_ranks(cx, ModuleKind::DomainPair, d), cap);
            CHECK(diagram_multiset(dg, d) == bars_multiset(bars, d, cap));
        }
    }
}

TEST_CASE("four module kinds are mutually consistent on random pair filtrations") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> lag(0, 2), coin(0, 99);
    for (int trial = 0; trial < 80; ++trial) {
        auto cells = random_filtered_complex(rng);
        FilteredPairComplex cx;
        double cap = 0;
        for (const auto& c : cells) {
            PairCell pc;
            pc.dim = c.dim;
            pc.faces = c.faces;
            pc.birth_l = c.birth;
            pc.birth_l0 = coin(rng) < 50 ? c.birth + double(lag(rng)) + 1 : kInf;
            pc.birth_k = c.birth + double(lag(rng));
            pc.birth_k0 = coin(rng) < 50 ? pc.birth_k + double(lag(rng)) + 1 : kInf;
            cap = std::max(cap, pc.birth_k);
            cx.cells.push_back(std::move(pc));
        }
        cx.alpha_cap = cap + 2.0;
        cx.finalize(0.0, kInf);  // generator is sloppy; let finalize repair it

        for (int d = 0; d <= 2; ++d) {
            RankFunction dom = module_ranks(cx, ModuleKind::DomainPair, d);
            RankFunction rng_ = module_ranks(cx, ModuleKind::RangePair, d);
            RankFunction ker = module_ranks(cx, ModuleKind::KernelOfPsi, d);
            RankFunction cok = module_ranks(cx, ModuleKind::CokernelOfPsi, d);
            size_t m = dom.eval_values.size();
            for (size_t i = 0; i < m; ++i) {
                // rank-nullity: dim H_L - dim ker psi == dim H_K - dim cok psi
                CHECK(dom.at(int(i), int(i)) - ker.at(int(i), int(i)) ==
                      rng_.at(int(i), int(i)) - cok.at(int(i), int(i)));
            }
            // all diagrams must decompose consistently (beta >= 0)
            for (ModuleKind k : {ModuleKind::DomainPair, ModuleKind::RangePair,
                                 ModuleKind::KernelOfPsi, ModuleKind::CokernelOfPsi})
                CHECK_NOTHROW(diagram_from_ranks(module_ranks(cx, k, d), cx.alpha_cap));
        }
        // chain conditions hold at every evaluation value
        RankFunction rf = module_ranks(cx, ModuleKind::DomainPair, 0);
        for (double a : rf.eval_values) CHECK_NOTHROW(psi_map(cx, std::min(a, cx.alpha_cap)));
    }
}

TEST_CASE("window_query selects upper-left entries") {
    PersistenceDiagram d;
    d.cap = 2.0;
    d.points = {{1, 0.0, 0.9, 1}, {1, 0.5, 0.7, 1}};
    auto w = window_query(d, 0.3, 0.6);
    REQUIRE(w.size() == 1);
    CHECK(w[0].birth == 0.0);

    PersistenceDiagram e;
    e.cap = 2.0;
    CHECK(window_query(e, 0.3, 0.6).empty());

    PersistenceDiagram f;
    f.cap = 2.0;
    f.points = {{0, 0.1, kInf, 1}};
    CHECK(window_query(f, 0.3, 1.5).size() == 1);  // capped death qualifies
    CHECK_THROWS_AS(window_query(f, 0.6, 0.5), UsageError);
}

TEST_CASE("bottleneck distance: fixed examples") {
    PersistenceDiagram d;
    d.cap = 10.0;
    d.points = {{1, 0.0, 2.0, 1}, {1, 1.0, 3.0, 2}};
    CHECK(bottleneck_distance(d, d) == 0.0);

    PersistenceDiagram single, empty;
    single.cap = 10.0;
    empty.cap = 10.0;
    single.points = {{0, 0.0, 2.0, 1}};
    CHECK(bottleneck_distance(single, empty) == 1.0);
}

TEST_CASE("bottleneck distance equals factorial brute force on small diagrams") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> npts(0, 6), grid(0, 8), coin(0, 9);
    double cap = 12.0;
    auto random_diagram = [&]() {
        PersistenceDiagram d;
        d.cap = cap;
        int n = npts(rng);
        for (int i = 0; i < n; ++i) {
            double b = grid(rng);
            bool capped = coin(rng) == 0;
            double dd = capped ? kInf : b + 1 + grid(rng);
            d.points.push_back({1, b, dd, 1});
        }
        return d;
    };
    auto flat = [&](const PersistenceDiagram& d) {
        std::vector<std::pair<double, double>> out;
        for (const auto& p : d.points) out.push_back({p.birth, p.death});
        return out;
    };
    for (int trial = 0; trial < 150; ++trial) {
        PersistenceDiagram a = random_diagram(), b = random_diagram();
        double got = bottleneck_distance(a, b);
        double want = brute_force_bottleneck(flat(a), flat(b), cap, cap);
        CHECK(got == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("bottleneck distance is a metric on random diagram triples") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> npts(0, 5), grid(0, 8);
    double cap = 12.0;
    auto random_diagram = [&]() {
        PersistenceDiagram d;
        d.cap = cap;
        int n = npts(rng);
        for (int i = 0; i < n; ++i) {
            double b = grid(rng);
            d.points.push_back({1, b, b + 1 + grid(rng), 1});
        }
        return d;
    };
    for (int trial = 0; trial < 100; ++trial) {
        auto a = random_diagram(), b = random_diagram(), c = random_diagram();
        double ab = bottleneck_distance(a, b);
        double ba = bottleneck_distance(b, a);
        double ac = bottleneck_distance(a, c);
        double cb = bottleneck_distance(c, b);
        CHECK(ab == ba);
        CHECK(ab <= ac + cb + 1e-12);
        CHECK(bottleneck_distance(a, a) == 0.0);
    }
}

TEST_CASE("diagram CSV round trip with capped deaths") {
    PersistenceDiagram d;
    d.cap = 0.125;
    d.points = {{0, 0.0, 0.0625, 2}, {1, 0.03125, kInf, 1}};
    std::stringstream ss;
    write_diagram_csv(ss, d);
    CHECK(ss.str().rfind("# cap=0.125", 0) == 0);
    PersistenceDiagram e = read_diagram_csv(ss);
    REQUIRE(e.points.size() == 2);
    CHECK(e.cap == d.cap);
    CHECK(e.points[0].death == 0.0625);
    CHECK(e.points[0].multiplicity == 2);
    CHECK(e.points[1].capped());

    std::stringstream svg;
    write_diagram_svg(svg, d, 0.05, 0.1);
    CHECK(svg.str().find("<svg") != std::string::npos);
    CHECK(svg.str().find("<rect") != std::string::npos);
}
