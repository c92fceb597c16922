#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>

#include "strata/pointcloud.hpp"

using namespace strata;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& contents) {
        static int counter = 0;
        path = "pointcloud_test_" + std::to_string(counter++) + ".csv";
        std::ofstream out(path);
        out << contents;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("load_points parses CSV and whitespace rows") {
    TempFile f("0,0\n1,0\n0,1\n");
    PointCloud c = load_points(f.path);
    CHECK(c.dim == 2);
    REQUIRE(c.size() == 3);
    CHECK(c.points[1].x == 1.0);

    TempFile w("0 0 0\n1 2 3\n");
    PointCloud c3 = load_points(w.path);
    CHECK(c3.dim == 3);
    CHECK(c3.points[1].z == 3.0);
}

TEST_CASE("load_points rejects malformed input") {
    TempFile mixed("0,0\n1,2,3\n");
    CHECK_THROWS_AS(load_points(mixed.path), DataError);
    TempFile nan_file("nan,0\n");
    CHECK_THROWS_AS(load_points(nan_file.path), DataError);
    TempFile dup("1,1\n1,1\n");
    CHECK_THROWS_AS(load_points(dup.path), DataError);
    TempFile garbage("1,banana\n");
    CHECK_THROWS_AS(load_points(garbage.path), DataError);
    CHECK_THROWS_AS(load_points("no_such_file.csv"), DataError);
}

TEST_CASE("generate_synthetic puts points exactly on the space") {
    PointCloud cross = generate_synthetic(SpaceSpec::cross2d(1.0, 0.25));
    CHECK(cross.size() == 17);  // 9 per axis, shared center

    PointCloud seg = generate_synthetic(SpaceSpec::segment1d(1.0, 0.5));
    REQUIRE(seg.size() == 3);
    CHECK(seg.points[0].x == 0.0);
    CHECK(seg.points[1].x == 0.5);
    CHECK(seg.points[2].x == 1.0);

    SpaceSpec planes = SpaceSpec::two_planes3d(1.0, 0.5);
    PointCloud tp = generate_synthetic(planes);
    CHECK(tp.dim == 3);
    for (const auto& p : tp.points) {
        bool on_first = p.z == 0.0;
        bool on_second = p.x == 0.0;
        CHECK((on_first || on_second));
        CHECK(spec_distance(planes, p) == 0.0);
    }
}

TEST_CASE("hausdorff distance: fixed examples") {
    PointCloud a, b;
    a.dim = b.dim = 2;
    a.points = {{0, 0, 0}};
    b.points = {{0, 0, 0}};
    CHECK(hausdorff_distance(a, b) == 0.0);
    b.points = {{1, 0, 0}};
    CHECK(hausdorff_distance(a, b) == 1.0);
    a.points = {{0, 0, 0}, {2, 0, 0}};
    b.points = {{1, 0, 0}};
    CHECK(hausdorff_distance(a, b) == 1.0);
    PointCloud empty;
    empty.dim = 2;
    CHECK_THROWS_AS(hausdorff_distance(a, empty), DataError);
}

TEST_CASE("hausdorff distance is a metric on random clouds") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> coord(-1, 1);
    std::uniform_int_distribution<int> npts(1, 8);
    auto random_cloud = [&]() {
        PointCloud c;
        c.dim = 2;
        int n = npts(rng);
        for (int i = 0; i < n; ++i) c.points.push_back({coord(rng), coord(rng), 0});
        return c;
    };
    for (int trial = 0; trial < 100; ++trial) {
        PointCloud a = random_cloud(), b = random_cloud(), c = random_cloud();
        double ab = hausdorff_distance(a, b);
        CHECK(ab == hausdorff_distance(b, a));
        CHECK(ab <= hausdorff_distance(a, c) + hausdorff_distance(c, b) + 1e-12);
        CHECK(hausdorff_distance(a, a) == 0.0);
    }
}

TEST_CASE("M2 sampling: support and stratum balance") {
    SpaceSpec cross = SpaceSpec::cross2d(1.0, 0.25);
    SamplingModel m;
    m.model = SampleModel::M2;
    m.seed = 42;
    size_t n = 1000;
    PointCloud c = sample(cross, m, n);
    REQUIRE(c.size() == n);
    size_t on_x = 0, on_y = 0;
    for (const auto& p : c.points) {
        CHECK(spec_distance(cross, p) <= 1e-12);
        if (p.y == 0.0) ++on_x;
        if (p.x == 0.0) ++on_y;
    }
    CHECK(on_x + on_y >= n);  // every point on a segment
    // binomial concentration: each stratum gets n/2 +- 3*sqrt(n)
    double dev = 3 * std::sqrt(double(n));
    CHECK(std::abs(double(on_x) - double(n) / 2) <= dev);

    // determinism under a fixed seed
    PointCloud c2 = sample(cross, m, n);
    CHECK(hausdorff_distance(c, c2) == 0.0);
}

TEST_CASE("M1 sampling stays inside the thickening") {
    SpaceSpec seg = SpaceSpec::segment1d(1.0, 0.1);
    SamplingModel m;
    m.model = SampleModel::M1;
    m.delta = 0.1;
    m.seed = 7;
    PointCloud c = sample(seg, m, 200);
    for (const auto& p : c.points) CHECK(spec_distance(seg, p) <= 0.1);
    SamplingModel bad = m;
    bad.delta = 0;
    CHECK_THROWS_AS(sample(seg, bad, 1), UsageError);
}

TEST_CASE("synthetic grids are tight samples of their spec") {
    // Hausdorff distance to a 10x-denser reference grid <= spacing/2 * sqrt(dim)
    for (double spacing : {0.25, 0.125}) {
        SpaceSpec spec = SpaceSpec::cross2d(1.0, spacing);
        PointCloud grid = generate_synthetic(spec);
        PointCloud dense;
        dense.dim = 2;
        dense.points = reference_points(spec, spacing / 10);
        CHECK(hausdorff_distance(grid, dense) <= spacing / 2 * std::sqrt(2.0) + 1e-12);
        // covering radius of an on-space grid is about half the spacing
        CHECK(covering_radius(spec, grid, spacing / 10) <= spacing / 2 + 1e-12);
    }
}
