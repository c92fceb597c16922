#pragma once

// Point-cloud ingestion, the synthetic stratified spaces of the experiments,
// Hausdorff utilities, and the two probabilistic sampling models.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "strata/common.hpp"

namespace strata {

struct PointCloud {
    int dim = 2;  // 2 or 3; 3D coordinates stored with z = 0 for 2D clouds
    std::vector<Vec3> points;
    std::string label;

    size_t size() const { return points.size(); }
    Vec2 p2(size_t i) const { return {points[i].x, points[i].y}; }
};

// A synthetic stratified space: a union of segments and rectangular patches.
struct Segment3 {
    Vec3 a, b;
    double length() const { return (b - a).norm(); }
};

struct Patch3 {
    Vec3 origin, u, v;  // u, v orthonormal
    double lu = 0, lv = 0;
    double area() const { return lu * lv; }
};

struct SpaceSpec {
    enum class Kind { cross2d, plane_line3d, two_planes3d, segment, custom_union };
    Kind kind = Kind::segment;
    int dim = 2;
    double grid_spacing = 0.25;
    std::vector<Segment3> segments;
    std::vector<Patch3> patches;

    size_t piece_count() const { return segments.size() + patches.size(); }

    // factory helpers for the experiment datasets
    static SpaceSpec cross2d(double extent, double spacing);
    static SpaceSpec segment1d(double length, double spacing);   // embedded in 2D
    static SpaceSpec plane_line3d(double extent, double spacing);
    static SpaceSpec two_planes3d(double extent, double spacing);
};

// Distance from a point to the space (min over pieces).
double spec_distance(const SpaceSpec& spec, Vec3 x);

enum class SampleModel { M1, M2 };

struct SamplingModel {
    SampleModel model = SampleModel::M2;
    double delta = 0;  // thickening, M1 only
    uint64_t seed = 0;
};

PointCloud load_points(const std::string& path);
void save_points(const std::string& path, const PointCloud& cloud);

PointCloud generate_synthetic(const SpaceSpec& spec);

double hausdorff_distance(const PointCloud& a, const PointCloud& b);

PointCloud sample(const SpaceSpec& spec, const SamplingModel& model, size_t n);

// Covering radius of the cloud over the space, estimated on a reference grid
// at the given resolution: max over grid points of distance to the cloud.
double covering_radius(const SpaceSpec& spec, const PointCloud& cloud, double resolution);

// Dense deterministic grid on the space at the given spacing (generation
// helper shared by generate_synthetic and the estimators).
std::vector<Vec3> reference_points(const SpaceSpec& spec, double spacing);

}  // namespace strata
