#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "ethdyn/dynamics.hpp"
#include "ethdyn/marker.hpp"
#include "ethdyn/polytope.hpp"

namespace ethdyn::portrait {

struct Bounds {
    double min = -2.5;
    double max = 2.5;
};

struct VectorFieldGrid {
    std::vector<Bounds> bounds;
    std::size_t resolution = 0;
    std::vector<std::vector<double>> points;
    std::vector<std::vector<double>> directions;
};

/// Uniform grid including the bounds (last axis varies fastest) with M x at
/// every point, evaluated through the batch kernels.
VectorFieldGrid vector_field_grid(const dynamics::LinearSystem& s, const std::vector<Bounds>& bounds,
                                  std::size_t resolution);

struct Camera {
    double azimuth_deg = 35.0;
    double elevation_deg = 25.0;
};

struct IntegrationSettings {
    dynamics::Method method = dynamics::Method::Euler;
    double dt = 0.01;
    std::size_t steps = 500;
};

struct PortraitSpec {
    std::string name;
    dynamics::LinearSystem system;
    std::vector<std::vector<double>> initial_conditions;
    IntegrationSettings integration;
    std::vector<Bounds> bounds;
    std::size_t resolution = 20;
    Camera camera;
    std::size_t jobs = 1;
};

inline constexpr int kCanvas = 800;
inline constexpr int kMargin = 40;
inline constexpr std::size_t kDefaultResolution2d = 20;
inline constexpr std::size_t kDefaultResolution3d = 5;

/// Throws DomainError for an empty IC list, mismatched dimensions, or
/// bounds with min >= max.
void validate(const PortraitSpec& spec);

/// Affine map from state space to SVG pixels. 2D maps the bounds onto the
/// plot square; 3D rescales each axis to [-1, 1] and projects orthographically
/// with the camera.
class Viewport {
public:
    Viewport(const std::vector<Bounds>& bounds, const Camera& camera);

    std::array<double, 2> map(const std::vector<double>& x) const;

private:
    std::vector<Bounds> bounds_;
    std::array<double, 3> right_{};
    std::array<double, 3> up_{};
};

struct RenderedPortrait {
    std::string svg;
    /// file name -> contents, <name>_<ic>.csv for every initial condition
    std::map<std::string, std::string> csv;
    std::vector<dynamics::BatchTrajectory> trajectories;
};

RenderedPortrait render_portrait(const PortraitSpec& spec);

/// "t,<label...>" header then one row per state, 9 significant digits.
std::string trajectory_csv(const dynamics::Trajectory& t, const std::vector<std::string>& labels);

/// "age,value" CSV of one marker curve.
std::string marker_csv(const marker::MarkerCurve& curve);

/// Line chart of one or more marker curves over age, values on [0, 1].
std::string marker_chart(const std::vector<marker::MarkerCurve>& curves, const std::vector<std::string>& legend);

/// Orthographic wireframe of one polytope, or of two with shared edges in
/// green and exclusive edges in blue (first) and red (second).
std::string polytope_wireframe(const polytope::Polytope& first, const polytope::Polytope* second,
                               const Camera& camera = {});

} // namespace ethdyn::portrait
