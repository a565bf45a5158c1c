#include "ethdyn/portrait.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ethdyn/errors.hpp"
#include "ethdyn/kernels.hpp"
#include "ethdyn/svg.hpp"

namespace ethdyn::portrait {

namespace {

constexpr std::array<const char*, 8> kPalette{"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                              "#9467bd", "#8c564b", "#e377c2", "#17becf"};
constexpr double kArrowPx = 14.0;
constexpr double kPlot = kCanvas - 2 * kMargin;

double deg2rad(double d) { return d * std::numbers::pi / 180.0; }

std::string stroke(const char* color, double width) {
    return std::string("fill=\"none\" stroke=\"") + color + "\" stroke-width=\"" + svg::fixed(width, 1) + "\"";
}

void draw_frame(svg::Writer& w) {
    w.rect(kMargin, kMargin, kPlot, kPlot, "fill=\"white\" stroke=\"#333333\" stroke-width=\"1\"");
    w.clip_rect("plot", kMargin, kMargin, kPlot, kPlot);
}

// Axes through the origin (2D) or the three projected coordinate axes (3D).
void draw_axes(svg::Writer& w, const Viewport& vp, const std::vector<Bounds>& bounds,
               const std::vector<std::string>& labels) {
    const std::string axis_style = "stroke=\"#999999\" stroke-width=\"1\"";
    const std::string label_style = "font-family=\"sans-serif\" font-size=\"14\" fill=\"#000000\"";
    if (bounds.size() == 2) {
        const double mid = kCanvas / 2.0;
        w.open_group("clip-path=\"url(#plot)\"");
        if (bounds[1].min <= 0.0 && 0.0 <= bounds[1].max) {
            const auto a = vp.map({bounds[0].min, 0.0});
            const auto b = vp.map({bounds[0].max, 0.0});
            w.line(a[0], a[1], b[0], b[1], axis_style);
        }
        if (bounds[0].min <= 0.0 && 0.0 <= bounds[0].max) {
            const auto a = vp.map({0.0, bounds[1].min});
            const auto b = vp.map({0.0, bounds[1].max});
            w.line(a[0], a[1], b[0], b[1], axis_style);
        }
        w.close_group();
        w.text(mid, kCanvas - 12.0, labels[0], label_style + " text-anchor=\"middle\"");
        w.text(14.0, mid, labels[1],
               label_style + " text-anchor=\"middle\" transform=\"rotate(-90 14.00 " + svg::fixed(mid, 2) + ")\"");
        w.text(kMargin, kMargin - 8.0, svg::general(bounds[1].max, 6), label_style);
        w.text(kMargin, kCanvas - kMargin + 16.0, svg::general(bounds[0].min, 6), label_style);
        w.text(kCanvas - kMargin, kCanvas - kMargin + 16.0, svg::general(bounds[0].max, 6),
               label_style + " text-anchor=\"end\"");
        return;
    }
    const std::vector<double> origin{bounds[0].min, bounds[1].min, bounds[2].min};
    const auto o = vp.map(origin);
    for (std::size_t axis = 0; axis < 3; ++axis) {
        auto tip = origin;
        tip[axis] = bounds[axis].max;
        const auto p = vp.map(tip);
        w.line(o[0], o[1], p[0], p[1], axis_style);
        w.text(p[0] + 4.0, p[1] - 4.0, labels[axis], label_style);
    }
}

void draw_arrows(svg::Writer& w, const Viewport& vp, const VectorFieldGrid& grid) {
    double peak = 0.0;
    std::vector<double> magnitude(grid.points.size());
    for (std::size_t i = 0; i < grid.points.size(); ++i) {
        double sq = 0.0;
        for (double d : grid.directions[i]) {
            sq += d * d;
        }
        magnitude[i] = std::sqrt(sq);
        peak = std::max(peak, magnitude[i]);
    }
    if (peak == 0.0) {
        return;
    }
    w.open_group("clip-path=\"url(#plot)\" stroke=\"#555555\" stroke-width=\"1\"");
    for (std::size_t i = 0; i < grid.points.size(); ++i) {
        const auto& p = grid.points[i];
        std::vector<double> ahead = p;
        for (std::size_t k = 0; k < p.size(); ++k) {
            ahead[k] += grid.directions[i][k];
        }
        const auto a = vp.map(p);
        const auto b = vp.map(ahead);
        const double dx = b[0] - a[0];
        const double dy = b[1] - a[1];
        const double len = std::hypot(dx, dy);
        if (len <= 1e-12 || !std::isfinite(len)) {
            continue;
        }
        // magnitude shown as opacity in four buckets
        const double ratio = magnitude[i] / peak;
        const double opacity = ratio <= 0.25 ? 0.25 : ratio <= 0.5 ? 0.5 : ratio <= 0.75 ? 0.75 : 1.0;
        const double ux = dx / len;
        const double uy = dy / len;
        const double x0 = a[0] - ux * kArrowPx / 2.0;
        const double y0 = a[1] - uy * kArrowPx / 2.0;
        const double x1 = a[0] + ux * kArrowPx / 2.0;
        const double y1 = a[1] + uy * kArrowPx / 2.0;
        const std::string style = "stroke-opacity=\"" + svg::fixed(opacity, 2) + "\"";
        w.line(x0, y0, x1, y1, style);
        // head: two short strokes at +-30 degrees from the reversed direction
        const double head = 4.0;
        const double c = std::cos(std::numbers::pi / 6.0);
        const double s = std::sin(std::numbers::pi / 6.0);
        w.line(x1, y1, x1 - head * (ux * c - uy * s), y1 - head * (uy * c + ux * s), style);
        w.line(x1, y1, x1 - head * (ux * c + uy * s), y1 - head * (uy * c - ux * s), style);
    }
    w.close_group();
}

} // namespace

void validate(const PortraitSpec& spec) {
    const std::size_t n = spec.system.dim();
    if (spec.initial_conditions.empty()) {
        throw DomainError("portrait: at least one initial condition is required");
    }
    for (const auto& ic : spec.initial_conditions) {
        if (ic.size() != n) {
            throw DomainError("portrait: initial condition dimension does not match the system");
        }
    }
    if (spec.bounds.size() != n) {
        throw DomainError("portrait: need one bounds pair per axis");
    }
    for (const auto& b : spec.bounds) {
        if (!(b.min < b.max) || !std::isfinite(b.min) || !std::isfinite(b.max)) {
            throw DomainError("portrait: bounds require min < max");
        }
    }
    if (spec.resolution < 2) {
        throw DomainError("portrait: resolution must be >= 2");
    }
}

VectorFieldGrid vector_field_grid(const dynamics::LinearSystem& s, const std::vector<Bounds>& bounds,
                                  std::size_t resolution) {
    const std::size_t dim = s.dim();
    if (resolution < 2) {
        throw DomainError("vector_field_grid: resolution must be >= 2");
    }
    if (bounds.size() != dim) {
        throw DomainError("vector_field_grid: need one bounds pair per axis");
    }
    std::size_t total = 1;
    for (std::size_t k = 0; k < dim; ++k) {
        total *= resolution;
    }

    VectorFieldGrid grid;
    grid.bounds = bounds;
    grid.resolution = resolution;
    grid.points.reserve(total);
    const double last = static_cast<double>(resolution - 1);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::vector<double> p(dim);
        std::size_t rest = idx;
        for (std::size_t k = dim; k-- > 0;) {
            const std::size_t i = rest % resolution;
            rest /= resolution;
            p[k] = i + 1 == resolution ? bounds[k].max
                                       : bounds[k].min + (bounds[k].max - bounds[k].min) * (static_cast<double>(i) / last);
        }
        grid.points.push_back(std::move(p));
    }

    // SoA batch through the kernels
    std::vector<double> in(dim * total);
    std::vector<double> out(dim * total);
    for (std::size_t j = 0; j < total; ++j) {
        for (std::size_t k = 0; k < dim; ++k) {
            in[k * total + j] = grid.points[j][k];
        }
    }
    const auto m = s.matrix.packed();
    kernels::active().apply_matrix(m.data(), dim, in.data(), out.data(), total, total);
    grid.directions.assign(total, std::vector<double>(dim));
    for (std::size_t j = 0; j < total; ++j) {
        for (std::size_t k = 0; k < dim; ++k) {
            grid.directions[j][k] = out[k * total + j];
        }
    }
    return grid;
}

Viewport::Viewport(const std::vector<Bounds>& bounds, const Camera& camera) : bounds_(bounds) {
    if (bounds.size() != 2 && bounds.size() != 3) {
        throw DomainError("viewport: 2 or 3 axes required");
    }
    const double az = deg2rad(camera.azimuth_deg);
    const double el = deg2rad(camera.elevation_deg);
    right_ = {-std::sin(az), std::cos(az), 0.0};
    up_ = {-std::sin(el) * std::cos(az), -std::sin(el) * std::sin(az), std::cos(el)};
}

std::array<double, 2> Viewport::map(const std::vector<double>& x) const {
    if (bounds_.size() == 2) {
        const double u = (x[0] - bounds_[0].min) / (bounds_[0].max - bounds_[0].min);
        const double v = (x[1] - bounds_[1].min) / (bounds_[1].max - bounds_[1].min);
        return {kMargin + u * kPlot, kCanvas - kMargin - v * kPlot};
    }
    std::array<double, 3> unit{};
    for (std::size_t k = 0; k < 3; ++k) {
        unit[k] = 2.0 * (x[k] - bounds_[k].min) / (bounds_[k].max - bounds_[k].min) - 1.0;
    }
    const double sx = unit[0] * right_[0] + unit[1] * right_[1] + unit[2] * right_[2];
    const double sy = unit[0] * up_[0] + unit[1] * up_[1] + unit[2] * up_[2];
    // the unit cube projects inside a disc of radius sqrt(3)
    const double px_per_unit = (kPlot / 2.0) / std::sqrt(3.0);
    return {kCanvas / 2.0 + sx * px_per_unit, kCanvas / 2.0 - sy * px_per_unit};
}

std::string trajectory_csv(const dynamics::Trajectory& t, const std::vector<std::string>& labels) {
    std::string out = "t";
    for (const auto& l : labels) {
        out += "," + l;
    }
    out += "\n";
    for (std::size_t i = 0; i < t.times.size(); ++i) {
        out += svg::general(t.times[i], 9);
        for (double v : t.states[i]) {
            out += "," + svg::general(v, 9);
        }
        out += "\n";
    }
    return out;
}

RenderedPortrait render_portrait(const PortraitSpec& spec) {
    validate(spec);
    const auto& sys = spec.system;
    RenderedPortrait result;

    if (spec.integration.method == dynamics::Method::ClosedForm) {
        for (const auto& ic : spec.initial_conditions) {
            dynamics::BatchTrajectory bt;
            const auto solution = dynamics::closed_form_solution(sys, ic);
            try {
                bt.trajectory = dynamics::sample_closed_form(solution, spec.integration.dt, spec.integration.steps);
            } catch (const OverflowError& e) {
                // keep the finite prefix
                bt.overflow_after = e.last_finite_step();
                bt.trajectory = dynamics::sample_closed_form(solution, spec.integration.dt, e.last_finite_step());
            }
            result.trajectories.push_back(std::move(bt));
        }
    } else {
        result.trajectories = dynamics::integrate_batch(sys, spec.initial_conditions, spec.integration.dt,
                                                        spec.integration.steps, spec.integration.method, spec.jobs);
    }

    for (std::size_t i = 0; i < result.trajectories.size(); ++i) {
        result.csv[spec.name + "_" + std::to_string(i) + ".csv"] =
            trajectory_csv(result.trajectories[i].trajectory, sys.labels);
    }

    const Viewport vp(spec.bounds, spec.camera);
    svg::Writer w(kCanvas, kCanvas);
    std::string meta = "portrait " + spec.name + ": method=" + std::string(dynamics::method_name(spec.integration.method)) +
                       " dt=" + svg::general(spec.integration.dt, 9) +
                       " steps=" + std::to_string(spec.integration.steps) +
                       " initial_conditions=" + std::to_string(spec.initial_conditions.size());
    if (sys.dim() == 3) {
        meta += " azimuth=" + svg::general(spec.camera.azimuth_deg, 9) +
                " elevation=" + svg::general(spec.camera.elevation_deg, 9);
    }
    w.comment(meta);
    for (std::size_t i = 0; i < result.trajectories.size(); ++i) {
        if (const auto& stop = result.trajectories[i].overflow_after) {
            w.comment("overflow: initial condition " + std::to_string(i) + " truncated after step " +
                      std::to_string(*stop));
        }
    }
    draw_frame(w);
    draw_axes(w, vp, spec.bounds, sys.labels);
    draw_arrows(w, vp, vector_field_grid(sys, spec.bounds, spec.resolution));

    w.open_group("clip-path=\"url(#plot)\"");
    for (std::size_t i = 0; i < result.trajectories.size(); ++i) {
        const auto& states = result.trajectories[i].trajectory.states;
        std::vector<std::pair<double, double>> pts;
        pts.reserve(states.size());
        for (const auto& x : states) {
            const auto p = vp.map(x);
            pts.emplace_back(p[0], p[1]);
        }
        const char* color = kPalette[i % kPalette.size()];
        w.polyline(pts, "id=\"ic" + std::to_string(i) + "\" " + stroke(color, 1.5));
        w.circle(pts.front().first, pts.front().second, 3.0, std::string("fill=\"") + color + "\"");
    }
    w.close_group();
    result.svg = w.finish();
    return result;
}

std::string marker_csv(const marker::MarkerCurve& curve) {
    std::string out = "age,value\n";
    for (std::size_t i = 0; i < curve.ages.size(); ++i) {
        out += svg::general(curve.ages[i], 9) + "," + svg::general(curve.values[i], 9) + "\n";
    }
    return out;
}

std::string marker_chart(const std::vector<marker::MarkerCurve>& curves, const std::vector<std::string>& legend) {
    if (curves.empty()) {
        throw DomainError("marker_chart: no curves");
    }
    double lo = curves.front().ages.front();
    double hi = curves.front().ages.back();
    for (const auto& c : curves) {
        lo = std::min(lo, c.ages.front());
        hi = std::max(hi, c.ages.back());
    }
    const Viewport vp({{lo, hi}, {0.0, 1.0}}, Camera{});
    svg::Writer w(kCanvas, kCanvas);
    w.comment("marker chart: curves=" + std::to_string(curves.size()));
    draw_frame(w);
    const std::string label_style = "font-family=\"sans-serif\" font-size=\"14\" fill=\"#000000\"";
    w.text(kCanvas / 2.0, kCanvas - 12.0, "age (years)", label_style + " text-anchor=\"middle\"");
    w.text(kMargin, kMargin - 8.0, "1", label_style);
    w.text(kMargin, kCanvas - kMargin + 16.0, svg::general(lo, 6), label_style);
    w.text(kCanvas - kMargin, kCanvas - kMargin + 16.0, svg::general(hi, 6), label_style + " text-anchor=\"end\"");
    for (std::size_t i = 0; i < curves.size(); ++i) {
        std::vector<std::pair<double, double>> pts;
        for (std::size_t k = 0; k < curves[i].ages.size(); ++k) {
            const auto p = vp.map({curves[i].ages[k], curves[i].values[k]});
            pts.emplace_back(p[0], p[1]);
        }
        const char* color = kPalette[i % kPalette.size()];
        w.polyline(pts, stroke(color, 2.0));
        if (i < legend.size()) {
            w.text(kMargin + 12.0, kMargin + 20.0 + 18.0 * static_cast<double>(i), legend[i],
                   label_style + " fill=\"" + color + "\"");
        }
    }
    return w.finish();
}

std::string polytope_wireframe(const polytope::Polytope& first, const polytope::Polytope* second,
                               const Camera& camera) {
    std::vector<Bounds> bounds(3, Bounds{0.0, 1.0});
    auto widen = [&](const polytope::Polytope& p) {
        for (const auto& v : p.vertices) {
            for (std::size_t k = 0; k < 3; ++k) {
                bounds[k].min = std::min(bounds[k].min, v[k]);
                bounds[k].max = std::max(bounds[k].max, v[k]);
            }
        }
    };
    widen(first);
    if (second != nullptr) {
        widen(*second);
    }
    const Viewport vp(bounds, camera);
    svg::Writer w(kCanvas, kCanvas);
    w.comment(second != nullptr ? "polytope wireframe: combined" : "polytope wireframe");
    w.rect(0, 0, kCanvas, kCanvas, "fill=\"white\"");
    draw_axes(w, vp, bounds, {"E_A", "E_B", "P(E_C|E_A,E_B)"});

    auto draw = [&](const std::vector<polytope::Edge>& list, const char* color) {
        for (const auto& e : list) {
            const auto a = vp.map({e.first[0], e.first[1], e.first[2]});
            const auto b = vp.map({e.second[0], e.second[1], e.second[2]});
            w.line(a[0], a[1], b[0], b[1], stroke(color, 2.0));
        }
    };
    std::vector<polytope::Vec3> dots = first.vertices;
    if (second == nullptr) {
        draw(polytope::edges(first), "#1f4fd8");
    } else {
        const auto c = polytope::combine(first, *second);
        draw(c.only_first, "#1f4fd8");
        draw(c.only_second, "#d62728");
        draw(c.shared_edges, "#2ca02c");
        dots.insert(dots.end(), second->vertices.begin(), second->vertices.end());
    }
    for (const auto& v : dots) {
        const auto p = vp.map({v[0], v[1], v[2]});
        w.circle(p[0], p[1], 3.5, "fill=\"#000000\"");
    }
    return w.finish();
}

} // namespace ethdyn::portrait
