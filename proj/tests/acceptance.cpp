// Acceptance checks, one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "ethdyn/cli.hpp"
#include "ethdyn/dynamics.hpp"
#include "ethdyn/games.hpp"
#include "ethdyn/marker.hpp"
#include "ethdyn/polytope.hpp"
#include "ethdyn/scenario.hpp"

using namespace ethdyn;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances.
constexpr double kEigenRel = 1e-9;
constexpr double kExpRel = 1e-6;
constexpr double kEulerRatio = 2.0;
constexpr double kEulerRatioTol = 0.2;
constexpr double kQuadraticDrift = 1e-6;
constexpr double kReturnFraction = 0.05;
constexpr double kGeomTol = 1e-9;
constexpr double kSymmetryTol = 1e-12;

struct Check {
    bool ok = true;
    std::string detail;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            if (detail.empty()) {
                detail = what;
            }
        }
    }
};

int failures = 0;

void report(int n, const std::string& title, const std::function<void(Check&)>& body) {
    Check c;
    try {
        body(c);
    } catch (const std::exception& e) {
        c.ok = false;
        c.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s criterion %d: %s%s%s\n", c.ok ? "PASS" : "FAIL", n, title.c_str(),
                c.detail.empty() ? "" : " -- ", c.detail.c_str());
    failures += c.ok ? 0 : 1;
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

dynamics::CouplingParams coupling(double a1, double b1, double a2, double b2) {
    dynamics::CouplingParams p;
    p.alpha1 = a1;
    p.beta1 = b1;
    p.alpha2 = a2;
    p.beta2 = b2;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> column(const std::string& csv, std::size_t col) {
    std::vector<std::string> out;
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        std::istringstream cells(line);
        std::string cell;
        for (std::size_t k = 0; k <= col; ++k) {
            std::getline(cells, cell, ',');
        }
        out.push_back(cell);
    }
    return out;
}

bool same_set(std::vector<polytope::Vec3> a, std::vector<polytope::Vec3> b) {
    if (a.size() != b.size()) {
        return false;
    }
    for (const auto& p : a) {
        auto it = std::find_if(b.begin(), b.end(), [&](const auto& q) { return polytope::same_point(p, q, kGeomTol); });
        if (it == b.end()) {
            return false;
        }
        b.erase(it);
    }
    return true;
}

bool has_facet(const polytope::Polytope& p, polytope::Vec3 n, double b) {
    return std::any_of(p.halfspaces.begin(), p.halfspaces.end(), [&](const polytope::Halfspace& h) {
        return polytope::same_point(h.normal, n, kGeomTol) && std::abs(h.offset - b) <= kGeomTol;
    });
}

polytope::Polytope extremal(polytope::Connective c) {
    auto t = polytope::truth_table({"E_A", "UE_A", "E_B", "UE_B"}, {{"E_C", c, {"E_A", "E_B"}}});
    t = polytope::restrict_extremal(t, {{"E_A", "UE_A"}, {"E_B", "UE_B"}});
    return polytope::polytope_from_vertices(polytope::project_rows(t, {"E_A", "E_B", "E_C"}));
}

// Exhaustive oracle: 4 profiles, 2 unilateral deviations each.
std::vector<games::Profile> oracle_nash(const games::OrdinalGame& g) {
    auto better = [&](int player, double a, double b) {
        return g.orientation[player] == games::Orientation::Maximize ? a > b : a < b;
    };
    std::vector<games::Profile> out;
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            const bool row_dev = better(0, g.payoff(0, 1 - r, c), g.payoff(0, r, c));
            const bool col_dev = better(1, g.payoff(1, r, 1 - c), g.payoff(1, r, c));
            if (!row_dev && !col_dev) {
                out.emplace_back(r, c);
            }
        }
    }
    return out;
}

std::optional<int> oracle_dominant(const games::OrdinalGame& g, int player) {
    for (int s = 0; s < 2; ++s) {
        bool never_worse = true;
        bool sometimes_better = false;
        for (int o = 0; o < 2; ++o) {
            const double mine = player == 0 ? g.payoff(0, s, o) : g.payoff(1, o, s);
            const double alt = player == 0 ? g.payoff(0, 1 - s, o) : g.payoff(1, o, 1 - s);
            const bool max = g.orientation[player] == games::Orientation::Maximize;
            never_worse = never_worse && (max ? mine >= alt : mine <= alt);
            sometimes_better = sometimes_better || (max ? mine > alt : mine < alt);
        }
        if (never_worse && sometimes_better) {
            return s;
        }
    }
    return std::nullopt;
}

} // namespace

int main() {
    std::mt19937_64 rng(7);

    report(1, "Jacobian classifications of the three unethical duo cases", [](Check& c) {
        struct Case {
            double a1, b1, a2, b2, tr, det;
            dynamics::EquilibriumKind kind;
        };
        const Case cases[] = {{2, 1, 2, 1, 3, 0, dynamics::EquilibriumKind::DegenerateLine},
                              {1, 2, 3, 1, 2, -5, dynamics::EquilibriumKind::Saddle},
                              {2, 1, 1, 3, 5, 5, dynamics::EquilibriumKind::UnstableNode}};
        for (const auto& k : cases) {
            const auto s = dynamics::build_two_player(coupling(k.a1, k.b1, k.a2, k.b2),
                                                      dynamics::TwoPlayerVariant::UnethicalDuo);
            const auto cls = dynamics::classify_equilibrium(s);
            c.expect(cls.trace == k.tr && cls.determinant == k.det && cls.kind == k.kind,
                     "tr=" + num(cls.trace) + " det=" + num(cls.determinant) + " kind=" +
                         std::string(dynamics::kind_name(cls.kind)));
        }
    });

    report(2, "psi eigenvalues equal +-sqrt(alpha1^2 - beta1^2) for 100 random pairs", [&](Check& c) {
        std::uniform_real_distribution<double> u(-10, 10);
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const double a = u(rng);
            const double b = u(rng);
            const auto e = dynamics::eigen(dynamics::build_psi(a, b));
            const double d = a * a - b * b;
            const linalg::Complex want = d >= 0 ? linalg::Complex(std::sqrt(d), 0) : linalg::Complex(0, std::sqrt(-d));
            const double err = std::max(std::abs(e[0].value - want), std::abs(e[1].value + want)) / std::abs(want);
            worst = std::max(worst, err);
        }
        c.expect(worst <= kEigenRel, "worst relative error " + num(worst));
    });

    report(3, "decoupled exponential from closed form and RK4 at t=1", [](Check& c) {
        for (double a : {-2.0, -1.0, 1.0, 2.0}) {
            const auto s = dynamics::build_two_player(coupling(a, 0, 0, 0.5),
                                                      dynamics::TwoPlayerVariant::EthicalBobCrookAlice);
            const double want = 0.01 * std::exp(a);
            const double closed = dynamics::closed_form_solution(s, {0.01, 1.5})(1.0)[0];
            const double rk4 = dynamics::integrate(s, {0.01, 1.5}, 1e-3, 1000, dynamics::Method::RK4).states.back()[0];
            c.expect(std::abs(closed - want) <= kExpRel * std::abs(want), "closed form, alpha1=" + num(a));
            c.expect(std::abs(rk4 - want) <= kExpRel * std::abs(want), "RK4, alpha1=" + num(a));
        }
    });

    report(4, "Euler error halves with dt on psi(2,1) at t=0.5", [](Check& c) {
        const auto s = dynamics::build_psi(2, 1);
        const auto exact = dynamics::closed_form_solution(s, {2, 2})(0.5);
        std::vector<double> err;
        for (double dt : {1e-2, 5e-3, 2.5e-3}) {
            const auto x = dynamics::integrate(s, {2, 2}, dt, static_cast<std::size_t>(std::llround(0.5 / dt)),
                                               dynamics::Method::Euler)
                               .states.back();
            err.push_back(std::hypot(x[0] - exact[0], x[1] - exact[1]));
        }
        const double r1 = err[0] / err[1];
        const double r2 = err[1] / err[2];
        c.expect(std::abs(r1 - kEulerRatio) <= kEulerRatioTol && std::abs(r2 - kEulerRatio) <= kEulerRatioTol,
                 "ratios " + num(r1) + ", " + num(r2));
    });

    report(5, "psi(1,2) conserves x^2+xy+y^2 under RK4 and closes after 2pi/sqrt(3)", [](Check& c) {
        const auto s = dynamics::build_psi(1, 2);
        const auto q = dynamics::conserved_form(s);
        c.expect(q && q->a == 1 && q->b == 1 && q->c == 1, "conserved form is not x^2+xy+y^2");
        const std::vector<double> x0{1.0, 0.5};
        const auto t = dynamics::integrate(s, x0, 1e-3, 5000, dynamics::Method::RK4);
        auto Q = [](const std::vector<double>& x) { return x[0] * x[0] + x[0] * x[1] + x[1] * x[1]; };
        double drift = 0.0;
        for (const auto& x : t.states) {
            drift = std::max(drift, std::abs(Q(x) - Q(x0)) / Q(x0));
        }
        c.expect(drift <= kQuadraticDrift, "drift " + num(drift));
        const auto n = static_cast<std::size_t>(std::llround(2 * std::numbers::pi / std::sqrt(3.0) / 1e-3));
        const auto& back = t.states[n];
        const double miss = std::hypot(back[0] - x0[0], back[1] - x0[1]) / std::hypot(x0[0], x0[1]);
        c.expect(miss <= kReturnFraction, "return miss " + num(miss));
    });

    report(6, "AND/OR polytope facets, shared vertices and V/H round trip", [](Check& c) {
        const auto and_p = extremal(polytope::Connective::And);
        const auto or_p = extremal(polytope::Connective::Or);
        c.expect(and_p.halfspaces.size() == 4 && has_facet(and_p, {-1, 0, 1}, 0) && has_facet(and_p, {0, -1, 1}, 0) &&
                     has_facet(and_p, {1, 1, -1}, 1) && has_facet(and_p, {0, 0, -1}, 0),
                 "AND facets");
        c.expect(or_p.halfspaces.size() == 4 && has_facet(or_p, {1, 0, -1}, 0) && has_facet(or_p, {0, 1, -1}, 0) &&
                     has_facet(or_p, {-1, -1, 1}, 0) && has_facet(or_p, {0, 0, 1}, 1),
                 "OR facets");
        // vertex enumeration from the facets alone
        const auto and_h = polytope::polytope_from_halfspaces(and_p.halfspaces);
        const auto or_h = polytope::polytope_from_halfspaces(or_p.halfspaces);
        c.expect(same_set(and_h.vertices, {{0, 0, 0}, {0, 1, 0}, {1, 0, 0}, {1, 1, 1}}), "AND vertices from facets");
        c.expect(same_set(or_h.vertices, {{0, 0, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 1}}), "OR vertices from facets");
        c.expect(same_set(and_h.vertices, and_p.vertices) && same_set(or_h.vertices, or_p.vertices), "round trip");
        const auto combined = polytope::combine(and_p, or_p);
        c.expect(same_set(combined.shared_vertices, {{0, 0, 0}, {1, 1, 1}}), "shared vertices");
    });

    report(7, "game verdicts for PD, Keep/Return and FEB(50) agree with the brute-force oracle", [](Check& c) {
        const auto pd = games::prisoners_dilemma();
        const auto kr = games::keep_return();
        const auto feb = games::feb_transform(kr, 50);
        const games::Profile defect{1, 1};
        const games::Profile keep{1, 1};
        const games::Profile ret{0, 0};
        c.expect(pd.labels[0][1] == "Defect" && kr.labels[0][1] == "Keep" && kr.labels[0][0] == "Return", "labels");

        const auto pd_dom = games::dominant_strategies(pd);
        c.expect(pd_dom[0] == 1 && pd_dom[1] == 1, "PD dominant");
        c.expect(games::pure_nash_equilibria(pd) == std::vector<games::Profile>{defect}, "PD Nash");
        const auto kr_dom = games::dominant_strategies(kr);
        c.expect(kr_dom[0] == keep.first && kr_dom[1] == keep.second, "Keep/Return dominant");
        c.expect(games::pure_nash_equilibria(feb) == std::vector<games::Profile>{ret}, "FEB Nash");

        for (const auto* g : {&pd, &kr, &feb}) {
            c.expect(games::pure_nash_equilibria(*g) == oracle_nash(*g), "Nash disagrees with oracle");
            const auto dom = games::dominant_strategies(*g);
            c.expect(dom[0] == oracle_dominant(*g, 0) && dom[1] == oracle_dominant(*g, 1),
                     "dominance disagrees with oracle");
        }
    });

    report(8, "marker midpoint, symmetry and CF smoothing", [&](Check& c) {
        const marker::MarkerParams p{50, 0.1, 70};
        c.expect(marker::marker_value(50, p) == 0.5, "midpoint");
        std::uniform_real_distribution<double> u(0, 50);
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const double d = u(rng);
            worst = std::max(worst, std::abs(marker::marker_value(50 + d, p) + marker::marker_value(50 - d, p) - 1));
        }
        c.expect(worst <= kSymmetryTol, "symmetry error " + num(worst));
        for (double tf : {0.1, 0.02}) {
            double previous = INFINITY;
            for (double cf : {10.0, 20.0, 50.0, 70.0}) {
                const double s = marker::max_slope(marker::marker_curve(0, 100, marker::kDefaultSamples, {50, tf, cf}));
                c.expect(s < previous, "max slope not decreasing at tf=" + num(tf) + " cf=" + num(cf));
                previous = s;
            }
        }
    });

    report(9, "Carl: Euler E_C is (1+g3 dt)^n E_C(0) on fig14a; g3=0 keeps E_C constant", [](Check& c) {
        const auto* preset = scenario::PresetRegistry::instance().find("fig14a");
        const auto& params = preset->scenario.params;
        dynamics::CouplingParams p = coupling(params["coupling"]["alpha1"], params["coupling"]["beta1"],
                                              params["coupling"]["alpha2"], params["coupling"]["beta2"]);
        p.gamma2 = params["coupling"]["gamma2"].get<double>();
        p.gamma3 = params["coupling"]["gamma3"].get<double>();
        const double dt = params["integration"]["dt"];
        const std::size_t steps = params["integration"]["steps"];
        const auto s = dynamics::build_three_player(p, dynamics::CarlAffects::AliceOnly);
        std::vector<std::vector<double>> ics;
        for (const auto& ic : params["initial_conditions"]) {
            ics.push_back(ic.get<std::vector<double>>());
        }
        const auto batch = dynamics::integrate_batch(s, ics, dt, steps, dynamics::Method::Euler);
        const double factor = 1.0 + *p.gamma3 * dt;
        std::size_t mismatches = 0;
        for (std::size_t i = 0; i < ics.size(); ++i) {
            double ec = ics[i][2];
            for (const auto& x : batch[i].trajectory.states) {
                mismatches += x[2] == ec ? 0 : 1;
                ec *= factor;
            }
        }
        c.expect(mismatches == 0, std::to_string(mismatches) + " E_C values differ from the repeated product");

        auto flat = preset->scenario;
        flat.name = "fig14a_flat";
        flat.params["coupling"]["gamma3"] = 0;
        const auto result = scenario::run_scenario(flat);
        for (std::size_t i = 0; i < ics.size(); ++i) {
            const auto col = column(result.files.at("fig14a_flat_" + std::to_string(i) + ".csv"), 3);
            c.expect(col.size() == steps + 1 &&
                         std::all_of(col.begin(), col.end(), [&](const std::string& v) { return v == col.front(); }),
                     "E_C column varies for initial condition " + std::to_string(i));
        }
    });

    report(10, "preset fig7a is byte-identical across runs with 8 trajectories", [](Check& c) {
        const auto base = fs::temp_directory_path() / "ethdyn_acceptance";
        fs::remove_all(base);
        std::ostringstream sink;
        for (const char* run : {"a", "b"}) {
            const int code = cli::run({"--out", (base / run).string(), "preset", "fig7a"}, sink, sink);
            c.expect(code == 0, "exit status " + std::to_string(code));
        }
        std::vector<std::string> names{"fig7a.svg"};
        for (int i = 0; i < 8; ++i) {
            names.push_back("fig7a_" + std::to_string(i) + ".csv");
        }
        for (const auto& n : names) {
            c.expect(fs::exists(base / "a" / n), "missing " + n);
            c.expect(slurp(base / "a" / n) == slurp(base / "b" / n), n + " differs");
        }
        const auto svg = slurp(base / "a" / "fig7a.svg");
        std::size_t lines = 0;
        for (auto pos = svg.find("<polyline"); pos != std::string::npos; pos = svg.find("<polyline", pos + 1)) {
            ++lines;
        }
        c.expect(lines == 8, std::to_string(lines) + " polylines");
        fs::remove_all(base);
    });

    return failures;
}
