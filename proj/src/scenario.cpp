#include "ethdyn/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <regex>

#include "ethdyn/dynamics.hpp"
#include "ethdyn/games.hpp"
#include "ethdyn/marker.hpp"
#include "ethdyn/polytope.hpp"
#include "ethdyn/portrait.hpp"

namespace ethdyn::scenario {

namespace {

using Keys = std::initializer_list<std::string_view>;

constexpr std::size_t kMaxSteps = 10'000'000;
constexpr std::size_t kMaxResolution = 200;

[[noreturn]] void fail(const std::string& path, const std::string& constraint) {
    throw ValidationError(path, constraint);
}

std::string join(const std::string& path, std::string_view key) { return path + "." + std::string(key); }
std::string index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

bool contains_key(Keys keys, std::string_view k) { return std::find(keys.begin(), keys.end(), k) != keys.end(); }

void expect_object(const Json& j, const std::string& path) {
    if (!j.is_object()) {
        fail(path, "must be an object");
    }
}

void only_keys(const Json& obj, const std::string& path, Keys allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!contains_key(allowed, it.key())) {
            fail(join(path, it.key()), "unknown field");
        }
    }
}

const Json& require(const Json& obj, std::string_view key, const std::string& path) {
    const auto it = obj.find(std::string(key));
    if (it == obj.end()) {
        fail(join(path, key), "required");
    }
    return *it;
}

double real(const Json& j, const std::string& path) {
    if (!j.is_number()) {
        fail(path, "must be a number");
    }
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
        fail(path, "must be finite");
    }
    return v;
}

double positive(const Json& j, const std::string& path) {
    const double v = real(j, path);
    if (!(v > 0.0)) {
        fail(path, "> 0");
    }
    return v;
}

double nonnegative(const Json& j, const std::string& path) {
    const double v = real(j, path);
    if (!(v >= 0.0)) {
        fail(path, ">= 0");
    }
    return v;
}

double unit_interval(const Json& j, const std::string& path) {
    const double v = real(j, path);
    if (v < 0.0 || v > 1.0) {
        fail(path, "in [0, 1]");
    }
    return v;
}

std::size_t integer(const Json& j, const std::string& path, std::size_t lo, std::size_t hi) {
    if (!j.is_number_integer()) {
        fail(path, "must be an integer");
    }
    const auto v = j.get<long long>();
    if (v < static_cast<long long>(lo)) {
        fail(path, ">= " + std::to_string(lo));
    }
    if (v > static_cast<long long>(hi)) {
        fail(path, "<= " + std::to_string(hi));
    }
    return static_cast<std::size_t>(v);
}

std::string one_of(const Json& j, const std::string& path, Keys options) {
    std::string list;
    for (auto o : options) {
        list += (list.empty() ? "" : "|") + std::string(o);
    }
    if (!j.is_string() || !contains_key(options, j.get<std::string>())) {
        fail(path, "one of " + list);
    }
    return j.get<std::string>();
}

Json vector_of(const Json& j, const std::string& path, std::size_t n) {
    if (!j.is_array() || j.size() != n) {
        fail(path, "must be an array of " + std::to_string(n) + " numbers");
    }
    Json out = Json::array();
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(number(real(j[i], index(path, i))));
    }
    return out;
}

Json points_of(const Json& j, const std::string& path, std::size_t n) {
    if (!j.is_array() || j.empty()) {
        fail(path, "must be a non-empty array");
    }
    Json out = Json::array();
    for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(vector_of(j[i], index(path, i), n));
    }
    return out;
}

Json camera_of(const Json* j, const std::string& path) {
    const portrait::Camera defaults;
    Json out{{"azimuth", number(defaults.azimuth_deg)}, {"elevation", number(defaults.elevation_deg)}};
    if (j != nullptr) {
        expect_object(*j, path);
        only_keys(*j, path, {"azimuth", "elevation"});
        for (const char* key : {"azimuth", "elevation"}) {
            if (j->contains(key)) {
                out[key] = number(real((*j)[key], join(path, key)));
            }
        }
    }
    return out;
}

const Json* optional_field(const Json& obj, std::string_view key) {
    const auto it = obj.find(std::string(key));
    return it == obj.end() ? nullptr : &*it;
}

// ---- per-kind schemas; each returns the params with defaults filled in

Json check_simulate(const Json& p, std::size_t dim) {
    const std::string base = "params";
    expect_object(p, base);
    if (dim == 2) {
        only_keys(p, base, {"variant", "coupling", "initial_conditions", "integration", "bounds", "resolution"});
    } else {
        only_keys(p, base,
                  {"carl_affects", "coupling", "initial_conditions", "integration", "bounds", "resolution", "camera"});
    }
    Json out;
    std::string variant;
    bool both = false;
    if (dim == 2) {
        variant = one_of(require(p, "variant", base), join(base, "variant"),
                         {"ethical_bob_crook_alice", "ethical_alice_crook_bob", "unethical_duo", "ethical_duo", "psi"});
        out["variant"] = variant;
    } else {
        const auto affects =
            one_of(require(p, "carl_affects", base), join(base, "carl_affects"), {"alice", "alice_and_bob"});
        both = affects == "alice_and_bob";
        out["carl_affects"] = affects;
    }

    const std::string cpath = join(base, "coupling");
    const Json& c = require(p, "coupling", base);
    expect_object(c, cpath);
    only_keys(c, cpath, {"alpha1", "beta1", "alpha2", "beta2", "gamma1", "gamma2", "gamma3"});
    Json coupling;
    for (const char* key : {"alpha1", "beta1"}) {
        coupling[key] = number(real(require(c, key, cpath), join(cpath, key)));
    }
    if (variant == "psi") {
        // alpha2 and beta2 are implied; accept them only when consistent
        const double a1 = coupling["alpha1"].get<double>();
        const double b1 = coupling["beta1"].get<double>();
        if (const Json* a2 = optional_field(c, "alpha2"); a2 && real(*a2, join(cpath, "alpha2")) != -b1) {
            fail(join(cpath, "alpha2"), "= -beta1 for psi");
        }
        if (const Json* b2 = optional_field(c, "beta2"); b2 && real(*b2, join(cpath, "beta2")) != -a1) {
            fail(join(cpath, "beta2"), "= -alpha1 for psi");
        }
        coupling["alpha2"] = number(-b1);
        coupling["beta2"] = number(-a1);
    } else {
        for (const char* key : {"alpha2", "beta2"}) {
            coupling[key] = number(real(require(c, key, cpath), join(cpath, key)));
        }
    }
    if (dim == 2) {
        for (const char* key : {"gamma1", "gamma2", "gamma3"}) {
            if (c.contains(key)) {
                fail(join(cpath, key), "only allowed for simulate3d");
            }
        }
    } else {
        if (both) {
            coupling["gamma1"] = number(real(require(c, "gamma1", cpath), join(cpath, "gamma1")));
        } else if (c.contains("gamma1")) {
            fail(join(cpath, "gamma1"), "only allowed when carl_affects is alice_and_bob");
        }
        for (const char* key : {"gamma2", "gamma3"}) {
            coupling[key] = number(real(require(c, key, cpath), join(cpath, key)));
        }
    }
    out["coupling"] = coupling;

    out["initial_conditions"] =
        points_of(require(p, "initial_conditions", base), join(base, "initial_conditions"), dim);

    const portrait::IntegrationSettings defaults;
    Json integration{{"method", "euler"},
                     {"dt", number(defaults.dt)},
                     {"steps", dim == 2 ? defaults.steps : std::size_t{300}}};
    if (const Json* in = optional_field(p, "integration")) {
        const std::string ipath = join(base, "integration");
        expect_object(*in, ipath);
        only_keys(*in, ipath, {"method", "dt", "steps"});
        if (const Json* m = optional_field(*in, "method")) {
            integration["method"] = one_of(*m, join(ipath, "method"), {"euler", "rk4", "closed_form"});
            if (dim == 3 && integration["method"] == "closed_form") {
                fail(join(ipath, "method"), "closed_form requires simulate2d");
            }
        }
        if (const Json* dt = optional_field(*in, "dt")) {
            integration["dt"] = number(positive(*dt, join(ipath, "dt")));
        }
        if (const Json* steps = optional_field(*in, "steps")) {
            integration["steps"] = integer(*steps, join(ipath, "steps"), 1, kMaxSteps);
        }
    }
    out["integration"] = integration;

    Json bounds = Json::array();
    if (const Json* b = optional_field(p, "bounds")) {
        const std::string bpath = join(base, "bounds");
        if (!b->is_array() || b->size() != dim) {
            fail(bpath, "must be an array of " + std::to_string(dim) + " [min, max] pairs");
        }
        for (std::size_t k = 0; k < dim; ++k) {
            const auto pair = vector_of((*b)[k], index(bpath, k), 2);
            if (!(pair[0].get<double>() < pair[1].get<double>())) {
                fail(index(bpath, k), "min < max");
            }
            bounds.push_back(pair);
        }
    } else {
        const portrait::Bounds d;
        for (std::size_t k = 0; k < dim; ++k) {
            bounds.push_back(Json::array({number(d.min), number(d.max)}));
        }
    }
    out["bounds"] = bounds;

    out["resolution"] = dim == 2 ? portrait::kDefaultResolution2d : portrait::kDefaultResolution3d;
    if (const Json* r = optional_field(p, "resolution")) {
        out["resolution"] = integer(*r, join(base, "resolution"), 2, kMaxResolution);
    }
    if (dim == 3) {
        out["camera"] = camera_of(optional_field(p, "camera"), join(base, "camera"));
    }
    return out;
}

Json check_marker(const Json& p) {
    const std::string base = "params";
    expect_object(p, base);
    only_keys(p, base, {"curves", "ages", "samples"});
    const Json& curves = require(p, "curves", base);
    const std::string cpath = join(base, "curves");
    if (!curves.is_array() || curves.empty()) {
        fail(cpath, "must be a non-empty array");
    }
    const marker::MarkerParams d;
    Json out;
    out["curves"] = Json::array();
    for (std::size_t i = 0; i < curves.size(); ++i) {
        const std::string path = index(cpath, i);
        const Json& c = curves[i];
        expect_object(c, path);
        only_keys(c, path, {"a0", "tf", "cf", "label"});
        Json curve{{"a0", number(d.a0)}, {"tf", number(d.tf)}, {"cf", number(d.cf)}};
        if (const Json* v = optional_field(c, "a0")) {
            curve["a0"] = number(nonnegative(*v, join(path, "a0")));
        }
        if (const Json* v = optional_field(c, "tf")) {
            curve["tf"] = number(positive(*v, join(path, "tf")));
        }
        if (const Json* v = optional_field(c, "cf")) {
            curve["cf"] = number(positive(*v, join(path, "cf")));
        }
        if (const Json* v = optional_field(c, "label")) {
            if (!v->is_string()) {
                fail(join(path, "label"), "must be a string");
            }
            curve["label"] = *v;
        } else {
            curve["label"] = "CF=" + curve["cf"].dump();
        }
        out["curves"].push_back(curve);
    }
    out["ages"] = Json::array({0, 100});
    if (const Json* a = optional_field(p, "ages")) {
        const auto pair = vector_of(*a, join(base, "ages"), 2);
        if (!(pair[0].get<double>() < pair[1].get<double>())) {
            fail(join(base, "ages"), "start < end");
        }
        if (pair[0].get<double>() < 0.0) {
            fail(index(join(base, "ages"), 0), ">= 0");
        }
        out["ages"] = pair;
    }
    out["samples"] = marker::kDefaultSamples;
    if (const Json* s = optional_field(p, "samples")) {
        out["samples"] = integer(*s, join(base, "samples"), 2, kMaxSteps);
    }
    return out;
}

Json expand_game(const Json& g, const std::string& path) {
    if (g.is_string()) {
        const auto which = one_of(g, path, {"prisoners_dilemma", "keep_return"});
        const auto game = which == "prisoners_dilemma" ? games::prisoners_dilemma() : games::keep_return();
        Json out;
        out["payoffs"] = Json::array();
        for (const auto& row : game.payoffs) {
            Json r = Json::array();
            for (const auto& cell : row) {
                r.push_back(Json::array({number(cell.first), number(cell.second)}));
            }
            out["payoffs"].push_back(r);
        }
        out["orientation"] = Json::array();
        for (auto o : game.orientation) {
            out["orientation"].push_back(o == games::Orientation::Minimize ? "min" : "max");
        }
        out["labels"] = Json::array({Json::array({game.labels[0][0], game.labels[0][1]}),
                                     Json::array({game.labels[1][0], game.labels[1][1]})});
        return out;
    }
    expect_object(g, path);
    only_keys(g, path, {"payoffs", "orientation", "labels"});
    Json out;
    const std::string ppath = join(path, "payoffs");
    const Json& pay = require(g, "payoffs", path);
    if (!pay.is_array() || pay.size() != 2) {
        fail(ppath, "must be a 2x2 array of [row, column] payoff pairs");
    }
    out["payoffs"] = Json::array();
    for (std::size_t r = 0; r < 2; ++r) {
        if (!pay[r].is_array() || pay[r].size() != 2) {
            fail(index(ppath, r), "must hold two payoff pairs");
        }
        Json row = Json::array();
        for (std::size_t c = 0; c < 2; ++c) {
            row.push_back(vector_of(pay[r][c], index(index(ppath, r), c), 2));
        }
        out["payoffs"].push_back(row);
    }
    out["orientation"] = Json::array({"max", "max"});
    if (const Json* o = optional_field(g, "orientation")) {
        const std::string opath = join(path, "orientation");
        if (!o->is_array() || o->size() != 2) {
            fail(opath, "must be an array of two entries");
        }
        for (std::size_t k = 0; k < 2; ++k) {
            out["orientation"][k] = one_of((*o)[k], index(opath, k), {"min", "max"});
        }
    }
    out["labels"] = Json::array({Json::array({"0", "1"}), Json::array({"0", "1"})});
    if (const Json* l = optional_field(g, "labels")) {
        const std::string lpath = join(path, "labels");
        if (!l->is_array() || l->size() != 2) {
            fail(lpath, "must be an array of two label pairs");
        }
        for (std::size_t k = 0; k < 2; ++k) {
            const Json& pair = (*l)[k];
            if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() || !pair[1].is_string()) {
                fail(index(lpath, k), "must be two strings");
            }
            out["labels"][k] = pair;
        }
    }
    return out;
}

Json check_game(const Json& p) {
    const std::string base = "params";
    expect_object(p, base);
    only_keys(p, base, {"game", "feb_bonus", "phi"});
    Json out;
    out["game"] = expand_game(require(p, "game", base), join(base, "game"));
    if (const Json* b = optional_field(p, "feb_bonus")) {
        out["feb_bonus"] = number(nonnegative(*b, join(base, "feb_bonus")));
    }
    if (const Json* phi = optional_field(p, "phi")) {
        const std::string path = join(base, "phi");
        expect_object(*phi, path);
        only_keys(*phi, path, {"phi11", "phi21"});
        out["phi"] = {{"phi11", number(unit_interval(require(*phi, "phi11", path), join(path, "phi11")))},
                      {"phi21", number(unit_interval(require(*phi, "phi21", path), join(path, "phi21")))}};
    }
    return out;
}

Json check_shape(const Json& p, const std::string& path) {
    int given = 0;
    for (const char* key : {"table", "vertices", "halfspaces"}) {
        given += p.contains(key) ? 1 : 0;
    }
    if (given != 1) {
        fail(path, "exactly one of table, vertices, halfspaces");
    }
    Json out;
    if (const Json* t = optional_field(p, "table")) {
        out["table"] = one_of(*t, join(path, "table"), {"and", "or"});
    } else if (const Json* v = optional_field(p, "vertices")) {
        out["vertices"] = points_of(*v, join(path, "vertices"), 3);
    } else {
        const std::string hpath = join(path, "halfspaces");
        const Json& hs = p["halfspaces"];
        if (!hs.is_array() || hs.empty()) {
            fail(hpath, "must be a non-empty array");
        }
        out["halfspaces"] = Json::array();
        for (std::size_t i = 0; i < hs.size(); ++i) {
            const std::string item = index(hpath, i);
            expect_object(hs[i], item);
            only_keys(hs[i], item, {"a", "b"});
            out["halfspaces"].push_back({{"a", vector_of(require(hs[i], "a", item), join(item, "a"), 3)},
                                         {"b", number(real(require(hs[i], "b", item), join(item, "b")))}});
        }
    }
    return out;
}

Json check_polytope(const Json& p) {
    const std::string base = "params";
    expect_object(p, base);
    only_keys(p, base, {"table", "vertices", "halfspaces", "combine_with", "wireframe", "camera"});
    Json out = check_shape(p, base);
    if (const Json* other = optional_field(p, "combine_with")) {
        const std::string path = join(base, "combine_with");
        expect_object(*other, path);
        only_keys(*other, path, {"table", "vertices", "halfspaces"});
        out["combine_with"] = check_shape(*other, path);
    }
    out["wireframe"] = true;
    if (const Json* w = optional_field(p, "wireframe")) {
        if (!w->is_boolean()) {
            fail(join(base, "wireframe"), "must be a boolean");
        }
        out["wireframe"] = *w;
    }
    out["camera"] = camera_of(optional_field(p, "camera"), join(base, "camera"));
    return out;
}

// ---- execution helpers

Json vec_json(const std::vector<double>& v) {
    Json out = Json::array();
    for (double x : v) {
        out.push_back(number(x));
    }
    return out;
}

Json vec_json(const polytope::Vec3& v) { return vec_json(std::vector<double>(v.begin(), v.end())); }

Json complex_json(const linalg::Complex& z) { return {{"re", number(z.real())}, {"im", number(z.imag())}}; }

Json matrix_json(const linalg::SquareMatrix& m) {
    Json out = Json::array();
    for (const auto& row : m.rows()) {
        out.push_back(vec_json(row));
    }
    return out;
}

std::vector<double> doubles(const Json& j) { return j.get<std::vector<double>>(); }

dynamics::CouplingParams coupling_from(const Json& c) {
    dynamics::CouplingParams p;
    p.alpha1 = c["alpha1"].get<double>();
    p.beta1 = c["beta1"].get<double>();
    p.alpha2 = c["alpha2"].get<double>();
    p.beta2 = c["beta2"].get<double>();
    if (c.contains("gamma1")) {
        p.gamma1 = c["gamma1"].get<double>();
    }
    if (c.contains("gamma2")) {
        p.gamma2 = c["gamma2"].get<double>();
    }
    if (c.contains("gamma3")) {
        p.gamma3 = c["gamma3"].get<double>();
    }
    return p;
}

dynamics::LinearSystem system_from(const Scenario& s) {
    const Json& p = s.params;
    const auto coupling = coupling_from(p["coupling"]);
    if (s.kind == Kind::Simulate3d) {
        return dynamics::build_three_player(coupling, p["carl_affects"] == "alice_and_bob"
                                                          ? dynamics::CarlAffects::AliceAndBob
                                                          : dynamics::CarlAffects::AliceOnly);
    }
    const std::string variant = p["variant"];
    if (variant == "psi") {
        return dynamics::build_psi(coupling.alpha1, coupling.beta1);
    }
    auto v = dynamics::TwoPlayerVariant::EthicalBobCrookAlice;
    if (variant == "ethical_alice_crook_bob") {
        v = dynamics::TwoPlayerVariant::EthicalAliceCrookBob;
    } else if (variant == "unethical_duo") {
        v = dynamics::TwoPlayerVariant::UnethicalDuo;
    } else if (variant == "ethical_duo") {
        v = dynamics::TwoPlayerVariant::EthicalDuo;
    }
    return dynamics::build_two_player(coupling, v);
}

RunResult run_simulate(const Scenario& s, const RunOptions& options) {
    const Json& p = s.params;
    portrait::PortraitSpec spec;
    spec.name = s.name;
    spec.system = system_from(s);
    for (const auto& ic : p["initial_conditions"]) {
        spec.initial_conditions.push_back(doubles(ic));
    }
    spec.integration.method = *dynamics::parse_method(p["integration"]["method"].get<std::string>());
    spec.integration.dt = p["integration"]["dt"].get<double>();
    spec.integration.steps = p["integration"]["steps"].get<std::size_t>();
    for (const auto& b : p["bounds"]) {
        spec.bounds.push_back({b[0].get<double>(), b[1].get<double>()});
    }
    spec.resolution = p["resolution"].get<std::size_t>();
    if (p.contains("camera")) {
        spec.camera = {p["camera"]["azimuth"].get<double>(), p["camera"]["elevation"].get<double>()};
    }
    spec.jobs = std::max<std::size_t>(1, options.jobs);

    const auto rendered = portrait::render_portrait(spec);
    RunResult result;
    result.files = rendered.csv;
    result.files[s.name + ".svg"] = rendered.svg;

    Json& sum = result.summary;
    sum["name"] = s.name;
    sum["kind"] = std::string(kind_name(s.kind));
    sum["labels"] = spec.system.labels;
    sum["matrix"] = matrix_json(spec.system.matrix);
    sum["eigenvalues"] = Json::array();
    for (const auto& pair : dynamics::eigen(spec.system)) {
        sum["eigenvalues"].push_back(complex_json(pair.value));
    }
    if (spec.system.dim() == 2) {
        const auto c = dynamics::classify_equilibrium(spec.system);
        sum["classification"] = {{"kind", std::string(dynamics::kind_name(c.kind))},
                                 {"trace", number(c.trace)},
                                 {"determinant", number(c.determinant)},
                                 {"discriminant", number(c.discriminant)}};
        if (const auto q = dynamics::conserved_form(spec.system)) {
            sum["conserved_quadratic"] = {{"a", number(q->a)}, {"b", number(q->b)}, {"c", number(q->c)}};
        }
    }
    sum["integration"] = p["integration"];
    sum["trajectories"] = Json::array();
    for (std::size_t i = 0; i < rendered.trajectories.size(); ++i) {
        const auto& bt = rendered.trajectories[i];
        Json t{{"ic", i},
               {"initial", vec_json(spec.initial_conditions[i])},
               {"rows", bt.trajectory.states.size()},
               {"final", vec_json(bt.trajectory.states.back())}};
        t["overflow_after"] = bt.overflow_after ? Json(*bt.overflow_after) : Json(nullptr);
        sum["trajectories"].push_back(t);
    }
    return result;
}

RunResult run_marker(const Scenario& s) {
    const Json& p = s.params;
    const double start = p["ages"][0].get<double>();
    const double end = p["ages"][1].get<double>();
    const auto samples = p["samples"].get<std::size_t>();
    RunResult result;
    std::vector<marker::MarkerCurve> curves;
    std::vector<std::string> legend;
    Json list = Json::array();
    for (std::size_t i = 0; i < p["curves"].size(); ++i) {
        const Json& c = p["curves"][i];
        const marker::MarkerParams mp{c["a0"].get<double>(), c["tf"].get<double>(), c["cf"].get<double>()};
        auto curve = marker::marker_curve(start, end, samples, mp);
        result.files[s.name + "_" + std::to_string(i) + ".csv"] = portrait::marker_csv(curve);
        list.push_back({{"label", c["label"]},
                        {"a0", c["a0"]},
                        {"tf", c["tf"]},
                        {"cf", c["cf"]},
                        {"max_slope", number(marker::max_slope(curve))},
                        {"value_at_a0", number(marker::marker_value(mp.a0, mp))}});
        legend.push_back(c["label"].get<std::string>());
        curves.push_back(std::move(curve));
    }
    result.files[s.name + ".svg"] = portrait::marker_chart(curves, legend);
    result.summary = {{"name", s.name}, {"kind", "marker"}, {"ages", p["ages"]}, {"samples", samples}, {"curves", list}};
    return result;
}

games::OrdinalGame game_from(const Json& g) {
    games::OrdinalGame game;
    for (std::size_t r = 0; r < 2; ++r) {
        for (std::size_t c = 0; c < 2; ++c) {
            game.payoffs[r][c] = {g["payoffs"][r][c][0].get<double>(), g["payoffs"][r][c][1].get<double>()};
        }
    }
    for (std::size_t k = 0; k < 2; ++k) {
        game.orientation[k] = g["orientation"][k] == "min" ? games::Orientation::Minimize : games::Orientation::Maximize;
        game.labels[k] = {g["labels"][k][0].get<std::string>(), g["labels"][k][1].get<std::string>()};
    }
    return game;
}

Json verdict(const games::OrdinalGame& g) {
    Json out;
    out["payoffs"] = Json::array();
    for (const auto& row : g.payoffs) {
        Json r = Json::array();
        for (const auto& cell : row) {
            r.push_back(Json::array({number(cell.first), number(cell.second)}));
        }
        out["payoffs"].push_back(r);
    }
    const auto dom = games::dominant_strategies(g);
    out["dominant"] = Json::array();
    for (std::size_t k = 0; k < 2; ++k) {
        out["dominant"].push_back(dom[k] ? Json(g.labels[k][*dom[k]]) : Json(nullptr));
    }
    out["nash"] = Json::array();
    for (const auto& [r, c] : games::pure_nash_equilibria(g)) {
        out["nash"].push_back(Json::array({g.labels[0][r], g.labels[1][c]}));
    }
    return out;
}

RunResult run_game(const Scenario& s) {
    const Json& p = s.params;
    const auto game = game_from(p["game"]);
    games::validate(game);
    RunResult result;
    Json& sum = result.summary;
    sum["name"] = s.name;
    sum["kind"] = "game";
    sum["orientation"] = p["game"]["orientation"];
    sum["labels"] = p["game"]["labels"];
    sum["game"] = verdict(game);
    if (p.contains("feb_bonus")) {
        sum["feb_bonus"] = p["feb_bonus"];
        sum["feb"] = verdict(games::feb_transform(game, p["feb_bonus"].get<double>()));
    }
    if (p.contains("phi")) {
        const games::BehaviorMatrix phi(p["phi"]["phi11"].get<double>(), p["phi"]["phi21"].get<double>());
        Json pairs = Json::array();
        for (const auto& pair : games::phi_eigen(phi)) {
            Json vec = Json::array();
            for (const auto& z : pair.vector) {
                vec.push_back(complex_json(z));
            }
            pairs.push_back({{"value", complex_json(pair.value)}, {"vector", vec}});
        }
        sum["phi"] = {{"matrix", matrix_json(phi.matrix())}, {"eigenpairs", pairs}};
    }
    result.files[s.name + ".json"] = sum.dump(2) + "\n";
    return result;
}

polytope::Polytope polytope_from(const Json& shape) {
    if (shape.contains("table")) {
        const auto connective = shape["table"] == "and" ? polytope::Connective::And : polytope::Connective::Or;
        auto t = polytope::truth_table({"E_A", "UE_A", "E_B", "UE_B"}, {{"E_C", connective, {"E_A", "E_B"}}});
        t = polytope::restrict_extremal(t, {{"E_A", "UE_A"}, {"E_B", "UE_B"}});
        return polytope::polytope_from_vertices(polytope::project_rows(t, {"E_A", "E_B", "E_C"}));
    }
    if (shape.contains("vertices")) {
        std::vector<polytope::Vec3> pts;
        for (const auto& v : shape["vertices"]) {
            pts.push_back({v[0].get<double>(), v[1].get<double>(), v[2].get<double>()});
        }
        return polytope::polytope_from_vertices(pts);
    }
    std::vector<polytope::Halfspace> hs;
    for (const auto& h : shape["halfspaces"]) {
        hs.push_back({{h["a"][0].get<double>(), h["a"][1].get<double>(), h["a"][2].get<double>()}, h["b"].get<double>()});
    }
    return polytope::polytope_from_halfspaces(hs);
}

Json edges_json(const std::vector<polytope::Edge>& list) {
    Json out = Json::array();
    for (const auto& e : list) {
        out.push_back(Json::array({vec_json(e.first), vec_json(e.second)}));
    }
    return out;
}

Json polytope_json(const polytope::Polytope& poly) {
    Json out;
    out["dimension"] = poly.dimension;
    out["vertices"] = Json::array();
    for (const auto& v : poly.vertices) {
        out["vertices"].push_back(vec_json(v));
    }
    out["halfspaces"] = Json::array();
    for (const auto& h : poly.halfspaces) {
        out["halfspaces"].push_back({{"a", vec_json(h.normal)}, {"b", number(h.offset)}});
    }
    out["edges"] = edges_json(polytope::edges(poly));
    return out;
}

RunResult run_polytope(const Scenario& s) {
    const Json& p = s.params;
    const auto first = polytope_from(p);
    RunResult result;
    Json& sum = result.summary;
    sum["name"] = s.name;
    sum["kind"] = "polytope";
    sum["polytope"] = polytope_json(first);
    std::optional<polytope::Polytope> second;
    if (p.contains("combine_with")) {
        second = polytope_from(p["combine_with"]);
        sum["second"] = polytope_json(*second);
        const auto c = polytope::combine(first, *second);
        Json shared = Json::array();
        for (const auto& v : c.shared_vertices) {
            shared.push_back(vec_json(v));
        }
        sum["combination"] = {{"shared_vertices", shared},
                              {"shared_edges", edges_json(c.shared_edges)},
                              {"only_first", edges_json(c.only_first)},
                              {"only_second", edges_json(c.only_second)}};
    }
    result.files[s.name + ".json"] = sum.dump(2) + "\n";
    if (p["wireframe"].get<bool>()) {
        const portrait::Camera cam{p["camera"]["azimuth"].get<double>(), p["camera"]["elevation"].get<double>()};
        result.files[s.name + ".svg"] = portrait::polytope_wireframe(first, second ? &*second : nullptr, cam);
    }
    return result;
}

// ---- presets

const char* const kIc2d = "(-2, -2), (2, 2), (-2, 2), (2, -2), (0.5, -1), (-1, 0.5), (1, -0.5), (-0.5, 1)";
const char* const kIc3d = "(0.1, 0.1, 0.1), (1.0, 1.0, 1.0), (0.5, -0.5, 0.2), (1.5, 0.8, 0.3), (0.2, 0.4, 0.6), "
                          "(-0.3, 0.7, 0.5), (0.6, -0.4, 0.9), (1.2, 1.4, 0.8)";

Json ics_2d() {
    return Json::array({{-2, -2}, {2, 2}, {-2, 2}, {2, -2}, {0.5, -1}, {-1, 0.5}, {1, -0.5}, {-0.5, 1}});
}

Json ics_3d() {
    return Json::array({{0.1, 0.1, 0.1},
                        {1.0, 1.0, 1.0},
                        {0.5, -0.5, 0.2},
                        {1.5, 0.8, 0.3},
                        {0.2, 0.4, 0.6},
                        {-0.3, 0.7, 0.5},
                        {0.6, -0.4, 0.9},
                        {1.2, 1.4, 0.8}});
}

Json planar(const char* variant, double a1, double b1, double a2, double b2) {
    return {{"variant", variant},
            {"coupling", {{"alpha1", a1}, {"beta1", b1}, {"alpha2", a2}, {"beta2", b2}}},
            {"initial_conditions", ics_2d()}};
}

Json carl(bool both, double a1, double b1, double b2, double a2, std::optional<double> g1, double g2, double g3) {
    Json c{{"alpha1", a1}, {"beta1", b1}, {"alpha2", a2}, {"beta2", b2}, {"gamma2", g2}, {"gamma3", g3}};
    if (g1) {
        c["gamma1"] = *g1;
    }
    return {{"carl_affects", both ? "alice_and_bob" : "alice"}, {"coupling", c}, {"initial_conditions", ics_3d()}};
}

Json marker_preset(double tf) {
    Json curves = Json::array();
    for (double cf : {10.0, 20.0, 50.0, 70.0}) {
        curves.push_back({{"a0", 50}, {"tf", tf}, {"cf", number(cf)}});
    }
    return {{"curves", curves}, {"ages", {0, 100}}};
}

} // namespace

std::string_view kind_name(Kind k) {
    switch (k) {
    case Kind::Marker:
        return "marker";
    case Kind::Game:
        return "game";
    case Kind::Polytope:
        return "polytope";
    case Kind::Simulate2d:
        return "simulate2d";
    case Kind::Simulate3d:
        return "simulate3d";
    }
    return "unknown";
}

ValidationError::ValidationError(std::string path, std::string constraint)
    : DomainError(path + ": " + constraint), path_(std::move(path)), constraint_(std::move(constraint)) {}

ParseError::ParseError(const std::string& detail, std::size_t line, std::size_t column)
    : DomainError("parse error at line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                  detail),
      line_(line), column_(column) {}

Json number(double v) {
    if (std::isfinite(v) && v == std::trunc(v) && std::abs(v) <= 9007199254740992.0) {
        return Json(static_cast<long long>(v));
    }
    return Json(v);
}

Json parse_json(std::string_view text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        // byte offset -> line/column
        const std::size_t offset = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        std::size_t line = 1;
        std::size_t column = 1;
        for (std::size_t i = 0; i < offset; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        std::string detail = e.what();
        if (const auto pos = detail.find("]: "); pos != std::string::npos) {
            detail = detail.substr(pos + 3);
        }
        throw ParseError(detail, line, column);
    }
}

Scenario validate_scenario(std::string_view text) { return validate_scenario(parse_json(text)); }

Scenario validate_scenario(const Json& doc) {
    const std::string root = "scenario";
    if (!doc.is_object()) {
        fail(root, "must be an object");
    }
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (it.key() != "name" && it.key() != "kind" && it.key() != "params") {
            fail(it.key(), "unknown field");
        }
    }
    Scenario s;
    const auto name = doc.find("name");
    if (name == doc.end()) {
        fail("name", "required");
    }
    static const std::regex kName("[a-z0-9_]+");
    if (!name->is_string() || !std::regex_match(name->get<std::string>(), kName)) {
        fail("name", "must match [a-z0-9_]+");
    }
    s.name = name->get<std::string>();
    const auto kind = doc.find("kind");
    if (kind == doc.end()) {
        fail("kind", "required");
    }
    const auto k = one_of(*kind, "kind", {"marker", "game", "polytope", "simulate2d", "simulate3d"});
    const auto params = doc.find("params");
    if (params == doc.end()) {
        fail("params", "required");
    }
    if (k == "marker") {
        s.kind = Kind::Marker;
        s.params = check_marker(*params);
    } else if (k == "game") {
        s.kind = Kind::Game;
        s.params = check_game(*params);
    } else if (k == "polytope") {
        s.kind = Kind::Polytope;
        s.params = check_polytope(*params);
    } else if (k == "simulate2d") {
        s.kind = Kind::Simulate2d;
        s.params = check_simulate(*params, 2);
    } else {
        s.kind = Kind::Simulate3d;
        s.params = check_simulate(*params, 3);
    }
    return s;
}

RunResult run_scenario(const Scenario& s, const RunOptions& options) {
    RunResult result;
    switch (s.kind) {
    case Kind::Marker:
        result = run_marker(s);
        break;
    case Kind::Game:
        result = run_game(s);
        break;
    case Kind::Polytope:
        result = run_polytope(s);
        break;
    case Kind::Simulate2d:
    case Kind::Simulate3d:
        result = run_simulate(s, options);
        break;
    }
    Json files = Json::array();
    for (const auto& [file, _] : result.files) {
        files.push_back(file);
    }
    result.summary["files"] = files;
    return result;
}

const Preset* PresetRegistry::find(std::string_view name) const {
    const auto it = std::find_if(presets_.begin(), presets_.end(), [&](const Preset& p) { return p.name == name; });
    return it == presets_.end() ? nullptr : &*it;
}

const PresetRegistry& PresetRegistry::instance() {
    static const PresetRegistry registry;
    return registry;
}

PresetRegistry::PresetRegistry() {
    auto add = [&](const std::string& name, const char* kind, const std::string& caption, Json params) {
        presets_.push_back({name, caption, validate_scenario(Json{{"name", name}, {"kind", kind}, {"params", params}})});
    };
    const std::string marker_caption = "normalized time evolution of behavioral marker over 100 years with varying "
                                       "circumstantial factors (C.F) for (a)Transition factor=0.1 and "
                                       "(b)Transition factor=0.02, at half age of A_0=50 yrs";
    add("fig1a", "marker", marker_caption, marker_preset(0.1));
    add("fig1b", "marker", marker_caption, marker_preset(0.02));

    add("pd", "game", "prisoner's dilemma payoff matrix, Nash Equilibrium is mutual defection",
        {{"game", "prisoners_dilemma"}});
    add("keep_return", "game", "keep or return the money payoff matrix", {{"game", "keep_return"}});
    add("feb", "game", "Whoever returns the money gets to keep the money plus a bonus",
        {{"game", "keep_return"}, {"feb_bonus", 50}});

    add("fig3", "polytope", "ethical polytope ... with AND condition", {{"table", "and"}});
    add("fig4", "polytope", "ethical polytope ... with OR condition", {{"table", "or"}});
    add("fig5", "polytope",
        "Combined ethical polytope of AND and OR conditions. AND condition polytope is represented with blue "
        "edges, OR condition polytope is represented with red edges and common edges are represented with green",
        {{"table", "and"}, {"combine_with", {{"table", "or"}}}});

    const std::string ic2 = std::string(" for eight initial conditions of ") + kIc2d;
    const std::string ic3 = std::string(" for eight initial conditions of ") + kIc3d;
    add("fig7a", "simulate2d", "(a) alpha1=2, beta1=1, alpha2=-1, beta2=-2" + ic2,
        planar("ethical_bob_crook_alice", 2, 1, -1, -2));
    add("fig7b", "simulate2d", "(b) alpha1=1.1, beta1=1, alpha2=-1, beta2=-1.1" + ic2,
        planar("ethical_bob_crook_alice", 1.1, 1, -1, -1.1));
    add("fig8a", "simulate2d", "(a) alpha1=2, beta1=-1, alpha2=1, beta2=-2" + ic2, planar("psi", 2, -1, 1, -2));
    add("fig8b", "simulate2d", "(b) alpha1=1.1, beta1=-1, alpha2=1, beta2=-1.1" + ic2,
        planar("psi", 1.1, -1, 1, -1.1));
    add("fig9a", "simulate2d", "(a) alpha1=1, beta1=2, alpha2=-2, beta2=-1" + ic2, planar("psi", 1, 2, -2, -1));
    add("fig9b", "simulate2d", "(b) alpha1=1, beta1=1.1, alpha2=-1.1, beta2=-1" + ic2,
        planar("psi", 1, 1.1, -1.1, -1));
    add("fig10a", "simulate2d", "(a) alpha1=1, beta1=-2, alpha2=2, beta2=-1" + ic2, planar("psi", 1, -2, 2, -1));
    add("fig10b", "simulate2d", "(b) alpha1=1, beta1=-1.1, alpha2=1.1, beta2=-1" + ic2,
        planar("psi", 1, -1.1, 1.1, -1));
    // beta2 != -alpha1 here, so these cannot be psi systems
    add("fig11a", "simulate2d", "(a) alpha1=1, beta1=-2, alpha2=2, beta2=-2" + ic2,
        planar("ethical_bob_crook_alice", 1, -2, 2, -2));
    add("fig11b", "simulate2d", "(b) alpha1=1, beta1=-2, alpha2=2, beta2=2" + ic2,
        planar("ethical_bob_crook_alice", 1, -2, 2, 2));
    add("fig12a", "simulate2d", "unethical duo (a) alpha1=beta2=1, beta1=alpha2=2" + ic2,
        planar("unethical_duo", 1, 2, 2, 1));
    add("fig12b", "simulate2d", "unethical duo (b) alpha1=beta2=2, beta1=alpha2=1" + ic2,
        planar("unethical_duo", 2, 1, 1, 2));
    add("fig13a", "simulate2d", "unethical duo (a) alpha1=1, beta1=2, beta2=1, alpha2=3, Tr(J)=2, det(J)=-5" + ic2,
        planar("unethical_duo", 1, 2, 3, 1));
    add("fig13b", "simulate2d", "unethical duo (b) alpha1=2, beta1=1, beta2=3, alpha2=1, Tr(J)=5, det(J)=5" + ic2,
        planar("unethical_duo", 2, 1, 1, 3));

    const std::string c14 = "unethical duo with ethical perturbation of carl for ";
    add("fig14a", "simulate3d", c14 + "(a) alpha1=1, beta1=2, beta2=1, alpha2=2, gamma2=-3, gamma3=2" + ic3,
        carl(false, 1, 2, 1, 2, std::nullopt, -3, 2));
    add("fig14b", "simulate3d", c14 + "(b) alpha1=1, beta1=2, beta2=2, alpha2=1, gamma2=3, gamma3=2" + ic3,
        carl(false, 1, 2, 2, 1, std::nullopt, 3, 2));
    add("fig14c", "simulate3d", c14 + "(c) alpha1=2, beta1=2, beta2=2, alpha2=2, gamma2=-2, gamma3=2" + ic3,
        carl(false, 2, 2, 2, 2, std::nullopt, -2, 2));
    add("fig14d", "simulate3d", c14 + "(d) alpha1=2, beta1=0, beta2=0, alpha2=2, gamma2=-2, gamma3=2" + ic3,
        carl(false, 2, 0, 0, 2, std::nullopt, -2, 2));
    add("fig14e", "simulate3d", c14 + "(e) alpha1=3, beta1=2, beta2=-1, alpha2=-3, gamma2=2, gamma3=-2" + ic3,
        carl(false, 3, 2, -1, -3, std::nullopt, 2, -2));
    add("fig15a", "simulate3d",
        c14 + "(a) alpha1=1, beta1=2, beta2=1, alpha2=2, gamma1=-3, gamma2=-3, gamma3=2" + ic3,
        carl(true, 1, 2, 1, 2, -3, -3, 2));
    add("fig15b", "simulate3d", c14 + "(b) alpha1=1, beta1=2, beta2=2, alpha2=1, gamma1=3, gamma2=3, gamma3=2" + ic3,
        carl(true, 1, 2, 2, 1, 3, 3, 2));
    add("fig15c", "simulate3d",
        c14 + "(c) alpha1=2, beta1=2, beta2=2, alpha2=2, gamma1=-2, gamma2=-2, gamma3=2" + ic3,
        carl(true, 2, 2, 2, 2, -2, -2, 2));
    add("fig15d", "simulate3d",
        c14 + "(d) alpha1=2, beta1=0, beta2=0, alpha2=2, gamma1=-2, gamma2=-2, gamma3=2" + ic3,
        carl(true, 2, 0, 0, 2, -2, -2, 2));
}

} // namespace ethdyn::scenario
