#include "ethdyn/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "ethdyn/dynamics.hpp"
#include "ethdyn/errors.hpp"
#include "ethdyn/kernels.hpp"
#include "ethdyn/marker.hpp"
#include "ethdyn/scenario.hpp"

namespace ethdyn::cli {

namespace {

using scenario::Json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DomainError("cannot read " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_files(const std::string& dir, const std::map<std::string, std::string>& files) {
    std::filesystem::create_directories(dir);
    for (const auto& [name, contents] : files) {
        const auto path = std::filesystem::path(dir) / name;
        std::ofstream out(path, std::ios::binary);
        out << contents;
        if (!out) {
            throw DomainError("cannot write " + path.string());
        }
    }
}

linalg::SquareMatrix parse_matrix(const std::string& text) {
    const Json j = scenario::parse_json(text);
    if (!j.is_array() || (j.size() != 2 && j.size() != 3)) {
        throw DomainError("--matrix: expected a 2x2 or 3x3 array of numbers");
    }
    std::vector<std::vector<double>> rows;
    for (const auto& row : j) {
        if (!row.is_array() || row.size() != j.size()) {
            throw DomainError("--matrix: rows must have " + std::to_string(j.size()) + " entries");
        }
        std::vector<double> r;
        for (const auto& v : row) {
            if (!v.is_number()) {
                throw DomainError("--matrix: entries must be numbers");
            }
            r.push_back(v.get<double>());
        }
        rows.push_back(std::move(r));
    }
    return linalg::SquareMatrix::from_rows(rows);
}

std::vector<std::string> default_labels(std::size_t n) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) {
        labels.push_back("x" + std::to_string(i + 1));
    }
    return labels;
}

Json complex_json(const linalg::Complex& z) {
    return {{"re", scenario::number(z.real())}, {"im", scenario::number(z.imag())}};
}

// Resets the kernel choice when the command finishes.
struct KernelScope {
    ~KernelScope() { kernels::select_isa(std::nullopt); }
};

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Behavioral marker, game, polytope, and coupled-dynamics toolkit", "ethdyn"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string out_dir = "out";
    std::size_t jobs = 1;
    std::string kernel = "auto";
    app.add_option("--out", out_dir, "Output directory")->capture_default_str();
    app.add_option("--jobs", jobs, "Worker threads for trajectory batches")
        ->check(CLI::Range(std::size_t{1}, std::size_t{256}))
        ->capture_default_str();
    app.add_option("--kernel", kernel, "Batch kernel variant")
        ->check(CLI::IsMember({"auto", "scalar", "avx2"}))
        ->capture_default_str();

    marker::MarkerParams mp;
    std::optional<double> at;
    double age_from = 0.0;
    double age_to = 100.0;
    std::size_t samples = marker::kDefaultSamples;
    std::string marker_name = "marker";
    auto* marker_cmd = app.add_subcommand("marker", "Logistic behavioral marker value or curve");
    marker_cmd->add_option("--a0", mp.a0, "Midpoint age")->capture_default_str();
    marker_cmd->add_option("--tf", mp.tf, "Transition factor")->capture_default_str();
    marker_cmd->add_option("--cf", mp.cf, "Circumstantial factor")->capture_default_str();
    marker_cmd->add_option("--at", at, "Evaluate at one age instead of writing a curve");
    marker_cmd->add_option("--from", age_from, "First age")->capture_default_str();
    marker_cmd->add_option("--to", age_to, "Last age")->capture_default_str();
    marker_cmd->add_option("--samples", samples, "Curve samples")->capture_default_str();
    marker_cmd->add_option("--name", marker_name, "Output file stem")->capture_default_str();

    std::string game_json;
    std::string game_file;
    std::string game_builtin;
    std::optional<double> feb;
    std::string game_name = "game";
    auto* game_cmd = app.add_subcommand("game", "Dominance and pure Nash analysis of a 2x2 game");
    auto* gj = game_cmd->add_option("--json", game_json, "Game description as JSON text");
    auto* gf = game_cmd->add_option("--file", game_file, "Game description JSON file");
    auto* gb = game_cmd->add_option("--builtin", game_builtin, "Built-in game")
                   ->check(CLI::IsMember({"prisoners_dilemma", "keep_return"}));
    gj->excludes(gf)->excludes(gb);
    gf->excludes(gb);
    game_cmd->add_option("--feb", feb, "Also analyse the game with this Return bonus");
    game_cmd->add_option("--name", game_name, "Output file stem")->capture_default_str();

    std::string poly_json;
    std::string poly_file;
    std::string poly_table;
    std::string poly_name = "polytope";
    bool no_svg = false;
    auto* poly_cmd = app.add_subcommand("polytope", "Convex polytope in V and H representation");
    auto* pj = poly_cmd->add_option("--json", poly_json, "Vertices or halfspaces as JSON text");
    auto* pf = poly_cmd->add_option("--file", poly_file, "Vertices or halfspaces JSON file");
    auto* pt = poly_cmd->add_option("--table", poly_table, "Extremal truth-table polytope")
                   ->check(CLI::IsMember({"and", "or"}));
    pj->excludes(pf)->excludes(pt);
    pf->excludes(pt);
    poly_cmd->add_flag("--no-svg", no_svg, "Skip the wireframe");
    poly_cmd->add_option("--name", poly_name, "Output file stem")->capture_default_str();

    std::string scenario_file;
    std::string scenario_json;
    auto* sim_cmd = app.add_subcommand("simulate", "Run a JSON scenario");
    auto* sf = sim_cmd->add_option("--scenario", scenario_file, "Scenario JSON file");
    auto* sj = sim_cmd->add_option("--json", scenario_json, "Scenario as JSON text");
    sf->excludes(sj);

    std::string matrix_text;
    auto* classify_cmd = app.add_subcommand("classify", "Equilibrium type of a planar linear system");
    classify_cmd->add_option("--matrix", matrix_text, "Coupling matrix, e.g. [[1,2],[3,1]]")->required();

    std::string eigen_text;
    auto* eigen_cmd = app.add_subcommand("eigen", "Eigenpairs of a 2x2 or 3x3 matrix");
    eigen_cmd->add_option("--matrix", eigen_text, "Matrix as JSON rows")->required();

    std::string preset_name;
    auto* preset_cmd = app.add_subcommand("preset", "Run a named figure preset");
    preset_cmd->add_option("name", preset_name, "Preset name (see list-presets)")->required();

    auto* list_cmd = app.add_subcommand("list-presets", "List preset names with their caption quotes");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return kExitOk;
        }
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    KernelScope scope;
    try {
        if (kernel != "auto") {
            const auto isa = *kernels::parse_isa(kernel);
            if (!kernels::isa_available(isa)) {
                throw DomainError("kernel " + kernel + " is not available on this machine");
            }
            kernels::select_isa(isa);
        }
        scenario::RunOptions options;
        options.jobs = jobs;

        auto run_and_write = [&](const scenario::Scenario& s) {
            const auto result = scenario::run_scenario(s, options);
            write_files(out_dir, result.files);
            out << result.summary.dump() << "\n";
        };

        if (marker_cmd->parsed()) {
            if (at) {
                marker::validate(mp);
                out << Json{{"age", scenario::number(*at)}, {"value", scenario::number(marker::marker_value(*at, mp))}}
                           .dump()
                    << "\n";
                return kExitOk;
            }
            Json curve{{"a0", mp.a0}, {"tf", mp.tf}, {"cf", mp.cf}};
            run_and_write(scenario::validate_scenario(
                Json{{"name", marker_name},
                     {"kind", "marker"},
                     {"params", {{"curves", Json::array({curve})}, {"ages", {age_from, age_to}}, {"samples", samples}}}}));
        } else if (game_cmd->parsed()) {
            Json params;
            if (!game_builtin.empty()) {
                params["game"] = game_builtin;
            } else if (!game_json.empty() || !game_file.empty()) {
                params["game"] = scenario::parse_json(game_json.empty() ? read_file(game_file) : game_json);
            } else {
                throw DomainError("game: one of --json, --file, --builtin is required");
            }
            if (feb) {
                params["feb_bonus"] = *feb;
            }
            run_and_write(scenario::validate_scenario(Json{{"name", game_name}, {"kind", "game"}, {"params", params}}));
        } else if (poly_cmd->parsed()) {
            Json params;
            if (!poly_table.empty()) {
                params["table"] = poly_table;
            } else if (!poly_json.empty() || !poly_file.empty()) {
                params = scenario::parse_json(poly_json.empty() ? read_file(poly_file) : poly_json);
                if (!params.is_object()) {
                    throw DomainError("polytope: input must be a JSON object");
                }
            } else {
                throw DomainError("polytope: one of --json, --file, --table is required");
            }
            if (no_svg) {
                params["wireframe"] = false;
            }
            run_and_write(
                scenario::validate_scenario(Json{{"name", poly_name}, {"kind", "polytope"}, {"params", params}}));
        } else if (sim_cmd->parsed()) {
            if (scenario_file.empty() && scenario_json.empty()) {
                throw DomainError("simulate: one of --scenario, --json is required");
            }
            run_and_write(scenario::validate_scenario(std::string_view(scenario_json.empty() ? read_file(scenario_file) : scenario_json)));
        } else if (classify_cmd->parsed()) {
            const auto m = parse_matrix(matrix_text);
            const auto s = dynamics::make_system(m, default_labels(m.size()));
            const auto c = dynamics::classify_equilibrium(s);
            Json result{{"kind", std::string(dynamics::kind_name(c.kind))},
                        {"trace", scenario::number(c.trace)},
                        {"determinant", scenario::number(c.determinant)},
                        {"discriminant", scenario::number(c.discriminant)}};
            result["eigenvalues"] = Json::array();
            for (const auto& p : dynamics::eigen(s)) {
                result["eigenvalues"].push_back(complex_json(p.value));
            }
            out << result.dump() << "\n";
        } else if (eigen_cmd->parsed()) {
            const auto m = parse_matrix(eigen_text);
            if (!m.all_finite()) {
                throw DomainError("--matrix: entries must be finite");
            }
            Json pairs = Json::array();
            for (const auto& p : linalg::eigenpairs(m)) {
                Json vec = Json::array();
                for (const auto& z : p.vector) {
                    vec.push_back(complex_json(z));
                }
                pairs.push_back({{"value", complex_json(p.value)},
                                 {"vector", vec},
                                 {"residual", scenario::number(linalg::residual(m, p))}});
            }
            out << Json{{"eigenpairs", pairs}}.dump() << "\n";
        } else if (preset_cmd->parsed()) {
            const auto* preset = scenario::PresetRegistry::instance().find(preset_name);
            if (preset == nullptr) {
                throw DomainError("unknown preset " + preset_name + " (see list-presets)");
            }
            run_and_write(preset->scenario);
        } else if (list_cmd->parsed()) {
            Json list = Json::array();
            for (const auto& p : scenario::PresetRegistry::instance().all()) {
                list.push_back({{"name", p.name},
                                {"kind", std::string(scenario::kind_name(p.scenario.kind))},
                                {"caption", p.caption}});
            }
            out << list.dump() << "\n";
        }
        return kExitOk;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const OverflowError& e) {
        err << "numeric failure: " << e.what() << " (last finite step " << e.last_finite_step() << ")\n";
        return kExitNumeric;
    } catch (const std::runtime_error& e) {
        err << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    }
}

} // namespace ethdyn::cli
