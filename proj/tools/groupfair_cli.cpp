#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "groupfair/evaluate.hpp"
#include "groupfair/instance.hpp"
#include "groupfair/instance_json.hpp"
#include "groupfair/mechanisms.hpp"
#include "groupfair/optimal.hpp"
#include "groupfair/verify.hpp"

namespace {

using namespace groupfair;

enum class Format { Markdown, Csv, JsonLines };

std::string fmt_num(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.12g", value);
    return buffer;
}

std::string fmt_placement(const Placement& placement) {
    std::string out;
    for (int i = 0; i < placement.size(); ++i) {
        if (i) out += ' ';
        out += fmt_num(placement[i]);
    }
    return out;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

struct OutputTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

void print_table(const OutputTable& table, Format format) {
    switch (format) {
        case Format::Markdown: {
            auto line = [](const std::vector<std::string>& cells) {
                std::string out = "|";
                for (const auto& c : cells) out += " " + c + " |";
                return out;
            };
            std::cout << line(table.header) << "\n|";
            for (size_t i = 0; i < table.header.size(); ++i) std::cout << " --- |";
            std::cout << "\n";
            for (const auto& row : table.rows) std::cout << line(row) << "\n";
            break;
        }
        case Format::Csv: {
            auto line = [](const std::vector<std::string>& cells) {
                std::string out;
                for (size_t i = 0; i < cells.size(); ++i) {
                    if (i) out += ',';
                    out += csv_escape(cells[i]);
                }
                return out;
            };
            std::cout << line(table.header) << "\n";
            for (const auto& row : table.rows) std::cout << line(row) << "\n";
            break;
        }
        case Format::JsonLines: {
            for (const auto& row : table.rows) {
                nlohmann::json obj;
                for (size_t i = 0; i < table.header.size() && i < row.size(); ++i) {
                    obj[table.header[i]] = row[i];
                }
                std::cout << obj.dump() << "\n";
            }
            break;
        }
    }
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open instance file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_instance_json(buffer.str());
}

Objective parse_objective(const std::string& text) {
    if (text == "wtgc") return Objective::WTGC;
    if (text == "wmgc") return Objective::WMGC;
    throw std::invalid_argument("objective must be wtgc or wmgc, got '" + text + "'");
}

std::vector<double> parse_csv_doubles(const std::string& text,
                                      const std::string& what) {
    std::vector<double> out;
    std::stringstream stream(text);
    std::string field;
    while (std::getline(stream, field, ',')) {
        size_t used = 0;
        out.push_back(std::stod(field, &used));
        if (used != field.size()) {
            throw std::invalid_argument(what + ": bad number '" + field + "'");
        }
    }
    if (out.empty()) throw std::invalid_argument(what + ": empty list");
    return out;
}

SolverConfig default_solver() {
    SolverConfig config;
    if (const char* env = std::getenv("GROUPFAIR_GRID_POINTS")) {
        const int points = std::atoi(env);
        if (points >= 2) config.grid_points = points;
    }
    return config;
}

std::string compact_instance(const Instance& inst) {
    return instance_to_json(inst, -1);
}

// Requests for unsupported facility counts exit 2 with one machine-readable
// line on stderr.
int refuse(const UnsupportedFacilityCount& e) {
    nlohmann::json err;
    err["error"] = "unsupported-facility-count";
    err["k"] = e.facility_count();
    err["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return 2;
}

int cmd_run(const std::string& mech, const std::string& path,
            std::optional<int> k) {
    const MechanismSpec spec = parse_mechanism(mech);
    if (k) {
        require_supported_facility_count(*k);
        if (*k != spec.facility_count()) {
            throw std::invalid_argument(
                "mechanism " + spec.name() + " places " +
                std::to_string(spec.facility_count()) + " facilities, not " +
                std::to_string(*k));
        }
    }
    const Instance inst = load_instance(path);
    std::cout << fmt_placement(apply_mechanism(spec, inst)) << "\n";
    return 0;
}

int cmd_opt(const std::string& path, int k, const std::string& objective_name,
            const std::string& method, int grid_points, Format format) {
    require_supported_facility_count(k);
    const Objective objective = parse_objective(objective_name);
    const Instance inst = load_instance(path);

    SolverConfig solver = default_solver();
    if (grid_points >= 2) solver.grid_points = grid_points;

    OptResult result = [&] {
        if (method == "grid") {
            return k == 1 ? grid_oracle_single(inst, objective, solver.grid_points)
                          : grid_oracle_two(inst, objective, solver.grid_points);
        }
        if (method != "exact") {
            throw std::invalid_argument("method must be exact or grid");
        }
        return k == 1 ? opt_single(inst, objective, solver)
                      : opt_two(inst, objective, solver);
    }();

    OutputTable table;
    table.header = {"k", "objective", "placement", "value", "method",
                    "error_bound"};
    table.rows.push_back({std::to_string(k), objective_name,
                          fmt_placement(result.placement), fmt_num(result.value),
                          to_string(result.method),
                          result.method == SolveMethod::Grid
                              ? fmt_num(result.error_bound)
                              : "0"});
    print_table(table, format);
    return 0;
}

int cmd_ratio(const std::string& mech, const std::string& objective_name,
              const std::string& path, std::optional<int> k, Format format) {
    const MechanismSpec spec = parse_mechanism(mech);
    if (k) {
        require_supported_facility_count(*k);
        if (*k != spec.facility_count()) {
            throw std::invalid_argument(
                "mechanism " + spec.name() + " places " +
                std::to_string(spec.facility_count()) + " facilities, not " +
                std::to_string(*k));
        }
    }
    const Objective objective = parse_objective(objective_name);
    const Instance inst = load_instance(path);
    const RatioResult result = measure_ratio(spec, inst, objective, default_solver());

    OutputTable table;
    table.header = {"mechanism", "objective", "mechanism_value", "opt_value",
                    "ratio", "mechanism_placement", "opt_placement", "opt_method"};
    table.rows.push_back({spec.name(), objective_name,
                          fmt_num(result.mechanism_value),
                          fmt_num(result.optimum.value), fmt_num(result.ratio),
                          fmt_placement(result.mechanism_placement),
                          fmt_placement(result.optimum.placement),
                          to_string(result.optimum.method)});
    print_table(table, format);
    return 0;
}

int cmd_spcheck(const std::string& mech, const SpUniverse& universe,
                Format format) {
    const MechanismSpec spec = parse_mechanism(mech);
    const SpExhaustiveResult result = sp_exhaustive(spec, universe);

    std::cout << "mechanism " << spec.name() << ": " << result.instances_checked
              << " instances checked, " << result.violations.size()
              << " strategyproofness violations\n";
    if (!result.violations.empty()) {
        OutputTable table;
        table.header = {"agent", "true_x", "misreport_x", "cost_truthful",
                        "cost_misreport", "instance"};
        for (const auto& v : result.violations) {
            table.rows.push_back({std::to_string(v.agent), fmt_num(v.true_x),
                                  fmt_num(v.misreport_x), fmt_num(v.cost_truthful),
                                  fmt_num(v.cost_misreport),
                                  compact_instance(v.instance)});
        }
        print_table(table, format);
    }
    return result.violations.empty() ? 0 : 1;
}

int cmd_search(const std::string& mech, const std::string& objective_name,
               const SearchConfig& search, Format format) {
    const MechanismSpec spec = parse_mechanism(mech);
    const Objective objective = parse_objective(objective_name);
    const SearchResult result =
        worst_case_search(spec, objective, search, default_solver());

    OutputTable table;
    table.header = {"mechanism", "objective", "instances_tested", "worst_ratio",
                    "mechanism_value", "opt_value", "bound_violations",
                    "worst_instance"};
    table.rows.push_back(
        {spec.name(), objective_name, std::to_string(result.instances_tested),
         fmt_num(result.worst.ratio), fmt_num(result.worst.mechanism_value),
         fmt_num(result.worst.optimum.value),
         std::to_string(result.bound_violations.size()),
         compact_instance(result.worst.instance)});
    print_table(table, format);

    for (const auto& v : result.bound_violations) {
        std::cerr << "bound exceeded: ratio " << fmt_num(v.ratio) << " on "
                  << compact_instance(v.instance) << "\n";
    }
    return result.bound_violations.empty() ? 0 : 1;
}

int cmd_gen(const std::string& family, int n, int m, double w_min, double w_max,
            const std::string& out_path) {
    std::optional<Instance> inst;
    if (family == "endpoint-wtgc") {
        inst = tight_endpoint_wtgc(n, w_min, w_max);
    } else if (family == "endpoint-wmgc") {
        inst = tight_endpoint_wmgc(n, w_min, w_max);
    } else if (family == "med-wtgc") {
        inst = tight_med_wtgc(m, w_min, w_max);
    } else if (family == "leftmost-wtgc") {
        inst = tight_leftmost_wtgc(n, w_min, w_max);
    } else if (family == "major-wtgc") {
        inst = tight_major_wtgc(w_min, w_max);
    } else if (family == "two-point") {
        inst = tight_two_point(w_min, w_max);
    } else if (family == "dictatorial-wtgc") {
        inst = tight_dictatorial_wtgc(n, w_min, w_max);
    } else {
        throw std::invalid_argument("unknown family '" + family + "'");
    }

    const std::string text = instance_to_json(*inst) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
        out << text;
    }
    return 0;
}

int cmd_table(int n, int m, double w_min, double w_max, double tolerance,
              Format format) {
    const auto rows = bound_table(n, m, w_min, w_max, tolerance, default_solver());

    OutputTable table;
    table.header = {"mechanism", "objective", "bound_formula", "bound",
                    "measured", "tight", "note"};
    bool all_ok = true;
    for (const auto& row : rows) {
        const bool numeric = row.note.empty() || std::isfinite(row.bound);
        table.rows.push_back({row.mechanism, row.objective, row.formula,
                              numeric && std::isfinite(row.bound)
                                  ? fmt_num(row.bound)
                                  : "-",
                              numeric && std::isfinite(row.measured)
                                  ? fmt_num(row.measured)
                                  : "-",
                              row.tight ? "yes" : "no", row.note});
        if (!row.tight) all_ok = false;
    }
    print_table(table, format);
    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"group-fair facility location on the line"};
    app.require_subcommand(1);

    std::string format_name = "markdown";
    app.add_option("--format", format_name, "markdown, csv, or jsonl")
        ->check(CLI::IsMember({"markdown", "csv", "jsonl"}));

    std::string mech, instance_path, objective = "wtgc";
    std::string method = "exact", family, out_path;
    int k_value = 1;
    bool k_given = false;
    int n = 5, m = 3, grid_points = 0, trials = 1000;
    double w_min = 1.0, w_max = 3.0, tolerance = 1e-6;
    uint64_t seed = 42, budget = 2'000'000;
    int n_max = 3, m_max = 2;
    std::string grid_csv, weights_csv, weight_sets_csv, continuous_csv;

    auto* run = app.add_subcommand("run", "run a mechanism on an instance");
    run->add_option("--mech", mech)->required();
    run->add_option("--instance", instance_path)->required();
    run->add_option("--k", k_value)->each([&](const std::string&) { k_given = true; });

    auto* opt = app.add_subcommand("opt", "solve for the optimal placement");
    opt->add_option("--instance", instance_path)->required();
    opt->add_option("--k", k_value)->required();
    opt->add_option("--objective", objective)->required();
    opt->add_option("--method", method, "exact or grid");
    opt->add_option("--grid", grid_points, "grid points for --method grid");

    auto* ratio = app.add_subcommand("ratio", "mechanism value versus optimum");
    ratio->add_option("--mech", mech)->required();
    ratio->add_option("--objective", objective)->required();
    ratio->add_option("--instance", instance_path)->required();
    ratio->add_option("--k", k_value)->each([&](const std::string&) { k_given = true; });

    auto* spcheck = app.add_subcommand(
        "spcheck", "exhaustive strategyproofness check over a small universe");
    spcheck->add_option("--mech", mech)->required();
    spcheck->add_option("--n-max", n_max);
    spcheck->add_option("--m-max", m_max);
    spcheck->add_option("--grid", grid_csv, "location grid, comma separated");
    spcheck->add_option("--weight-sets", weight_sets_csv,
                        "weight vectors, e.g. '1;1,1;1,2'");
    spcheck->add_option("--budget", budget);

    auto* search = app.add_subcommand(
        "search", "randomized worst-case ratio search with bound certification");
    search->add_option("--mech", mech)->required();
    search->add_option("--objective", objective)->required();
    search->add_option("--seed", seed);
    search->add_option("--trials", trials);
    search->add_option("--n-max", n_max);
    search->add_option("--m-max", m_max);
    search->add_option("--loc-grid", grid_csv, "location grid, comma separated");
    search->add_option("--continuous", continuous_csv,
                       "draw locations uniformly from 'lo,hi'");
    search->add_option("--weights", weights_csv, "weight choices, comma separated");

    auto* gen = app.add_subcommand("gen", "emit a worst-case family instance");
    gen->add_option("--family", family,
                    "endpoint-wtgc, endpoint-wmgc, med-wtgc, leftmost-wtgc, "
                    "major-wtgc, two-point, dictatorial-wtgc")
        ->required();
    gen->add_option("--n", n);
    gen->add_option("--m", m);
    gen->add_option("--w-min", w_min);
    gen->add_option("--w-max", w_max);
    gen->add_option("--out", out_path);

    auto* table = app.add_subcommand(
        "table", "measured worst-case ratios against their formulas");
    table->add_option("--n", n);
    table->add_option("--m", m);
    table->add_option("--w-min", w_min);
    table->add_option("--w-max", w_max);
    table->add_option("--tolerance", tolerance);

    CLI11_PARSE(app, argc, argv);

    const Format format = format_name == "csv"
                              ? Format::Csv
                              : format_name == "jsonl" ? Format::JsonLines
                                                       : Format::Markdown;
    try {
        if (run->parsed()) {
            return cmd_run(mech, instance_path,
                           k_given ? std::optional<int>(k_value) : std::nullopt);
        }
        if (opt->parsed()) {
            return cmd_opt(instance_path, k_value, objective, method,
                           grid_points, format);
        }
        if (ratio->parsed()) {
            return cmd_ratio(mech, objective, instance_path,
                             k_given ? std::optional<int>(k_value) : std::nullopt,
                             format);
        }
        if (spcheck->parsed()) {
            SpUniverse universe;
            universe.n_max = n_max;
            universe.m_max = m_max;
            universe.budget = budget;
            if (!grid_csv.empty()) {
                universe.location_grid = parse_csv_doubles(grid_csv, "--grid");
            }
            if (!weight_sets_csv.empty()) {
                universe.weight_sets.clear();
                std::stringstream stream(weight_sets_csv);
                std::string set;
                while (std::getline(stream, set, ';')) {
                    universe.weight_sets.push_back(
                        parse_csv_doubles(set, "--weight-sets"));
                }
            }
            return cmd_spcheck(mech, universe, format);
        }
        if (search->parsed()) {
            SearchConfig config;
            config.seed = seed;
            config.trials = trials;
            config.distribution.n_max = n_max;
            config.distribution.m_max = m_max;
            if (!grid_csv.empty()) {
                config.distribution.location_grid =
                    parse_csv_doubles(grid_csv, "--loc-grid");
            }
            if (!continuous_csv.empty()) {
                const auto range = parse_csv_doubles(continuous_csv, "--continuous");
                if (range.size() != 2 || range[0] >= range[1]) {
                    throw std::invalid_argument("--continuous needs 'lo,hi' with lo < hi");
                }
                config.distribution.location_grid.clear();
                config.distribution.location_lo = range[0];
                config.distribution.location_hi = range[1];
            }
            if (!weights_csv.empty()) {
                config.distribution.weight_choices =
                    parse_csv_doubles(weights_csv, "--weights");
            }
            return cmd_search(mech, objective, config, format);
        }
        if (gen->parsed()) {
            return cmd_gen(family, n, m, w_min, w_max, out_path);
        }
        if (table->parsed()) {
            return cmd_table(n, m, w_min, w_max, tolerance, format);
        }
    } catch (const UnsupportedFacilityCount& e) {
        return refuse(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
