// Acceptance gate for the library and CLI. Each criterion prints exactly one
// [PASS]/[FAIL] line; the process exits nonzero if any criterion fails.
#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

#include "groupfair/mechanisms.hpp"
#include "groupfair/optimal.hpp"
#include "groupfair/random.hpp"
#include "groupfair/verify.hpp"

using namespace groupfair;

namespace {

constexpr double kTableTolerance = 1e-6;   // criterion 1 measured-vs-formula
constexpr double kTightRatioTol = 1e-9;    // criterion 2 worst ratio at 2
constexpr double kClosedFormTol = 1e-12;   // criterion 4 closed-form match
constexpr double kOracleSlack = 1e-12;     // criterion 5 single-facility slack
constexpr double kOracleSlackTwo = 1e-6;   // criterion 5 two-facility slack
constexpr double kTableTimeLimit = 10.0;   // seconds
constexpr double kSearchTimeLimit = 300.0;
constexpr double kSpTimeLimit = 60.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.10g", value);
    return buffer;
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

Outcome run_guarded(const std::function<Outcome()>& body) {
    try {
        return body();
    } catch (const std::exception& e) {
        return {false, std::string("unexpected exception: ") + e.what()};
    }
}

// Criterion 1: the certified bound table at n=5, m=3, weights in [1, 3]
// measures every formula as tight.
Outcome criterion_bound_table() {
    const auto start = Clock::now();
    const auto rows = bound_table(5, 3, 1.0, 3.0, kTableTolerance);
    for (const auto& row : rows) {
        if (!row.tight) {
            return {false, row.mechanism + "/" + row.objective + " measured " +
                               fmt(row.measured) + " against bound " +
                               fmt(row.bound) + " (" + row.note + ")"};
        }
    }
    const double elapsed = seconds_since(start);
    if (elapsed >= kTableTimeLimit) {
        return {false, "table took " + fmt(elapsed) + " s, limit " +
                           fmt(kTableTimeLimit) + " s"};
    }
    return {true, std::to_string(rows.size()) +
                      " rows all tight within 1e-6 of their formulas (" +
                      fmt(elapsed) + " s)"};
}

// Criterion 2: randomized worst-case search over every certified
// mechanism/objective pair finds no bound violation, and the scale-free
// bounds for balanced and major-phantom are attained at 2.
Outcome criterion_search() {
    const auto start = Clock::now();

    SearchConfig config;
    config.seed = 42;
    config.trials = 10000;
    config.distribution.n_max = 6;
    config.distribution.m_max = 3;
    config.distribution.weight_choices = {1.0, 2.0, 5.0};
    config.distribution.location_grid.clear();
    for (int i = 0; i <= 20; ++i) {
        config.distribution.location_grid.push_back(i / 20.0);
    }

    const std::vector<std::pair<std::string, Objective>> pairs = {
        {"balanced", Objective::WTGC},   {"major-phantom", Objective::WMGC},
        {"endpoint", Objective::WTGC},   {"endpoint", Objective::WMGC},
        {"med", Objective::WTGC},        {"med", Objective::WMGC},
        {"leftmost", Objective::WTGC},   {"leftmost", Objective::WMGC},
        {"major", Objective::WTGC},      {"major", Objective::WMGC},
    };

    int tested = 0;
    double balanced_worst = 0.0, phantom_worst = 0.0;
    for (const auto& [name, objective] : pairs) {
        const auto result =
            worst_case_search(parse_mechanism(name), objective, config);
        tested = result.instances_tested;
        if (!result.bound_violations.empty()) {
            return {false, name + " exceeded its certified bound on " +
                               std::to_string(result.bound_violations.size()) +
                               " instances, worst ratio " +
                               fmt(result.bound_violations.front().ratio)};
        }
        if (name == "balanced") balanced_worst = result.worst.ratio;
        if (name == "major-phantom") phantom_worst = result.worst.ratio;
    }

    if (std::abs(balanced_worst - 2.0) > kTightRatioTol) {
        return {false, "balanced worst ratio " + fmt(balanced_worst) +
                           ", expected 2 within 1e-9"};
    }
    if (std::abs(phantom_worst - 2.0) > kTightRatioTol) {
        return {false, "major-phantom worst ratio " + fmt(phantom_worst) +
                           ", expected 2 within 1e-9"};
    }
    const double elapsed = seconds_since(start);
    if (elapsed >= kSearchTimeLimit) {
        return {false, "search took " + fmt(elapsed) + " s, limit " +
                           fmt(kSearchTimeLimit) + " s"};
    }
    return {true, "10 certified pairs, " + std::to_string(tested) +
                      " instances each, 0 bound violations; balanced and "
                      "major-phantom both peak at ratio 2 (" +
                      fmt(elapsed) + " s)"};
}

// Criterion 3: exhaustive strategyproofness over the default small universe;
// every shipped mechanism passes, the manipulable midpoint rule does not.
Outcome criterion_strategyproofness() {
    const auto start = Clock::now();
    const SpUniverse universe;

    const std::vector<std::string> truthful = {
        "balanced",      "major-phantom", "med",
        "leftmost",      "major",         "endpoint",
        "dictatorial:0", "dictatorial:1", "dictatorial:2",
    };
    uint64_t checked = 0;
    for (const auto& name : truthful) {
        const auto result = sp_exhaustive(parse_mechanism(name), universe);
        checked += result.instances_checked;
        if (!result.violations.empty()) {
            const auto& v = result.violations.front();
            return {false, name + ": agent " + std::to_string(v.agent) +
                               " at " + fmt(v.true_x) + " gains by reporting " +
                               fmt(v.misreport_x)};
        }
    }

    const auto midpoint =
        sp_exhaustive(parse_mechanism("midpoint-extremes"), universe);
    if (midpoint.violations.empty()) {
        return {false, "the deliberately manipulable midpoint rule "
                       "produced no violation, checker is blind"};
    }
    const double elapsed = seconds_since(start);
    if (elapsed >= kSpTimeLimit) {
        return {false, "exhaustive check took " + fmt(elapsed) +
                           " s, limit " + fmt(kSpTimeLimit) + " s"};
    }
    return {true, "9 truthful rules clean across " + std::to_string(checked) +
                      " instance checks; midpoint rule caught with " +
                      std::to_string(midpoint.violations.size()) +
                      " violations (" + fmt(elapsed) + " s)"};
}

// Criterion 4: the candidate solver reproduces the two-agent closed form.
Outcome criterion_closed_form() {
    Rng rng(2024);
    for (int trial = 0; trial < 1000; ++trial) {
        double x1 = rng.uniform_real(0.0, 1.0);
        double x2 = rng.uniform_real(0.0, 1.0);
        if (x1 > x2) std::swap(x1, x2);
        const double w1 = rng.uniform_real(0.5, 5.0);
        const double w2 = rng.uniform_real(0.5, 5.0);
        const bool same = rng.uniform_int(0, 1) == 1;

        const Instance inst =
            same ? Instance({{x1, {0}}, {x2, {0}}}, {std::max(w1, w2)})
                 : Instance({{x1, {0}}, {x2, {1}}}, {w1, w2});
        const auto closed =
            same ? two_agent_opt_wmgc(x1, x2, std::max(w1, w2),
                                      std::max(w1, w2), true)
                 : two_agent_opt_wmgc(x1, x2, w1, w2, false);
        const auto solved = opt_single(inst, Objective::WMGC);
        if (std::abs(solved.placement[0] - closed.placement[0]) >
                kClosedFormTol ||
            std::abs(solved.value - closed.value) > kClosedFormTol) {
            return {false, "trial " + std::to_string(trial) + ": solver " +
                               fmt(solved.placement[0]) + "/" +
                               fmt(solved.value) + " vs closed form " +
                               fmt(closed.placement[0]) + "/" +
                               fmt(closed.value)};
        }
    }
    return {true, "1000 random two-agent instances match the closed form "
                  "within 1e-12 in location and value"};
}

// Criterion 5: exact solvers stay inside the grid oracles' error bands.
Outcome criterion_oracles() {
    Rng rng(777);
    InstanceDistribution dist;
    SolverConfig config;
    config.cross_check = false;
    for (int trial = 0; trial < 500; ++trial) {
        const Instance inst = sample_instance(rng, dist);
        for (Objective obj : {Objective::WTGC, Objective::WMGC}) {
            const auto one = opt_single(inst, obj, config);
            const auto oracle_one = grid_oracle_single(inst, obj, 2001);
            if (one.value > oracle_one.value + kOracleSlack ||
                oracle_one.value - one.value >
                    oracle_one.error_bound + kOracleSlack) {
                return {false, "k=1 trial " + std::to_string(trial) +
                                   ": exact " + fmt(one.value) + " vs grid " +
                                   fmt(oracle_one.value) + " (bound " +
                                   fmt(oracle_one.error_bound) + ")"};
            }

            const auto two = opt_two(inst, obj, config);
            const auto oracle_two = grid_oracle_two(inst, obj, 201);
            if (two.value > oracle_two.value + kOracleSlackTwo ||
                oracle_two.value - two.value >
                    oracle_two.error_bound + kOracleSlackTwo) {
                return {false, "k=2 trial " + std::to_string(trial) +
                                   ": exact " + fmt(two.value) + " vs grid " +
                                   fmt(oracle_two.value) + " (bound " +
                                   fmt(oracle_two.error_bound) + ")"};
            }
        }
    }
    return {true, "500 random instances, both objectives: exact k=1 and k=2 "
                  "values sit inside the 2001- and 201-point oracle bands"};
}

// Criterion 6: structural coincidences hold exactly, not approximately.
Outcome criterion_coincidences() {
    Rng rng(31337);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = rng.uniform_int(1, 7);
        std::vector<Agent> agents;
        for (int i = 0; i < n; ++i) {
            agents.push_back({rng.uniform_real(0.0, 1.0), {0}});
        }
        const double w = rng.uniform_int(1, 5);
        const Instance inst(agents, {w});
        if (balanced(inst) != med(inst)) {
            return {false, "single-group instance where balanced != med "
                           "(trial " + std::to_string(trial) + ")"};
        }
    }
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = rng.uniform_int(1, 7);
        std::vector<Agent> agents;
        for (int i = 0; i < n; ++i) {
            agents.push_back({rng.uniform_real(0.0, 1.0), {i}});
        }
        const double w = rng.uniform_int(1, 5);
        const Instance inst(agents, std::vector<double>(n, w));
        if (balanced(inst) != leftmost(inst)) {
            return {false, "singleton equal-weight instance where "
                           "balanced != leftmost (trial " +
                               std::to_string(trial) + ")"};
        }
    }
    return {true, "balanced == med on 1000 single-group instances and "
                  "balanced == leftmost on 1000 singleton equal-weight "
                  "instances, exact comparisons"};
}

// Criterion 7: the CLI refuses three or more facilities with a structured,
// machine-readable error and a nonzero exit code.
Outcome criterion_cli_refusal(const std::string& cli) {
    if (cli.empty()) {
        return {false, "no --cli <path> argument supplied"};
    }
    const std::string instance_path = "/tmp/groupfair_acceptance_k3.json";
    {
        std::ofstream out(instance_path);
        out << R"({"weights": [1.0, 3.0], "agents": [)"
            << R"({"x": 0.0, "groups": [0]}, {"x": 1.0, "groups": [1]}]})";
    }
    const std::string command = cli + " opt --instance " + instance_path +
                                " --k 3 --objective wtgc 2>&1";
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) return {false, "could not spawn the CLI"};
    std::string output;
    char buffer[4096];
    size_t got = 0;
    while ((got = fread(buffer, 1, sizeof buffer, pipe)) > 0) {
        output.append(buffer, got);
    }
    const int status = pclose(pipe);
    std::remove(instance_path.c_str());

    if (!WIFEXITED(status) || WEXITSTATUS(status) == 0) {
        return {false, "CLI accepted --k 3 (exit status " +
                           std::to_string(status) + ")"};
    }
    try {
        const auto parsed = nlohmann::json::parse(output);
        if (parsed.at("error") != "unsupported-facility-count" ||
            parsed.at("k") != 3) {
            return {false, "unexpected error payload: " + output};
        }
    } catch (const std::exception&) {
        return {false, "error output is not a JSON object: " + output};
    }
    return {true, "opt --k 3 exits " + std::to_string(WEXITSTATUS(status)) +
                      " with a machine-readable unsupported-facility-count "
                      "error"};
}

}  // namespace

int main(int argc, char** argv) {
    std::string cli;
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--cli") cli = argv[i + 1];
    }

    const std::vector<std::pair<std::string, std::function<Outcome()>>> plan = {
        {"certified bound table", criterion_bound_table},
        {"worst-case search", criterion_search},
        {"exhaustive strategyproofness", criterion_strategyproofness},
        {"two-agent closed form", criterion_closed_form},
        {"grid oracle agreement", criterion_oracles},
        {"mechanism coincidences", criterion_coincidences},
        {"CLI facility-count refusal", [&] { return criterion_cli_refusal(cli); }},
    };

    bool all_pass = true;
    for (size_t i = 0; i < plan.size(); ++i) {
        const Outcome outcome = run_guarded(plan[i].second);
        all_pass = all_pass && outcome.pass;
        std::printf("[%s] criterion %zu: %s: %s\n",
                    outcome.pass ? "PASS" : "FAIL", i + 1,
                    plan[i].first.c_str(), outcome.detail.c_str());
        std::fflush(stdout);
    }
    return all_pass ? 0 : 1;
}
