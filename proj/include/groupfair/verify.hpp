#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "groupfair/instance.hpp"
#include "groupfair/mechanisms.hpp"
#include "groupfair/optimal.hpp"
#include "groupfair/random.hpp"

namespace groupfair {

// A profitable misreport: agent i at true_x lowers its own connection cost by
// reporting misreport_x instead.
struct SpViolation {
    Instance instance;
    int agent = 0;
    double true_x = 0.0;
    double misreport_x = 0.0;
    double cost_truthful = 0.0;
    double cost_misreport = 0.0;
};

// Tries every misreport in misreport_grid plus every agent location, for
// every agent. A deviation counts only if it beats the truthful cost by more
// than 1e-12, keeping facility-arithmetic noise out.
std::vector<SpViolation> sp_check_instance(const MechanismSpec& spec,
                                           const Instance& inst,
                                           std::vector<double> misreport_grid);

struct SpUniverse {
    int n_max = 3;
    int m_max = 2;
    std::vector<double> location_grid = {0.0, 0.2, 0.5, 0.8, 1.0};
    // Candidate weight vectors; those whose length matches the current group
    // count apply. Group count 1 always gets {1} if nothing matches.
    std::vector<std::vector<double>> weight_sets = {{1.0}, {1.0, 1.0}, {1.0, 2.0}};
    uint64_t budget = 2'000'000;  // instance limit before refusing to start
};

class SpBudgetExceeded : public std::runtime_error {
public:
    SpBudgetExceeded(uint64_t required, uint64_t budget);

    uint64_t required() const { return required_; }

private:
    uint64_t required_;
};

struct SpExhaustiveResult {
    std::vector<SpViolation> violations;
    uint64_t instances_checked = 0;
};

// Enumerates every instance in the universe, up to agent reordering: all
// multisets of (location, group subset) pairs where every group keeps at
// least one member, crossed with the applicable weight vectors. Misreports
// range over the same location grid.
SpExhaustiveResult sp_exhaustive(const MechanismSpec& spec,
                                 const SpUniverse& universe);

struct RatioResult {
    Instance instance;
    Placement mechanism_placement{0.0};
    double mechanism_value = 0.0;
    OptResult optimum;
    // mechanism_value / optimum.value; 1 when both are zero, +inf when only
    // the optimum is.
    double ratio = 1.0;
};

RatioResult measure_ratio(const MechanismSpec& spec, const Instance& inst,
                          Objective objective, const SolverConfig& solver = {});

// Proven worst-case ratio for the mechanism on instances with the given
// shape, if one is known: balanced 2 (totals), major-phantom 2 (maxima),
// endpoint 1+(n-2)*wr / 1+wr, med 1+(m-1)*wr / 1+wr, leftmost 1+(n-1)*wr /
// 1+wr, major 1+2*wr / 1+wr, with wr = w_max/w_min; never below 1.
std::optional<double> known_bound(MechanismSpec::Kind kind, Objective objective,
                                  int n, int m, double w_min, double w_max);

struct SearchConfig {
    uint64_t seed = 42;
    int trials = 1000;
    InstanceDistribution distribution;
    // Also evaluate every tight family instance expressible within the
    // distribution's size and weight ranges.
    bool inject_tight_families = true;
};

struct SearchResult {
    RatioResult worst;         // highest ratio seen (first hit wins ties)
    int instances_tested = 0;
    // Instances whose ratio exceeded known_bound(...) + 1e-9, which a correct
    // mechanism and solver never produce.
    std::vector<RatioResult> bound_violations;
};

// Deterministic given the config: tight family injections in a fixed order,
// then `trials` sampled instances.
SearchResult worst_case_search(const MechanismSpec& spec, Objective objective,
                               const SearchConfig& search,
                               const SolverConfig& solver = {});

// Families of instances on which each mechanism's bound is attained.
// Weights w_min <= w_max, both positive.

// Agent at 0 in the light group; n-2 agents at 1/2 and one at 1 in the heavy
// group. Endpoint pays (n-2)*w_max/2 against an optimum near w_min/2. n >= 3.
Instance tight_endpoint_wtgc(int n, double w_min, double w_max);

// n-2 agents at 0 in the light group; one at 1/2 and one at 1 in the heavy
// group. Two facilities can cover at most two of the three clusters. n >= 3.
Instance tight_endpoint_wmgc(int n, double w_min, double w_max);

// m-1 light singleton groups at 0, m-1 heavy agents at 1 in one group, so the
// median sits at 0. m >= 2.
Instance tight_med_wtgc(int m, double w_min, double w_max);

// One light agent at 0, n-1 heavy agents at 1. n >= 2.
Instance tight_leftmost_wtgc(int n, double w_min, double w_max);

// Light group at {0, 2*w_max/(2*w_max+w_min)} ties the heavy pair at 1 on
// size, so major picks the light group's left median 0.
Instance tight_major_wtgc(double w_min, double w_max);

// Light agent at 0, heavy agent at 1; worst case for any rule that always
// outputs some agent's location.
Instance tight_two_point(double w_min, double w_max);

// Same profile as tight_endpoint_wtgc with the dictator as the sorted-first
// agent at 0; run with dictatorial:0. n >= 5 keeps both facilities extreme.
Instance tight_dictatorial_wtgc(int n, double w_min, double w_max);

struct BoundTableRow {
    std::string mechanism;
    std::string objective;
    std::string formula;       // bound in terms of n, m, w_max/w_min
    double bound = 0.0;        // formula evaluated at the table parameters
    double measured = 0.0;     // ratio on the row's tight family instance
    std::string note;          // set instead of the numbers for the k>=3 row
    bool tight = false;        // |measured - bound| within tolerance
};

// One row per mechanism/objective pair with a known bound, each measured on
// its tight family instance at the given parameters, plus a final row
// recording that three or more facilities admit no bound at all.
std::vector<BoundTableRow> bound_table(int n, int m, double w_min,
                                       double w_max, double tolerance = 1e-6,
                                       const SolverConfig& solver = {});

}  // namespace groupfair
