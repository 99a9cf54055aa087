#pragma once

#include <string>

#include "groupfair/evaluate.hpp"
#include "groupfair/instance.hpp"

namespace groupfair {

enum class SolveMethod {
    CandidateExact,  // finite candidate enumeration, exact
    SplitExact,      // exact per contiguous left/right split
    NestedSearch,    // outer 1-d search with exact inner solves, polished
    Grid,            // brute force over a sample grid
};

std::string to_string(SolveMethod method);

struct OptResult {
    Placement placement{0.0};
    double value = 0.0;
    SolveMethod method = SolveMethod::CandidateExact;
    // For Grid only: the true optimum is at least value - error_bound.
    double error_bound = 0.0;
};

struct SolverConfig {
    double location_tol = 1e-9;
    double value_tol_floor = 1e-12;
    int grid_points = 2001;     // 1-facility oracle and cross-checks
    int grid_points_2d = 101;   // per axis, 2-facility cross-checks
    bool cross_check = true;    // verify exact solvers against grid oracles

    double value_tol(const Instance& inst) const;
};

// Closed-form single-facility optimum for two agents under the weighted
// maximum objective. Requires x1 <= x2 and positive weights. Same group:
// plain midpoint, value max(w1,w2)*(x2-x1)/2. Different groups: weighted
// midpoint (w1*x1 + w2*x2)/(w1+w2), value w1*w2*(x2-x1)/(w1+w2).
OptResult two_agent_opt_wmgc(double x1, double x2, double w1, double w2,
                             bool same_group);

// Exact single-facility optimum. The objective is piecewise linear and convex
// in the facility location, so the minimum is attained among agent locations
// and pairwise crossings of the per-group effect lines; ties break toward the
// smaller location.
OptResult opt_single(const Instance& inst, Objective objective,
                     const SolverConfig& config = {});

// Two-facility optimum. Every contiguous split of the sorted agents into a
// left and right part is solved independently (some split agrees with the
// nearest-facility assignment of a true optimum, so the best split is
// optimal). Weighted-maximum splits solve two one-center problems exactly;
// weighted-total splits run a golden-section search on the left facility with
// an exact inner solve, then polish over candidate pairs. Value ties prefer
// the smaller split, then the lexicographically smaller placement.
OptResult opt_two(const Instance& inst, Objective objective,
                  const SolverConfig& config = {});

// Brute-force reference: evaluates every grid point (plus agent locations)
// between the extreme agents. error_bound is Lipschitz * spacing / 2.
OptResult grid_oracle_single(const Instance& inst, Objective objective,
                             int grid_points);

// Same over all sorted pairs of grid points.
OptResult grid_oracle_two(const Instance& inst, Objective objective,
                          int grid_points);

// Lipschitz constant of the max group effect in any one facility location:
// max_j w_j*|G_j| for totals, max_j w_j for maxima.
double mge_lipschitz(const Instance& inst, Objective objective);

}  // namespace groupfair
