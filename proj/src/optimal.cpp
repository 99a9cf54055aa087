#include "groupfair/optimal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace groupfair {

namespace {

constexpr double kInvPhi = 0.6180339887498949;

std::vector<double> distinct_locations(const Instance& inst, int begin, int end) {
    std::vector<double> out;
    for (int i = begin; i < end; ++i) {
        if (out.empty() || inst.location(i) != out.back()) {
            out.push_back(inst.location(i));
        }
    }
    return out;
}

void sort_unique(std::vector<double>& values) {
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
}

// Minimum of a finite function over candidate points, ties to the smallest
// point. Candidates are sorted first so the tie rule is order-independent.
template <typename F>
std::pair<double, double> minimize_over(std::vector<double> candidates, F&& value) {
    sort_unique(candidates);
    double best_y = candidates.front();
    double best_v = value(best_y);
    for (size_t i = 1; i < candidates.size(); ++i) {
        const double v = value(candidates[i]);
        if (v < best_v) {
            best_v = v;
            best_y = candidates[i];
        }
    }
    return {best_y, best_v};
}

// Crossing points of the affine group-effect pieces inside each interval of
// consecutive sample locations. values(d) must fill per-group effects at d,
// slopes(d) the per-group derivatives just right of d.
template <typename Values, typename Slopes>
void add_piece_crossings(const std::vector<double>& kinks, int m,
                         Values&& values, Slopes&& slopes,
                         std::vector<double>& out) {
    std::vector<double> v(m), s(m);
    for (size_t t = 0; t + 1 < kinks.size(); ++t) {
        const double lo = kinks[t], hi = kinks[t + 1];
        values(lo, v);
        slopes(lo, s);
        for (int a = 0; a < m; ++a) {
            for (int b = a + 1; b < m; ++b) {
                if (s[a] == s[b]) continue;
                const double y = lo + (v[b] - v[a]) / (s[a] - s[b]);
                if (y >= lo && y <= hi) out.push_back(y);
            }
        }
    }
}

struct WeightedPoint {
    double x;
    double w;
};

// Exact minimizer of max_i w_i*|y - x_i|: the active rising and falling lines
// cross at a weighted midpoint of two points, so those plus the point
// locations cover every possible minimum.
std::pair<double, double> weighted_one_center(const std::vector<WeightedPoint>& pts) {
    std::vector<double> candidates;
    for (const auto& p : pts) candidates.push_back(p.x);
    for (size_t a = 0; a < pts.size(); ++a) {
        for (size_t b = 0; b < pts.size(); ++b) {
            if (pts[a].x >= pts[b].x) continue;
            candidates.push_back((pts[a].w * pts[a].x + pts[b].w * pts[b].x) /
                                 (pts[a].w + pts[b].w));
        }
    }
    return minimize_over(std::move(candidates), [&](double y) {
        double worst = 0.0;
        for (const auto& p : pts) worst = std::max(worst, p.w * std::abs(y - p.x));
        return worst;
    });
}

// Weighted total cost of group j's members with index in [begin, end) served
// from y, including the group weight.
double side_total(const Instance& inst, int j, int begin, int end, double y) {
    double total = 0.0;
    for (int i : inst.members(j)) {
        if (i >= begin && i < end) total += std::abs(y - inst.location(i));
    }
    return inst.weight(j) * total;
}

// d/dy of side_total just right of y: weight times (members at or left of y
// minus members right of y), restricted to [begin, end).
double side_total_slope(const Instance& inst, int j, int begin, int end, double y) {
    int balance = 0;
    for (int i : inst.members(j)) {
        if (i >= begin && i < end) balance += inst.location(i) <= y ? 1 : -1;
    }
    return inst.weight(j) * balance;
}

struct SplitSolution {
    double y1 = 0.0, y2 = 0.0;
    double forced_value = 0.0;  // left part served by y1, right part by y2
};

// Exact minimum over y2 of max_j (offset_j + B_j(y2)) where B_j is group j's
// weighted total over the right part. Piecewise linear and convex, so agent
// locations plus piece crossings suffice.
std::pair<double, double> best_right_total(const Instance& inst, int split,
                                           const std::vector<double>& offsets) {
    const int n = inst.num_agents();
    const int m = inst.num_groups();
    const auto kinks = distinct_locations(inst, split, n);

    auto objective = [&](double y2) {
        double worst = 0.0;
        for (int j = 0; j < m; ++j) {
            worst = std::max(worst, offsets[j] + side_total(inst, j, split, n, y2));
        }
        return worst;
    };

    std::vector<double> candidates = kinks;
    add_piece_crossings(
        kinks, m,
        [&](double d, std::vector<double>& v) {
            for (int j = 0; j < m; ++j) {
                v[j] = offsets[j] + side_total(inst, j, split, n, d);
            }
        },
        [&](double d, std::vector<double>& s) {
            for (int j = 0; j < m; ++j) {
                s[j] = side_total_slope(inst, j, split, n, d);
            }
        },
        candidates);
    auto [y2, value] = minimize_over(std::move(candidates), objective);
    return {y2, value};
}

// Forced-assignment optimum for one split of the weighted-total objective.
// Outer golden-section search over y1 (the partial minimum over y2 is convex
// in y1), then a polish pass solving y2 exactly at every left-side kink and
// crossing, which recovers the common exactly-representable optima.
SplitSolution solve_split_wtgc(const Instance& inst, int split,
                               const SolverConfig& config) {
    const int m = inst.num_groups();

    std::vector<double> offsets(m);
    auto inner = [&](double y1) {
        for (int j = 0; j < m; ++j) offsets[j] = side_total(inst, j, 0, split, y1);
        return best_right_total(inst, split, offsets);
    };

    const auto left_kinks = distinct_locations(inst, 0, split);
    double lo = left_kinks.front(), hi = left_kinks.back();

    std::vector<double> candidates = left_kinks;
    add_piece_crossings(
        left_kinks, m,
        [&](double d, std::vector<double>& v) {
            for (int j = 0; j < m; ++j) v[j] = side_total(inst, j, 0, split, d);
        },
        [&](double d, std::vector<double>& s) {
            for (int j = 0; j < m; ++j) {
                s[j] = side_total_slope(inst, j, 0, split, d);
            }
        },
        candidates);

    if (hi - lo > config.location_tol) {
        double a = lo, b = hi;
        double x1 = b - kInvPhi * (b - a);
        double x2 = a + kInvPhi * (b - a);
        double f1 = inner(x1).second;
        double f2 = inner(x2).second;
        for (int iter = 0; iter < 200 && b - a > config.location_tol; ++iter) {
            if (f1 <= f2) {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - kInvPhi * (b - a);
                f1 = inner(x1).second;
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + kInvPhi * (b - a);
                f2 = inner(x2).second;
            }
        }
        candidates.push_back(f1 <= f2 ? x1 : x2);
    }

    SplitSolution best;
    best.forced_value = std::numeric_limits<double>::infinity();
    sort_unique(candidates);
    for (double y1 : candidates) {
        const auto [y2, value] = inner(y1);
        if (value < best.forced_value) {
            best = {y1, y2, value};
        }
    }
    return best;
}

// Forced-assignment optimum for one split of the weighted-maximum objective:
// two independent weighted one-center problems over the per-agent weights.
SplitSolution solve_split_wmgc(const Instance& inst, int split) {
    const int n = inst.num_agents();
    std::vector<WeightedPoint> left, right;
    for (int i = 0; i < n; ++i) {
        (i < split ? left : right).push_back({inst.location(i), inst.agent_weight(i)});
    }
    const auto [y1, v1] = weighted_one_center(left);
    const auto [y2, v2] = weighted_one_center(right);
    return {y1, y2, std::max(v1, v2)};
}

void cross_check_single(const Instance& inst, Objective objective,
                        const OptResult& result, const SolverConfig& config) {
    const OptResult grid = grid_oracle_single(inst, objective, config.grid_points);
    const double tol = config.value_tol(inst);
    if (result.value > grid.value + tol ||
        result.value < grid.value - grid.error_bound - tol) {
        throw std::logic_error("opt_single disagrees with its grid oracle");
    }
}

void cross_check_two(const Instance& inst, Objective objective,
                     const OptResult& result, const SolverConfig& config) {
    const OptResult grid = grid_oracle_two(inst, objective, config.grid_points_2d);
    // The nested search stops at location_tol, which the value check must
    // absorb at the objective's Lipschitz rate.
    const double tol = config.value_tol(inst) +
                       mge_lipschitz(inst, objective) * config.location_tol;
    if (result.value > grid.value + tol ||
        result.value < grid.value - grid.error_bound - tol) {
        throw std::logic_error("opt_two disagrees with its grid oracle");
    }
}

}  // namespace

std::string to_string(SolveMethod method) {
    switch (method) {
        case SolveMethod::CandidateExact: return "candidate-exact";
        case SolveMethod::SplitExact: return "split-exact";
        case SolveMethod::NestedSearch: return "nested-search";
        case SolveMethod::Grid: return "grid";
    }
    return "?";
}

double SolverConfig::value_tol(const Instance& inst) const {
    return std::max(1e-9 * inst.diameter(), value_tol_floor);
}

double mge_lipschitz(const Instance& inst, Objective objective) {
    double lip = 0.0;
    for (int j = 0; j < inst.num_groups(); ++j) {
        const double group_lip =
            objective == Objective::WTGC
                ? inst.weight(j) * inst.group_size(j)
                : inst.weight(j);
        lip = std::max(lip, group_lip);
    }
    return lip;
}

OptResult two_agent_opt_wmgc(double x1, double x2, double w1, double w2,
                             bool same_group) {
    if (x1 > x2) throw std::invalid_argument("two_agent_opt_wmgc: x1 > x2");
    if (w1 <= 0.0 || w2 <= 0.0) {
        throw std::invalid_argument("two_agent_opt_wmgc: weights must be positive");
    }
    OptResult result;
    result.method = SolveMethod::CandidateExact;
    if (same_group) {
        const double w = std::max(w1, w2);
        result.placement = Placement{(x1 + x2) / 2.0};
        result.value = w * (x2 - x1) / 2.0;
    } else {
        result.placement = Placement{(w1 * x1 + w2 * x2) / (w1 + w2)};
        result.value = w1 * w2 * (x2 - x1) / (w1 + w2);
    }
    return result;
}

OptResult opt_single(const Instance& inst, Objective objective,
                     const SolverConfig& config) {
    const int n = inst.num_agents();
    const int m = inst.num_groups();
    std::vector<double> candidates = distinct_locations(inst, 0, n);

    if (objective == Objective::WMGC) {
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
                if (inst.location(a) >= inst.location(b)) continue;
                const double wa = inst.agent_weight(a), wb = inst.agent_weight(b);
                candidates.push_back(
                    (wa * inst.location(a) + wb * inst.location(b)) / (wa + wb));
            }
        }
    } else {
        add_piece_crossings(
            distinct_locations(inst, 0, n), m,
            [&](double d, std::vector<double>& v) {
                for (int j = 0; j < m; ++j) v[j] = side_total(inst, j, 0, n, d);
            },
            [&](double d, std::vector<double>& s) {
                for (int j = 0; j < m; ++j) {
                    s[j] = side_total_slope(inst, j, 0, n, d);
                }
            },
            candidates);
    }

    auto [y, value] = minimize_over(std::move(candidates), [&](double point) {
        return max_group_effect(inst, Placement{point}, objective);
    });

    OptResult result;
    result.placement = Placement{y};
    result.value = value;
    result.method = SolveMethod::CandidateExact;
    if (config.cross_check) cross_check_single(inst, objective, result, config);
    return result;
}

OptResult opt_two(const Instance& inst, Objective objective,
                  const SolverConfig& config) {
    const int n = inst.num_agents();

    OptResult best;
    best.value = std::numeric_limits<double>::infinity();
    best.method = objective == Objective::WMGC ? SolveMethod::SplitExact
                                               : SolveMethod::NestedSearch;

    // Some split agrees with how a true optimum's facilities partition the
    // sorted agents, so scanning all of them cannot miss the optimum. An
    // empty side parks its facility on the other side's.
    for (int split = 0; split <= n; ++split) {
        SplitSolution sol;
        if (split == 0 || split == n) {
            if (objective == Objective::WMGC) {
                std::vector<WeightedPoint> pts;
                for (int i = 0; i < n; ++i) {
                    pts.push_back({inst.location(i), inst.agent_weight(i)});
                }
                const auto [y, v] = weighted_one_center(pts);
                sol = {y, y, v};
            } else {
                const std::vector<double> offsets(inst.num_groups(), 0.0);
                const auto [y, v] = best_right_total(inst, 0, offsets);
                sol = {y, y, v};
            }
        } else if (objective == Objective::WMGC) {
            sol = solve_split_wmgc(inst, split);
        } else {
            sol = solve_split_wtgc(inst, split, config);
        }

        const Placement placement{sol.y1, sol.y2};
        const double value = max_group_effect(inst, placement, objective);
        if (value < best.value) {
            best.placement = placement;
            best.value = value;
        }
    }

    if (config.cross_check) cross_check_two(inst, objective, best, config);
    return best;
}

OptResult grid_oracle_single(const Instance& inst, Objective objective,
                             int grid_points) {
    if (grid_points < 3) {
        throw std::invalid_argument("grid oracle: need at least 3 grid points");
    }
    const double lo = inst.min_location(), hi = inst.max_location();
    std::vector<double> samples = distinct_locations(inst, 0, inst.num_agents());
    for (int i = 0; i < grid_points; ++i) {
        samples.push_back(lo + (hi - lo) * i / (grid_points - 1));
    }
    auto [y, value] = minimize_over(std::move(samples), [&](double point) {
        return max_group_effect(inst, Placement{point}, objective);
    });

    OptResult result;
    result.placement = Placement{y};
    result.value = value;
    result.method = SolveMethod::Grid;
    result.error_bound =
        mge_lipschitz(inst, objective) * (hi - lo) / (grid_points - 1) / 2.0;
    return result;
}

OptResult grid_oracle_two(const Instance& inst, Objective objective,
                          int grid_points) {
    if (grid_points < 3) {
        throw std::invalid_argument("grid oracle: need at least 3 grid points");
    }
    const double lo = inst.min_location(), hi = inst.max_location();
    std::vector<double> samples = distinct_locations(inst, 0, inst.num_agents());
    for (int i = 0; i < grid_points; ++i) {
        samples.push_back(lo + (hi - lo) * i / (grid_points - 1));
    }
    sort_unique(samples);

    OptResult result;
    result.method = SolveMethod::Grid;
    result.value = std::numeric_limits<double>::infinity();
    for (size_t a = 0; a < samples.size(); ++a) {
        for (size_t b = a; b < samples.size(); ++b) {
            const Placement placement{samples[a], samples[b]};
            const double value = max_group_effect(inst, placement, objective);
            if (value < result.value) {
                result.value = value;
                result.placement = placement;
            }
        }
    }
    result.error_bound =
        mge_lipschitz(inst, objective) * (hi - lo) / (grid_points - 1) / 2.0;
    return result;
}

}  // namespace groupfair
