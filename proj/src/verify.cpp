#include "groupfair/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace groupfair {

namespace {

// A misreport must beat the truthful cost by more than this to count,
// keeping facility arithmetic noise out of violation reports.
constexpr double kMinGain = 1e-12;

// Slack on certified ratio bounds; covers division rounding only.
constexpr double kBoundSlack = 1e-9;

void sort_unique(std::vector<double>& values) {
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
}

}  // namespace

std::vector<SpViolation> sp_check_instance(const MechanismSpec& spec,
                                           const Instance& inst,
                                           std::vector<double> misreport_grid) {
    for (int i = 0; i < inst.num_agents(); ++i) {
        misreport_grid.push_back(inst.location(i));
    }
    sort_unique(misreport_grid);

    std::vector<SpViolation> violations;
    const Placement truthful = apply_mechanism(spec, inst);
    for (int i = 0; i < inst.num_agents(); ++i) {
        const double true_x = inst.location(i);
        const double cost_truthful = cost(truthful, true_x);
        for (double report : misreport_grid) {
            if (report == true_x) continue;
            std::vector<int> old_to_new;
            const Instance deviated =
                inst.with_agent_location(i, report, &old_to_new);
            MechanismSpec deviated_spec = spec;
            if (spec.kind == MechanismSpec::Kind::Dictatorial) {
                // The dictator is a person, not a sorted position; follow it
                // through the re-sorted deviated profile.
                deviated_spec.dictator = old_to_new[spec.dictator];
            }
            const double cost_misreport =
                cost(apply_mechanism(deviated_spec, deviated), true_x);
            if (cost_misreport < cost_truthful - kMinGain) {
                violations.push_back({inst, i, true_x, report, cost_truthful,
                                      cost_misreport});
            }
        }
    }
    return violations;
}

SpBudgetExceeded::SpBudgetExceeded(uint64_t required, uint64_t budget)
    : std::runtime_error("sp_exhaustive: universe has " +
                         std::to_string(required) +
                         " instances, over the budget of " +
                         std::to_string(budget)),
      required_(required) {}

namespace {

struct LabeledReport {
    double location;
    std::vector<int> groups;
};

// All (location, nonempty group subset) pairs, the alphabet that exhaustive
// profiles are multisets over.
std::vector<LabeledReport> report_alphabet(const std::vector<double>& grid,
                                           int m) {
    std::vector<LabeledReport> alphabet;
    for (double x : grid) {
        for (int mask = 1; mask < (1 << m); ++mask) {
            LabeledReport r{x, {}};
            for (int j = 0; j < m; ++j) {
                if (mask & (1 << j)) r.groups.push_back(j);
            }
            alphabet.push_back(std::move(r));
        }
    }
    return alphabet;
}

double count_multisets(double alphabet_size, int n) {
    double count = 1.0;
    for (int i = 0; i < n; ++i) count = count * (alphabet_size + i) / (i + 1);
    return count;
}

template <typename Visit>
void for_each_multiset(int alphabet_size, int n, std::vector<int>& picked,
                       int from, Visit&& visit) {
    if (static_cast<int>(picked.size()) == n) {
        visit(picked);
        return;
    }
    for (int idx = from; idx < alphabet_size; ++idx) {
        picked.push_back(idx);
        for_each_multiset(alphabet_size, n, picked, idx, visit);
        picked.pop_back();
    }
}

}  // namespace

SpExhaustiveResult sp_exhaustive(const MechanismSpec& spec,
                                 const SpUniverse& universe) {
    std::vector<double> grid = universe.location_grid;
    sort_unique(grid);
    if (grid.empty()) {
        throw std::invalid_argument("sp_exhaustive: empty location grid");
    }

    double projected = 0.0;
    for (int m = 1; m <= universe.m_max; ++m) {
        int weight_vectors = 0;
        for (const auto& w : universe.weight_sets) {
            if (static_cast<int>(w.size()) == m) ++weight_vectors;
        }
        const double alphabet = static_cast<double>(grid.size()) * ((1 << m) - 1);
        for (int n = 1; n <= universe.n_max; ++n) {
            projected += count_multisets(alphabet, n) * weight_vectors;
        }
    }
    if (projected > static_cast<double>(universe.budget)) {
        throw SpBudgetExceeded(static_cast<uint64_t>(projected), universe.budget);
    }

    SpExhaustiveResult result;
    for (int n = 1; n <= universe.n_max; ++n) {
        if (spec.kind == MechanismSpec::Kind::Dictatorial && spec.dictator >= n) {
            continue;
        }
        for (int m = 1; m <= universe.m_max; ++m) {
            const auto alphabet = report_alphabet(grid, m);
            std::vector<const std::vector<double>*> weight_vectors;
            for (const auto& w : universe.weight_sets) {
                if (static_cast<int>(w.size()) == m) weight_vectors.push_back(&w);
            }
            if (weight_vectors.empty()) continue;

            std::vector<int> picked;
            for_each_multiset(
                static_cast<int>(alphabet.size()), n, picked, 0,
                [&](const std::vector<int>& profile) {
                    std::vector<bool> populated(m, false);
                    for (int idx : profile) {
                        for (int j : alphabet[idx].groups) populated[j] = true;
                    }
                    if (std::find(populated.begin(), populated.end(), false) !=
                        populated.end()) {
                        return;
                    }
                    std::vector<Agent> agents;
                    agents.reserve(profile.size());
                    for (int idx : profile) {
                        agents.push_back(
                            {alphabet[idx].location, alphabet[idx].groups});
                    }
                    for (const auto* weights : weight_vectors) {
                        Instance inst(agents, *weights);
                        auto found = sp_check_instance(spec, inst, grid);
                        result.violations.insert(
                            result.violations.end(),
                            std::make_move_iterator(found.begin()),
                            std::make_move_iterator(found.end()));
                        ++result.instances_checked;
                    }
                });
        }
    }
    return result;
}

RatioResult measure_ratio(const MechanismSpec& spec, const Instance& inst,
                          Objective objective, const SolverConfig& solver) {
    require_supported_facility_count(spec.facility_count());

    RatioResult result{inst, apply_mechanism(spec, inst), 0.0, {}, 1.0};
    result.mechanism_value =
        max_group_effect(inst, result.mechanism_placement, objective);
    result.optimum = spec.facility_count() == 1
                         ? opt_single(inst, objective, solver)
                         : opt_two(inst, objective, solver);
    if (result.optimum.value == 0.0) {
        result.ratio = result.mechanism_value == 0.0
                           ? 1.0
                           : std::numeric_limits<double>::infinity();
    } else {
        result.ratio = result.mechanism_value / result.optimum.value;
    }
    return result;
}

std::optional<double> known_bound(MechanismSpec::Kind kind, Objective objective,
                                  int n, int m, double w_min, double w_max) {
    const double wr = w_max / w_min;
    std::optional<double> bound;
    switch (kind) {
        case MechanismSpec::Kind::Balanced:
            if (objective == Objective::WTGC) bound = 2.0;
            break;
        case MechanismSpec::Kind::MajorPhantom:
            if (objective == Objective::WMGC) bound = 2.0;
            break;
        case MechanismSpec::Kind::Endpoint:
            bound = objective == Objective::WTGC ? 1.0 + (n - 2) * wr : 1.0 + wr;
            break;
        case MechanismSpec::Kind::Med:
            bound = objective == Objective::WTGC ? 1.0 + (m - 1) * wr : 1.0 + wr;
            break;
        case MechanismSpec::Kind::Leftmost:
            bound = objective == Objective::WTGC ? 1.0 + (n - 1) * wr : 1.0 + wr;
            break;
        case MechanismSpec::Kind::Major:
            bound = objective == Objective::WTGC ? 1.0 + 2.0 * wr : 1.0 + wr;
            break;
        case MechanismSpec::Kind::Dictatorial:
        case MechanismSpec::Kind::MidpointExtremes:
            break;
    }
    // A ratio is never below 1; the n-dependent formulas dip under it for
    // tiny n where the mechanism is exactly optimal.
    if (bound) bound = std::max(1.0, *bound);
    return bound;
}

namespace {

// Every tight family instance expressible within the distribution's size and
// weight ranges, in a fixed order.
std::vector<Instance> tight_injections(const InstanceDistribution& dist) {
    std::vector<double> weights = dist.weight_choices;
    sort_unique(weights);
    std::vector<std::pair<double, double>> pairs;
    for (size_t a = 0; a < weights.size(); ++a) {
        for (size_t b = a; b < weights.size(); ++b) {
            pairs.emplace_back(weights[a], weights[b]);
        }
    }

    const auto n_ok = [&](int n) { return n >= dist.n_min && n <= dist.n_max; };
    const auto m_ok = [&](int m) { return m >= dist.m_min && m <= dist.m_max; };

    std::vector<Instance> out;
    for (const auto& [lo, hi] : pairs) {
        if (m_ok(2)) {
            for (int n = 3; n <= dist.n_max; ++n) {
                if (n_ok(n)) out.push_back(tight_endpoint_wtgc(n, lo, hi));
            }
            for (int n = 3; n <= dist.n_max; ++n) {
                if (n_ok(n)) out.push_back(tight_endpoint_wmgc(n, lo, hi));
            }
            for (int n = 2; n <= dist.n_max; ++n) {
                if (n_ok(n)) out.push_back(tight_leftmost_wtgc(n, lo, hi));
            }
            if (n_ok(4)) out.push_back(tight_major_wtgc(lo, hi));
            if (n_ok(2)) out.push_back(tight_two_point(lo, hi));
            for (int n = 5; n <= dist.n_max; ++n) {
                if (n_ok(n)) out.push_back(tight_dictatorial_wtgc(n, lo, hi));
            }
        }
        for (int m = 2; m <= dist.m_max; ++m) {
            if (m_ok(m) && n_ok(2 * (m - 1))) {
                out.push_back(tight_med_wtgc(m, lo, hi));
            }
        }
    }
    return out;
}

}  // namespace

SearchResult worst_case_search(const MechanismSpec& spec, Objective objective,
                               const SearchConfig& search,
                               const SolverConfig& solver) {
    std::optional<RatioResult> worst;
    int tested = 0;
    std::vector<RatioResult> bound_violations;

    auto consider = [&](const Instance& inst) {
        if (spec.kind == MechanismSpec::Kind::Dictatorial &&
            spec.dictator >= inst.num_agents()) {
            return;
        }
        RatioResult measured = measure_ratio(spec, inst, objective, solver);
        ++tested;
        const auto bound =
            known_bound(spec.kind, objective, inst.num_agents(),
                        inst.num_groups(), inst.min_weight(), inst.max_weight());
        if (bound && measured.ratio > *bound + kBoundSlack) {
            bound_violations.push_back(measured);
        }
        if (!worst || measured.ratio > worst->ratio) {
            worst = std::move(measured);
        }
    };

    if (search.inject_tight_families) {
        for (const auto& inst : tight_injections(search.distribution)) {
            consider(inst);
        }
    }
    Rng rng(search.seed);
    for (int trial = 0; trial < search.trials; ++trial) {
        consider(sample_instance(rng, search.distribution));
    }
    if (!worst) {
        throw std::invalid_argument("worst_case_search: nothing to test");
    }
    return SearchResult{std::move(*worst), tested, std::move(bound_violations)};
}

namespace {

void require_weights(double w_min, double w_max) {
    if (!(w_min > 0.0) || !(w_max >= w_min)) {
        throw std::invalid_argument(
            "tight family: need 0 < w_min <= w_max");
    }
}

void require_n(int n, int at_least) {
    if (n < at_least) {
        throw std::invalid_argument("tight family: need n >= " +
                                    std::to_string(at_least));
    }
}

}  // namespace

Instance tight_endpoint_wtgc(int n, double w_min, double w_max) {
    require_weights(w_min, w_max);
    require_n(n, 3);
    std::vector<Agent> agents{{0.0, {0}}};
    for (int i = 0; i < n - 2; ++i) agents.push_back({0.5, {1}});
    agents.push_back({1.0, {1}});
    return Instance(std::move(agents), {w_min, w_max});
}

Instance tight_endpoint_wmgc(int n, double w_min, double w_max) {
    require_weights(w_min, w_max);
    require_n(n, 3);
    std::vector<Agent> agents;
    for (int i = 0; i < n - 2; ++i) agents.push_back({0.0, {0}});
    agents.push_back({0.5, {1}});
    agents.push_back({1.0, {1}});
    return Instance(std::move(agents), {w_min, w_max});
}

Instance tight_med_wtgc(int m, double w_min, double w_max) {
    require_weights(w_min, w_max);
    if (m < 2) throw std::invalid_argument("tight family: need m >= 2");
    std::vector<double> weights(m, w_min);
    weights[0] = w_max;
    std::vector<Agent> agents;
    for (int j = 1; j < m; ++j) agents.push_back({0.0, {j}});
    for (int i = 0; i < m - 1; ++i) agents.push_back({1.0, {0}});
    return Instance(std::move(agents), std::move(weights));
}

Instance tight_leftmost_wtgc(int n, double w_min, double w_max) {
    require_weights(w_min, w_max);
    require_n(n, 2);
    std::vector<Agent> agents{{0.0, {0}}};
    for (int i = 0; i < n - 1; ++i) agents.push_back({1.0, {1}});
    return Instance(std::move(agents), {w_min, w_max});
}

Instance tight_major_wtgc(double w_min, double w_max) {
    require_weights(w_min, w_max);
    const double inner = 2.0 * w_max / (2.0 * w_max + w_min);
    return Instance({{0.0, {0}}, {inner, {0}}, {1.0, {1}}, {1.0, {1}}},
                    {w_min, w_max});
}

Instance tight_two_point(double w_min, double w_max) {
    require_weights(w_min, w_max);
    return Instance({{0.0, {0}}, {1.0, {1}}}, {w_min, w_max});
}

Instance tight_dictatorial_wtgc(int n, double w_min, double w_max) {
    require_n(n, 5);
    // The dictator is the sorted-first agent at 0; run with dictatorial:0,
    // whose output then coincides with endpoint's.
    return tight_endpoint_wtgc(n, w_min, w_max);
}

std::vector<BoundTableRow> bound_table(int n, int m, double w_min,
                                       double w_max, double tolerance,
                                       const SolverConfig& solver) {
    const double wr = w_max / w_min;

    struct RowPlan {
        std::string mechanism;
        Objective objective;
        std::string formula;
        double bound;
        Instance (*family)(int n, int m, double w_min, double w_max);
    };
    const auto endpoint_wtgc = [](int nn, int, double lo, double hi) {
        return tight_endpoint_wtgc(nn, lo, hi);
    };
    const auto endpoint_wmgc = [](int nn, int, double lo, double hi) {
        return tight_endpoint_wmgc(nn, lo, hi);
    };
    const auto med_wtgc = [](int, int mm, double lo, double hi) {
        return tight_med_wtgc(mm, lo, hi);
    };
    const auto leftmost_wtgc = [](int nn, int, double lo, double hi) {
        return tight_leftmost_wtgc(nn, lo, hi);
    };
    const auto major_wtgc = [](int, int, double lo, double hi) {
        return tight_major_wtgc(lo, hi);
    };
    const auto two_point = [](int, int, double lo, double hi) {
        return tight_two_point(lo, hi);
    };
    const auto two_point_equal = [](int, int, double lo, double) {
        return tight_two_point(lo, lo);
    };
    const auto dict_wtgc = [](int nn, int, double lo, double hi) {
        return tight_dictatorial_wtgc(nn, lo, hi);
    };

    const std::vector<RowPlan> plans = {
        {"balanced", Objective::WTGC, "2", 2.0, two_point_equal},
        {"major-phantom", Objective::WMGC, "2", 2.0, two_point_equal},
        {"endpoint", Objective::WTGC, "1+(n-2)*w_max/w_min",
         1.0 + (n - 2) * wr, endpoint_wtgc},
        {"endpoint", Objective::WMGC, "1+w_max/w_min", 1.0 + wr, endpoint_wmgc},
        {"med", Objective::WTGC, "1+(m-1)*w_max/w_min", 1.0 + (m - 1) * wr,
         med_wtgc},
        {"med", Objective::WMGC, "1+w_max/w_min", 1.0 + wr, two_point},
        {"leftmost", Objective::WTGC, "1+(n-1)*w_max/w_min",
         1.0 + (n - 1) * wr, leftmost_wtgc},
        {"leftmost", Objective::WMGC, "1+w_max/w_min", 1.0 + wr, two_point},
        {"major", Objective::WTGC, "1+2*w_max/w_min", 1.0 + 2.0 * wr,
         major_wtgc},
        {"major", Objective::WMGC, "1+w_max/w_min", 1.0 + wr, two_point},
        {"dictatorial:0", Objective::WTGC, "1+(n-2)*w_max/w_min",
         1.0 + (n - 2) * wr, dict_wtgc},
    };

    std::vector<BoundTableRow> rows;
    for (const auto& plan : plans) {
        BoundTableRow row;
        row.mechanism = plan.mechanism;
        row.objective = plan.objective == Objective::WTGC ? "wtgc" : "wmgc";
        row.formula = plan.formula;
        row.bound = plan.bound;
        try {
            const Instance inst = plan.family(n, m, w_min, w_max);
            const auto measured = measure_ratio(parse_mechanism(plan.mechanism),
                                                inst, plan.objective, solver);
            row.measured = measured.ratio;
            row.tight = std::abs(row.measured - row.bound) <= tolerance;
        } catch (const std::exception& e) {
            row.note = e.what();
        }
        rows.push_back(std::move(row));
    }

    BoundTableRow refusal;
    refusal.mechanism = "any";
    refusal.objective = "wtgc|wmgc";
    refusal.formula = "unbounded";
    refusal.bound = std::numeric_limits<double>::quiet_NaN();
    refusal.measured = std::numeric_limits<double>::quiet_NaN();
    refusal.note = "no strategyproof mechanism has a bounded approximation "
                   "for k>=3 facilities; such requests are refused";
    refusal.tight = true;
    rows.push_back(std::move(refusal));
    return rows;
}

}  // namespace groupfair
