#include "groupfair/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace groupfair {

namespace {

void check_locations(const std::vector<double>& locations) {
    if (locations.empty()) {
        throw std::invalid_argument("placement: need at least one facility");
    }
    for (double y : locations) {
        if (!std::isfinite(y)) {
            throw std::invalid_argument("placement: facility location must be finite");
        }
    }
}

}  // namespace

Placement::Placement(std::initializer_list<double> locations)
    : Placement(std::vector<double>(locations)) {}

Placement::Placement(std::vector<double> locations)
    : locations_(std::move(locations)) {
    check_locations(locations_);
    std::sort(locations_.begin(), locations_.end());
}

double cost(const Placement& placement, double x) {
    double best = std::abs(placement[0] - x);
    for (int i = 1; i < placement.size(); ++i) {
        best = std::min(best, std::abs(placement[i] - x));
    }
    return best;
}

double group_effect(const Instance& inst, const Placement& placement,
                    Objective objective, int j) {
    if (j < 0 || j >= inst.num_groups()) {
        throw std::invalid_argument("group_effect: group id " +
                                    std::to_string(j) + " out of range");
    }
    double acc = 0.0;
    for (int i : inst.members(j)) {
        const double c = cost(placement, inst.location(i));
        acc = objective == Objective::WTGC ? acc + c : std::max(acc, c);
    }
    return inst.weight(j) * acc;
}

EvalReport evaluate(const Instance& inst, const Placement& placement,
                    Objective objective) {
    EvalReport report;
    report.effects.resize(inst.num_groups());
    for (int j = 0; j < inst.num_groups(); ++j) {
        report.effects[j] = group_effect(inst, placement, objective, j);
        if (report.effects[j] > report.effects[report.argmax_group]) {
            report.argmax_group = j;
        }
    }
    report.mge = report.effects[report.argmax_group];
    return report;
}

double max_group_effect(const Instance& inst, const Placement& placement,
                        Objective objective) {
    double best = 0.0;
    for (int j = 0; j < inst.num_groups(); ++j) {
        best = std::max(best, group_effect(inst, placement, objective, j));
    }
    return best;
}

}  // namespace groupfair
