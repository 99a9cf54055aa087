#include "groupfair/instance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace groupfair {

namespace {

std::string join_errors(const std::vector<std::string>& errors) {
    std::ostringstream out;
    out << "invalid instance:";
    for (const auto& e : errors) out << "\n  " << e;
    return out.str();
}

}  // namespace

InvalidInstance::InvalidInstance(std::vector<std::string> errors)
    : std::runtime_error(join_errors(errors)), errors_(std::move(errors)) {}

std::vector<std::string> validate(const std::vector<Agent>& agents,
                                  const std::vector<double>& weights) {
    std::vector<std::string> errors;
    const int n = static_cast<int>(agents.size());
    const int m = static_cast<int>(weights.size());

    if (n == 0) errors.push_back("agents: need at least one agent");
    if (m == 0) errors.push_back("weights: need at least one group");

    for (int j = 0; j < m; ++j) {
        if (!std::isfinite(weights[j]) || weights[j] <= 0.0) {
            errors.push_back("weights[" + std::to_string(j) +
                             "]: group weights must be positive and finite");
        }
    }

    std::vector<bool> populated(m, false);
    for (int i = 0; i < n; ++i) {
        const std::string where = "agents[" + std::to_string(i) + "]";
        if (!std::isfinite(agents[i].location)) {
            errors.push_back(where + ".x: location must be finite");
        }
        if (agents[i].groups.empty()) {
            errors.push_back(where + ".groups: agent belongs to no group");
        }
        for (int g : agents[i].groups) {
            if (g < 0 || g >= m) {
                errors.push_back(where + ".groups: group id " +
                                 std::to_string(g) + " out of range [0, " +
                                 std::to_string(m) + ")");
            } else {
                populated[g] = true;
            }
        }
    }
    for (int j = 0; j < m; ++j) {
        if (!populated[j]) {
            errors.push_back("weights[" + std::to_string(j) +
                             "]: group has no members");
        }
    }
    return errors;
}

Instance::Instance(std::vector<Agent> agents, std::vector<double> weights)
    : agents_(std::move(agents)), weights_(std::move(weights)) {
    for (auto& a : agents_) {
        std::sort(a.groups.begin(), a.groups.end());
        a.groups.erase(std::unique(a.groups.begin(), a.groups.end()),
                       a.groups.end());
    }
    if (auto errors = validate(agents_, weights_); !errors.empty()) {
        throw InvalidInstance(std::move(errors));
    }
    std::stable_sort(agents_.begin(), agents_.end(),
                     [](const Agent& a, const Agent& b) {
                         return a.location < b.location;
                     });
    members_.resize(weights_.size());
    for (int i = 0; i < num_agents(); ++i) {
        for (int g : agents_[i].groups) members_[g].push_back(i);
    }
}

double Instance::agent_weight(int i) const {
    double w = 0.0;
    for (int g : agents_[i].groups) w = std::max(w, weights_[g]);
    return w;
}

double Instance::min_weight() const {
    return *std::min_element(weights_.begin(), weights_.end());
}

double Instance::max_weight() const {
    return *std::max_element(weights_.begin(), weights_.end());
}

int Instance::max_weight_group() const {
    int best = 0;
    for (int j = 1; j < num_groups(); ++j) {
        if (weights_[j] > weights_[best]) best = j;
    }
    return best;
}

int Instance::largest_group() const {
    int best = 0;
    for (int j = 1; j < num_groups(); ++j) {
        if (group_size(j) > group_size(best)) best = j;
    }
    return best;
}

Instance Instance::with_agent_location(int i, double location,
                                       std::vector<int>* old_to_new) const {
    std::vector<Agent> moved = agents_;
    moved[i].location = location;

    std::vector<int> order(moved.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return moved[a].location < moved[b].location;
    });

    std::vector<Agent> sorted;
    sorted.reserve(moved.size());
    for (int idx : order) sorted.push_back(moved[idx]);

    if (old_to_new) {
        old_to_new->assign(moved.size(), 0);
        for (int pos = 0; pos < static_cast<int>(order.size()); ++pos) {
            (*old_to_new)[order[pos]] = pos;
        }
    }
    return Instance(std::move(sorted), weights_);
}

}  // namespace groupfair
