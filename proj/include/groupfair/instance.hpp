#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace groupfair {

// An agent reports a location on the real line and belongs to one or more
// groups. Group ids index into the instance-wide weight vector.
struct Agent {
    double location = 0.0;
    std::vector<int> groups;

    bool operator==(const Agent&) const = default;
};

class InvalidInstance : public std::runtime_error {
public:
    explicit InvalidInstance(std::vector<std::string> errors);

    const std::vector<std::string>& errors() const { return errors_; }

private:
    std::vector<std::string> errors_;
};

// Returns every problem found with the given agents/weights, empty if they
// form a valid instance. Checked: at least one agent and one group, finite
// locations, positive finite weights, group ids in range, no agent without a
// group, no group without a member.
std::vector<std::string> validate(const std::vector<Agent>& agents,
                                  const std::vector<double>& weights);

// A validated problem instance. Agents are stably sorted by location on
// construction and each agent's group list is sorted and deduplicated, so
// agent indices used elsewhere always refer to this canonical order.
class Instance {
public:
    Instance(std::vector<Agent> agents, std::vector<double> weights);

    int num_agents() const { return static_cast<int>(agents_.size()); }
    int num_groups() const { return static_cast<int>(weights_.size()); }

    const std::vector<Agent>& agents() const { return agents_; }
    const Agent& agent(int i) const { return agents_[i]; }
    double location(int i) const { return agents_[i].location; }
    double weight(int j) const { return weights_[j]; }
    const std::vector<double>& weights() const { return weights_; }

    // Agent indices of group j's members, ascending (so ascending by location).
    const std::vector<int>& members(int j) const { return members_[j]; }
    int group_size(int j) const { return static_cast<int>(members_[j].size()); }

    // Largest weight among the groups agent i belongs to.
    double agent_weight(int i) const;

    double min_weight() const;
    double max_weight() const;
    double min_location() const { return agents_.front().location; }
    double max_location() const { return agents_.back().location; }
    double diameter() const { return max_location() - min_location(); }

    // Group with the largest weight; ties broken toward the smallest id.
    int max_weight_group() const;
    // Group with the most members; ties broken toward the smallest id.
    int largest_group() const;

    // Copy of this instance with agent i's location replaced and agents
    // re-sorted. If old_to_new is non-null it receives the index mapping from
    // this instance's agent order to the returned one.
    Instance with_agent_location(int i, double location,
                                 std::vector<int>* old_to_new = nullptr) const;

    bool operator==(const Instance&) const = default;

private:
    std::vector<Agent> agents_;
    std::vector<double> weights_;
    std::vector<std::vector<int>> members_;
};

}  // namespace groupfair
