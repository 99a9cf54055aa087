#pragma once

#include <vector>

#include "groupfair/instance.hpp"

namespace groupfair {

// Facility locations, kept sorted ascending.
class Placement {
public:
    Placement(std::initializer_list<double> locations);
    explicit Placement(std::vector<double> locations);

    int size() const { return static_cast<int>(locations_.size()); }
    double operator[](int i) const { return locations_[i]; }
    const std::vector<double>& locations() const { return locations_; }

    bool operator==(const Placement&) const = default;

private:
    std::vector<double> locations_;
};

enum class Objective {
    WTGC,  // weighted total group cost: w_j * sum of member costs
    WMGC,  // weighted maximum group cost: w_j * max member cost
};

// Distance from x to the nearest facility.
double cost(const Placement& placement, double x);

// w_j times the total or maximum cost over group j's members.
double group_effect(const Instance& inst, const Placement& placement,
                    Objective objective, int j);

struct EvalReport {
    std::vector<double> effects;  // one per group
    double mge = 0.0;             // max over effects
    int argmax_group = 0;         // smallest group id attaining mge
};

EvalReport evaluate(const Instance& inst, const Placement& placement,
                    Objective objective);

// Max group effect only; same value as evaluate(...).mge.
double max_group_effect(const Instance& inst, const Placement& placement,
                        Objective objective);

}  // namespace groupfair
