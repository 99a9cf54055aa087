#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "groupfair/instance.hpp"

namespace groupfair {

// mt19937_64 with hand-rolled int/real mapping so the same seed produces the
// same stream on every platform (std::uniform_*_distribution output is
// implementation-defined).
class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    uint64_t next_u64() { return gen_(); }

    // Uniform in [lo, hi], inclusive. Modulo mapping; the bias is far below
    // anything these ranges can expose.
    int uniform_int(int lo, int hi);

    // Uniform in [lo, hi) with 53-bit resolution.
    double uniform_real(double lo, double hi);

    template <typename T>
    const T& pick(const std::vector<T>& choices) {
        return choices[uniform_int(0, static_cast<int>(choices.size()) - 1)];
    }

private:
    std::mt19937_64 gen_;
};

struct InstanceDistribution {
    int n_min = 1, n_max = 6;
    int m_min = 1, m_max = 3;
    // Locations are drawn from this grid when non-empty, else uniformly from
    // [location_lo, location_hi].
    std::vector<double> location_grid;
    double location_lo = 0.0, location_hi = 1.0;
    std::vector<double> weight_choices = {1.0, 2.0, 5.0};
};

// Draws sizes, weights, locations, and per-agent nonempty group subsets, then
// patches any memberless group by enrolling a random agent.
Instance sample_instance(Rng& rng, const InstanceDistribution& dist);

}  // namespace groupfair
