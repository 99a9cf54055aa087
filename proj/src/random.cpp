#include "groupfair/random.hpp"

#include <stdexcept>

namespace groupfair {

int Rng::uniform_int(int lo, int hi) {
    if (lo > hi) throw std::invalid_argument("uniform_int: empty range");
    const uint64_t span = static_cast<uint64_t>(hi) - static_cast<uint64_t>(lo) + 1;
    return lo + static_cast<int>(next_u64() % span);
}

double Rng::uniform_real(double lo, double hi) {
    return lo + (hi - lo) * ((next_u64() >> 11) * 0x1.0p-53);
}

Instance sample_instance(Rng& rng, const InstanceDistribution& dist) {
    if (dist.weight_choices.empty()) {
        throw std::invalid_argument("sample_instance: no weight choices");
    }
    const int n = rng.uniform_int(dist.n_min, dist.n_max);
    const int m = rng.uniform_int(dist.m_min, dist.m_max);

    std::vector<double> weights(m);
    for (int j = 0; j < m; ++j) weights[j] = rng.pick(dist.weight_choices);

    std::vector<Agent> agents(n);
    for (int i = 0; i < n; ++i) {
        agents[i].location = dist.location_grid.empty()
                                 ? rng.uniform_real(dist.location_lo, dist.location_hi)
                                 : rng.pick(dist.location_grid);
        const int mask = rng.uniform_int(1, (1 << m) - 1);
        for (int j = 0; j < m; ++j) {
            if (mask & (1 << j)) agents[i].groups.push_back(j);
        }
    }

    // Every group needs a member; enroll a random agent in any empty one.
    std::vector<bool> populated(m, false);
    for (const auto& a : agents) {
        for (int j : a.groups) populated[j] = true;
    }
    for (int j = 0; j < m; ++j) {
        if (!populated[j]) agents[rng.uniform_int(0, n - 1)].groups.push_back(j);
    }
    return Instance(std::move(agents), std::move(weights));
}

}  // namespace groupfair
