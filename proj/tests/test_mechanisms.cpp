#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "groupfair/mechanisms.hpp"
#include "groupfair/random.hpp"

using namespace groupfair;

namespace {

Instance singleton_groups(const std::vector<double>& locations, double weight) {
    std::vector<Agent> agents;
    std::vector<double> weights(locations.size(), weight);
    for (size_t i = 0; i < locations.size(); ++i) {
        agents.push_back({locations[i], {static_cast<int>(i)}});
    }
    return Instance(std::move(agents), std::move(weights));
}

Instance one_group(const std::vector<double>& locations) {
    std::vector<Agent> agents;
    for (double x : locations) agents.push_back({x, {0}});
    return Instance(std::move(agents), {1.0});
}

std::vector<Agent> shuffled(std::vector<Agent> agents, Rng& rng) {
    for (int i = static_cast<int>(agents.size()) - 1; i > 0; --i) {
        std::swap(agents[i], agents[rng.uniform_int(0, i)]);
    }
    return agents;
}

bool is_agent_location(const Instance& inst, double y) {
    for (int i = 0; i < inst.num_agents(); ++i) {
        if (inst.location(i) == y) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("side_counts splits membership at the probe point") {
    Instance two({{0.0, {0}}, {1.0, {1}}}, {1.0, 1.0});
    auto at0 = side_counts(two, 0.0);
    CHECK(at0.left == std::vector<int>{1, 0});
    CHECK(at0.right == std::vector<int>{0, 1});
    auto at1 = side_counts(two, 1.0);
    CHECK(at1.left == std::vector<int>{1, 1});
    CHECK(at1.right == std::vector<int>{0, 0});

    Instance overlap({{0.0, {0, 1}}, {2.0, {1}}}, {1.0, 1.0});
    auto mid = side_counts(overlap, 0.5);
    CHECK(mid.left == std::vector<int>{1, 1});
    CHECK(mid.right == std::vector<int>{0, 1});
}

TEST_CASE("balanced stops at the first location where left outweighs right") {
    CHECK(balanced(one_group({1.0, 4.0, 9.0})) == 4.0);
    CHECK(balanced(singleton_groups({0.0, 5.0, 7.0}, 1.0)) == 0.0);
    Instance lopsided({{0.0, {0}}, {1.0, {1}}, {2.0, {1}}}, {3.0, 1.0});
    CHECK(balanced(lopsided) == 0.0);
}

TEST_CASE("major_phantom takes the median of members plus phantoms") {
    Instance lone({{0.3, {0}}, {0.9, {1}}}, {5.0, 1.0});
    CHECK(major_phantom(lone, PhantomConfig{}) == 0.3);

    Instance pair({{0.0, {0}}, {1.0, {0}}, {0.5, {1}}}, {2.0, 1.0});
    CHECK(major_phantom(pair, PhantomConfig{{0.25}}) == 0.25);
    CHECK(major_phantom(pair, PhantomConfig{{5.0}}) == 1.0);

    CHECK_THROWS_AS(major_phantom(pair, PhantomConfig{{0.1, 0.2}}),
                    std::invalid_argument);
}

TEST_CASE("phantoms beyond the member span clamp to the extreme members") {
    Instance inst({{0.2, {0}}, {0.6, {0}}, {0.9, {0}}, {0.5, {1}}},
                  {3.0, 1.0});
    CHECK(major_phantom(inst, PhantomConfig{{-10.0, -9.0}}) == 0.2);
    CHECK(major_phantom(inst, PhantomConfig{{9.0, 10.0}}) == 0.9);
}

TEST_CASE("med takes the left median location") {
    CHECK(med(one_group({0.0, 1.0, 2.0, 3.0})) == 1.0);
    CHECK(med(one_group({0.0, 1.0, 2.0})) == 1.0);
    CHECK(med(one_group({7.0})) == 7.0);
}

TEST_CASE("leftmost takes the minimum location") {
    CHECK(leftmost(one_group({0.2, 0.9})) == 0.2);
    CHECK(leftmost(one_group({-3.0})) == -3.0);
    CHECK(leftmost(one_group({0.0, 0.0, 1.0})) == 0.0);
}

TEST_CASE("major takes the largest group's left median, smallest id on ties") {
    Instance tie({{0.0, {0}}, {0.8, {0}}, {1.0, {1}}, {1.0, {1}}}, {1.0, 2.0});
    CHECK(major(tie) == 0.0);

    Instance odd({{2.0, {0}}, {5.0, {0}}, {9.0, {0}}, {1.0, {1}}}, {1.0, 1.0});
    CHECK(major(odd) == 5.0);

    Instance even({{1.0, {0}}, {3.0, {0}}, {2.0, {1}}}, {1.0, 1.0});
    CHECK(major(even) == 1.0);
}

TEST_CASE("endpoint brackets the agents") {
    Instance spread({{0.0, {0}}, {0.5, {1}}, {0.5, {1}}, {1.0, {1}}},
                    {1.0, 2.0});
    CHECK(endpoint(spread) == Placement{0.0, 1.0});
    CHECK(endpoint(one_group({3.0})) == Placement{3.0, 3.0});
    CHECK(endpoint(one_group({-1.0, 4.0})) == Placement{-1.0, 4.0});
}

TEST_CASE("dictatorial serves the dictator and mirrors the farther side") {
    Instance paper_case(
        {{0.0, {0}}, {0.0, {1}}, {0.0, {1}}, {0.5, {1}}, {1.0, {1}}},
        {1.0, 2.0});
    CHECK(dictatorial(paper_case, 4) == Placement{0.0, 1.0});

    CHECK(dictatorial(one_group({0.0, 2.0}), 0) == Placement{0.0, 2.0});
    CHECK(dictatorial(one_group({4.0, 4.0, 4.0}), 1) == Placement{4.0, 4.0});

    CHECK_THROWS_AS(dictatorial(paper_case, 5), std::invalid_argument);
    CHECK_THROWS_AS(dictatorial(paper_case, -1), std::invalid_argument);
}

TEST_CASE("dictator cost is zero and facilities stay inside the mirror span") {
    Rng rng(23);
    InstanceDistribution dist;
    dist.n_max = 7;
    for (int trial = 0; trial < 300; ++trial) {
        const Instance inst = sample_instance(rng, dist);
        const int j = rng.uniform_int(0, inst.num_agents() - 1);
        const Placement placement = dictatorial(inst, j);
        CHECK(cost(placement, inst.location(j)) == 0.0);

        const double xj = inst.location(j);
        const double dl = xj - inst.min_location();
        const double dr = inst.max_location() - xj;
        const double lo = xj - std::max(dl, 2.0 * dr);
        const double hi = xj + std::max(dr, 2.0 * dl);
        CHECK(placement[0] >= lo - 1e-15);
        CHECK(placement[1] <= hi + 1e-15);
    }
}

TEST_CASE("three or more facilities are refused") {
    CHECK_NOTHROW(require_supported_facility_count(1));
    CHECK_NOTHROW(require_supported_facility_count(2));
    CHECK_THROWS_WITH_AS(require_supported_facility_count(3),
                         doctest::Contains("k>=3"), UnsupportedFacilityCount);
    CHECK_THROWS_AS(require_supported_facility_count(10),
                    UnsupportedFacilityCount);
    CHECK_THROWS_AS(require_supported_facility_count(0), std::invalid_argument);

    try {
        require_supported_facility_count(7);
        FAIL("expected a refusal");
    } catch (const UnsupportedFacilityCount& e) {
        CHECK(e.facility_count() == 7);
    }
}

TEST_CASE("mechanism spec strings parse and apply") {
    CHECK(parse_mechanism("balanced").kind == MechanismSpec::Kind::Balanced);
    CHECK(parse_mechanism("med").facility_count() == 1);
    CHECK(parse_mechanism("endpoint").facility_count() == 2);

    const auto dict = parse_mechanism("dictatorial:2");
    CHECK(dict.kind == MechanismSpec::Kind::Dictatorial);
    CHECK(dict.dictator == 2);
    CHECK(dict.name() == "dictatorial:2");

    const auto phantom = parse_mechanism("major-phantom:0.75,0.25");
    REQUIRE(phantom.phantoms.has_value());
    CHECK(phantom.phantoms->values == std::vector<double>{0.25, 0.75});
    CHECK(!parse_mechanism("major-phantom").phantoms.has_value());

    CHECK_THROWS_AS(parse_mechanism("unknown"), std::invalid_argument);
    CHECK_THROWS_AS(parse_mechanism("dictatorial"), std::invalid_argument);
    CHECK_THROWS_AS(parse_mechanism("dictatorial:-1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_mechanism("med:1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_mechanism("major-phantom:abc"), std::invalid_argument);

    Instance inst({{0.0, {0}}, {1.0, {0}}, {4.0, {0}}}, {1.0});
    CHECK(apply_mechanism(parse_mechanism("med"), inst) == Placement{1.0});
    CHECK(apply_mechanism(parse_mechanism("midpoint-extremes"), inst) ==
          Placement{2.0});
    CHECK_THROWS_AS(
        apply_mechanism(parse_mechanism("major-phantom:1,2,3"), inst),
        std::invalid_argument);
    CHECK_THROWS_AS(apply_mechanism(parse_mechanism("dictatorial:9"), inst),
                    std::invalid_argument);
}

TEST_CASE("single-facility outputs are agent locations or phantom values") {
    Rng rng(29);
    InstanceDistribution dist;
    dist.n_max = 8;
    dist.m_max = 4;
    for (int trial = 0; trial < 300; ++trial) {
        const Instance inst = sample_instance(rng, dist);
        CHECK(is_agent_location(inst, balanced(inst)));
        CHECK(is_agent_location(inst, med(inst)));
        CHECK(is_agent_location(inst, leftmost(inst)));
        CHECK(is_agent_location(inst, major(inst)));
        const double mp = major_phantom(inst, zero_phantoms(inst));
        CHECK((is_agent_location(inst, mp) || mp == 0.0));
    }
}

TEST_CASE("balanced coincides with med when there is a single group") {
    Rng rng(31);
    InstanceDistribution dist;
    dist.m_min = dist.m_max = 1;
    dist.n_max = 9;
    for (int trial = 0; trial < 200; ++trial) {
        const Instance inst = sample_instance(rng, dist);
        CHECK(balanced(inst) == med(inst));
    }
}

TEST_CASE("balanced coincides with leftmost for equal-weight singleton groups") {
    Rng rng(37);
    const std::vector<double> weight_choices{1.0, 2.0, 5.0};
    for (int trial = 0; trial < 200; ++trial) {
        const int n = rng.uniform_int(1, 7);
        std::vector<double> locations;
        for (int i = 0; i < n; ++i) locations.push_back(rng.uniform_real(0.0, 1.0));
        const Instance inst = singleton_groups(locations, rng.pick(weight_choices));
        CHECK(balanced(inst) == leftmost(inst));
    }
}

TEST_CASE("mechanism outputs ignore the order agents are listed in") {
    Rng rng(41);
    InstanceDistribution dist;
    dist.n_max = 7;
    for (int trial = 0; trial < 200; ++trial) {
        const Instance inst = sample_instance(rng, dist);
        const Instance permuted(shuffled(inst.agents(), rng), inst.weights());
        CHECK(balanced(inst) == balanced(permuted));
        CHECK(med(inst) == med(permuted));
        CHECK(leftmost(inst) == leftmost(permuted));
        CHECK(major(inst) == major(permuted));
        CHECK(major_phantom(inst, zero_phantoms(inst)) ==
              major_phantom(permuted, zero_phantoms(permuted)));
        CHECK(endpoint(inst) == endpoint(permuted));
    }
}

TEST_CASE("moving an agent rightward never moves balanced leftward") {
    Rng rng(43);
    InstanceDistribution dist;
    dist.n_max = 7;
    for (int trial = 0; trial < 300; ++trial) {
        const Instance inst = sample_instance(rng, dist);
        const int i = rng.uniform_int(0, inst.num_agents() - 1);
        const double moved_to =
            inst.location(i) + rng.uniform_real(0.0, 1.0);
        CHECK(balanced(inst.with_agent_location(i, moved_to)) >=
              balanced(inst));
    }
}
