#pragma once

#include <optional>
#include <string>
#include <vector>

#include "groupfair/evaluate.hpp"
#include "groupfair/instance.hpp"

namespace groupfair {

// Per-group tallies of agents at or left of a point (left) and strictly
// right of it (right).
struct SideCounts {
    std::vector<int> left;
    std::vector<int> right;
};

SideCounts side_counts(const Instance& inst, double y);

// Smallest agent location y where the heaviest weighted left tally reaches
// the heaviest weighted right tally: max_j w_j*left_j(y) >= max_j w_j*right_j(y).
// The left side is nondecreasing and the right side nonincreasing in y, so
// the condition, once true, stays true; it always holds at the last agent.
double balanced(const Instance& inst);

// Fixed phantom locations mixed into the heaviest group's reports. Values
// must never depend on reported locations or strategyproofness is lost.
struct PhantomConfig {
    std::vector<double> values;
};

// One zero-valued phantom short of the heaviest group's size, the default
// for major_phantom.
PhantomConfig zero_phantoms(const Instance& inst);

// Median of the heaviest group's member locations pooled with |G|-1 phantom
// values (pool size 2|G|-1, so the median is unique).
double major_phantom(const Instance& inst, const PhantomConfig& phantoms);

// Left median agent location: x_ceil(n/2) in 1-based sorted order.
double med(const Instance& inst);

double leftmost(const Instance& inst);

// Left median of the largest group's member locations; group size ties break
// toward the smallest group id.
double major(const Instance& inst);

// Facilities at the leftmost and rightmost agent locations.
Placement endpoint(const Instance& inst);

// One facility at the dictator's location x_j. With d_l/d_r the distances to
// the extreme agents, the second facility goes opposite the dictator's nearer
// side: x_j - max(d_l, 2*d_r) if d_l > d_r, else x_j + max(d_r, 2*d_l).
Placement dictatorial(const Instance& inst, int dictator);

// Raised for any request involving three or more facilities, where no
// mechanism with a bounded approximation of the maximum group effect can be
// strategyproof.
class UnsupportedFacilityCount : public std::runtime_error {
public:
    explicit UnsupportedFacilityCount(int k);

    int facility_count() const { return k_; }

private:
    int k_;
};

// Throws UnsupportedFacilityCount unless k is 1 or 2.
void require_supported_facility_count(int k);

// A mechanism selection as given on the command line, e.g. "balanced",
// "major-phantom:0.25,0.75", "dictatorial:2", "endpoint".
struct MechanismSpec {
    enum class Kind {
        Balanced,
        MajorPhantom,
        Med,
        Leftmost,
        Major,
        Endpoint,
        Dictatorial,
        // Deliberately manipulable single-facility rule, (x_min + x_max)/2.
        // Exists so strategyproofness checkers can prove they catch cheats.
        MidpointExtremes,
    };

    Kind kind = Kind::Balanced;
    std::optional<PhantomConfig> phantoms;  // MajorPhantom only; default zeros
    int dictator = 0;                       // Dictatorial only

    int facility_count() const;
    std::string name() const;
};

// Parses a spec string; throws std::invalid_argument on unknown names or
// malformed arguments.
MechanismSpec parse_mechanism(const std::string& text);

// Runs the mechanism. Throws std::invalid_argument if a dictator index is out
// of range or an explicit phantom count does not fit the instance.
Placement apply_mechanism(const MechanismSpec& spec, const Instance& inst);

}  // namespace groupfair
