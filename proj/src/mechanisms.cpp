#include "groupfair/mechanisms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace groupfair {

SideCounts side_counts(const Instance& inst, double y) {
    SideCounts counts;
    counts.left.assign(inst.num_groups(), 0);
    counts.right.assign(inst.num_groups(), 0);
    for (int i = 0; i < inst.num_agents(); ++i) {
        auto& side = inst.location(i) <= y ? counts.left : counts.right;
        for (int g : inst.agent(i).groups) ++side[g];
    }
    return counts;
}

double balanced(const Instance& inst) {
    const int m = inst.num_groups();
    std::vector<int> left(m, 0), right(m, 0);
    for (int j = 0; j < m; ++j) right[j] = inst.group_size(j);

    int i = 0;
    const int n = inst.num_agents();
    while (i < n) {
        const double y = inst.location(i);
        // All agents tied at y move to the left tally before y is tested.
        while (i < n && inst.location(i) == y) {
            for (int g : inst.agent(i).groups) {
                ++left[g];
                --right[g];
            }
            ++i;
        }
        double max_left = 0.0, max_right = 0.0;
        for (int j = 0; j < m; ++j) {
            max_left = std::max(max_left, inst.weight(j) * left[j]);
            max_right = std::max(max_right, inst.weight(j) * right[j]);
        }
        if (max_left >= max_right) return y;
    }
    return inst.max_location();  // unreachable: at x_n the right tally is zero
}

PhantomConfig zero_phantoms(const Instance& inst) {
    const int g = inst.group_size(inst.max_weight_group());
    return PhantomConfig{std::vector<double>(g - 1, 0.0)};
}

double major_phantom(const Instance& inst, const PhantomConfig& phantoms) {
    const int heavy = inst.max_weight_group();
    const int g = inst.group_size(heavy);
    if (static_cast<int>(phantoms.values.size()) != g - 1) {
        throw std::invalid_argument(
            "major-phantom: need exactly " + std::to_string(g - 1) +
            " phantom values for a heaviest group of size " + std::to_string(g));
    }
    for (double v : phantoms.values) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("major-phantom: phantom values must be finite");
        }
    }

    std::vector<double> pool;
    pool.reserve(2 * g - 1);
    for (int i : inst.members(heavy)) pool.push_back(inst.location(i));
    pool.insert(pool.end(), phantoms.values.begin(), phantoms.values.end());
    std::sort(pool.begin(), pool.end());
    return pool[(pool.size() - 1) / 2];  // odd pool, unique median
}

double med(const Instance& inst) {
    return inst.location((inst.num_agents() - 1) / 2);
}

double leftmost(const Instance& inst) { return inst.min_location(); }

double major(const Instance& inst) {
    const auto& members = inst.members(inst.largest_group());
    return inst.location(members[(members.size() - 1) / 2]);
}

Placement endpoint(const Instance& inst) {
    return Placement{inst.min_location(), inst.max_location()};
}

Placement dictatorial(const Instance& inst, int dictator) {
    if (dictator < 0 || dictator >= inst.num_agents()) {
        throw std::invalid_argument("dictatorial: dictator index " +
                                    std::to_string(dictator) +
                                    " out of range for " +
                                    std::to_string(inst.num_agents()) + " agents");
    }
    const double xj = inst.location(dictator);
    const double dl = xj - inst.min_location();
    const double dr = inst.max_location() - xj;
    const double other =
        dl > dr ? xj - std::max(dl, 2.0 * dr) : xj + std::max(dr, 2.0 * dl);
    return Placement{xj, other};
}

UnsupportedFacilityCount::UnsupportedFacilityCount(int k)
    : std::runtime_error("unsupported: no strategyproof mechanism has a bounded "
                         "maximum-group-effect approximation for k>=3 facilities "
                         "(requested k=" + std::to_string(k) + ")"),
      k_(k) {}

void require_supported_facility_count(int k) {
    if (k < 1) throw std::invalid_argument("facility count must be at least 1");
    if (k >= 3) throw UnsupportedFacilityCount(k);
}

int MechanismSpec::facility_count() const {
    return kind == Kind::Endpoint || kind == Kind::Dictatorial ? 2 : 1;
}

std::string MechanismSpec::name() const {
    switch (kind) {
        case Kind::Balanced: return "balanced";
        case Kind::MajorPhantom: return "major-phantom";
        case Kind::Med: return "med";
        case Kind::Leftmost: return "leftmost";
        case Kind::Major: return "major";
        case Kind::Endpoint: return "endpoint";
        case Kind::Dictatorial: return "dictatorial:" + std::to_string(dictator);
        case Kind::MidpointExtremes: return "midpoint-extremes";
    }
    return "?";
}

namespace {

double parse_double(const std::string& text, const std::string& what) {
    size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument(what + ": expected a number, got '" + text + "'");
    }
    if (used != text.size()) {
        throw std::invalid_argument(what + ": expected a number, got '" + text + "'");
    }
    return value;
}

}  // namespace

MechanismSpec parse_mechanism(const std::string& text) {
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    const std::string arg =
        colon == std::string::npos ? "" : text.substr(colon + 1);

    MechanismSpec spec;
    if (head == "balanced") {
        spec.kind = MechanismSpec::Kind::Balanced;
    } else if (head == "major-phantom") {
        spec.kind = MechanismSpec::Kind::MajorPhantom;
        if (colon != std::string::npos) {
            PhantomConfig config;
            std::string rest = arg;
            while (!rest.empty()) {
                const auto comma = rest.find(',');
                config.values.push_back(parse_double(
                    rest.substr(0, comma), "major-phantom phantom value"));
                if (comma == std::string::npos) break;
                rest = rest.substr(comma + 1);
            }
            std::sort(config.values.begin(), config.values.end());
            spec.phantoms = std::move(config);
        }
    } else if (head == "med") {
        spec.kind = MechanismSpec::Kind::Med;
    } else if (head == "leftmost") {
        spec.kind = MechanismSpec::Kind::Leftmost;
    } else if (head == "major") {
        spec.kind = MechanismSpec::Kind::Major;
    } else if (head == "endpoint") {
        spec.kind = MechanismSpec::Kind::Endpoint;
    } else if (head == "dictatorial") {
        spec.kind = MechanismSpec::Kind::Dictatorial;
        if (colon == std::string::npos || arg.empty()) {
            throw std::invalid_argument(
                "dictatorial: needs an agent index, e.g. dictatorial:0");
        }
        const double idx = parse_double(arg, "dictatorial agent index");
        if (idx < 0 || idx != std::floor(idx)) {
            throw std::invalid_argument(
                "dictatorial: agent index must be a nonnegative integer");
        }
        spec.dictator = static_cast<int>(idx);
    } else if (head == "midpoint-extremes") {
        spec.kind = MechanismSpec::Kind::MidpointExtremes;
    } else {
        throw std::invalid_argument("unknown mechanism '" + head + "'");
    }

    if (colon != std::string::npos && head != "major-phantom" &&
        head != "dictatorial") {
        throw std::invalid_argument("mechanism '" + head + "' takes no argument");
    }
    return spec;
}

Placement apply_mechanism(const MechanismSpec& spec, const Instance& inst) {
    switch (spec.kind) {
        case MechanismSpec::Kind::Balanced:
            return Placement{balanced(inst)};
        case MechanismSpec::Kind::MajorPhantom:
            return Placement{major_phantom(
                inst, spec.phantoms ? *spec.phantoms : zero_phantoms(inst))};
        case MechanismSpec::Kind::Med:
            return Placement{med(inst)};
        case MechanismSpec::Kind::Leftmost:
            return Placement{leftmost(inst)};
        case MechanismSpec::Kind::Major:
            return Placement{major(inst)};
        case MechanismSpec::Kind::Endpoint:
            return endpoint(inst);
        case MechanismSpec::Kind::Dictatorial:
            return dictatorial(inst, spec.dictator);
        case MechanismSpec::Kind::MidpointExtremes:
            return Placement{(inst.min_location() + inst.max_location()) / 2.0};
    }
    throw std::logic_error("unhandled mechanism kind");
}

}  // namespace groupfair
