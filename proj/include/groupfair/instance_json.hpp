#pragma once

#include <stdexcept>
#include <string>

#include "groupfair/instance.hpp"

namespace groupfair {

// Raised when instance JSON is malformed or fails validation. The message
// lists every problem, one per line, with JSON paths where applicable.
class InstanceParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parses {"weights": [..], "agents": [{"x": .., "groups": [..]}, ..]} and
// validates it. Group ids are 0-based.
Instance parse_instance_json(const std::string& text);

// Serializes in the same schema, agents in canonical (sorted) order.
std::string instance_to_json(const Instance& inst, int indent = 2);

}  // namespace groupfair
