#include "groupfair/instance_json.hpp"

#include <sstream>

#include "json.hpp"

namespace groupfair {

namespace {

using nlohmann::json;

double number_at(const json& node, const std::string& path,
                 std::vector<std::string>& errors) {
    if (!node.is_number()) {
        errors.push_back(path + ": expected a number");
        return 0.0;
    }
    return node.get<double>();
}

}  // namespace

Instance parse_instance_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InstanceParseError(std::string("instance JSON: ") + e.what());
    }

    std::vector<std::string> errors;
    std::vector<double> weights;
    std::vector<Agent> agents;

    if (!doc.is_object()) {
        throw InstanceParseError("instance JSON: top level must be an object");
    }

    if (!doc.contains("weights") || !doc["weights"].is_array()) {
        errors.push_back("weights: expected an array of numbers");
    } else {
        int j = 0;
        for (const auto& w : doc["weights"]) {
            weights.push_back(
                number_at(w, "weights[" + std::to_string(j) + "]", errors));
            ++j;
        }
    }

    if (!doc.contains("agents") || !doc["agents"].is_array()) {
        errors.push_back("agents: expected an array of objects");
    } else {
        int i = 0;
        for (const auto& node : doc["agents"]) {
            const std::string where = "agents[" + std::to_string(i) + "]";
            Agent agent;
            if (!node.is_object()) {
                errors.push_back(where + ": expected an object");
            } else {
                if (!node.contains("x")) {
                    errors.push_back(where + ".x: missing");
                } else {
                    agent.location = number_at(node["x"], where + ".x", errors);
                }
                if (!node.contains("groups") || !node["groups"].is_array()) {
                    errors.push_back(where + ".groups: expected an array of group ids");
                } else {
                    for (const auto& g : node["groups"]) {
                        if (!g.is_number_integer()) {
                            errors.push_back(where + ".groups: expected integer group ids");
                        } else {
                            agent.groups.push_back(g.get<int>());
                        }
                    }
                }
            }
            agents.push_back(std::move(agent));
            ++i;
        }
    }

    if (errors.empty()) {
        for (auto& e : validate(agents, weights)) errors.push_back(std::move(e));
    }
    if (!errors.empty()) {
        std::ostringstream out;
        out << "instance JSON invalid:";
        for (const auto& e : errors) out << "\n  " << e;
        throw InstanceParseError(out.str());
    }
    return Instance(std::move(agents), std::move(weights));
}

std::string instance_to_json(const Instance& inst, int indent) {
    json doc;
    doc["weights"] = inst.weights();
    doc["agents"] = json::array();
    for (const auto& a : inst.agents()) {
        doc["agents"].push_back({{"x", a.location}, {"groups", a.groups}});
    }
    return doc.dump(indent);
}

}  // namespace groupfair
