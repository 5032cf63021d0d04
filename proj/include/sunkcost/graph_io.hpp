#pragma once

#include "sunkcost/graph.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <string>

namespace sunkcost {

// On-disk format: UTF-8 JSON, rationals as "p/q" or integer strings.
// Canonical form: key order (reward, start, target, cost_model, nodes, edges),
// nodes sorted by id, edges sorted by (from, to), rationals reduced.

namespace detail {

inline Rat json_rat(const nlohmann::ordered_json& j, const std::string& locus) {
    try {
        if (j.is_string()) return parse_rat(j.get<std::string>());
        if (j.is_number_integer()) return Rat(j.get<long long>());
    } catch (const ParseError& e) {
        throw ParseError(locus + ": " + e.what());
    }
    throw ParseError(locus + ": expected rational string or integer");
}

}  // namespace detail

inline TaskGraph parse_graph(const std::string& text) {
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    auto require = [&](const char* field) -> const nlohmann::ordered_json& {
        if (!j.contains(field)) throw ParseError(std::string("missing field '") + field + "'");
        return j.at(field);
    };

    TaskGraph g;
    g.reward = detail::json_rat(require("reward"), "reward");
    g.start = require("start").get<std::string>();
    g.target = require("target").get<std::string>();
    std::string model = require("cost_model").get<std::string>();
    if (model == "node")
        g.cost_model = CostModel::NodeCosts;
    else if (model == "edge")
        g.cost_model = CostModel::EdgeCosts;
    else
        throw ParseError("cost_model: expected \"node\" or \"edge\", got \"" + model + "\"");

    for (const auto& nj : require("nodes")) {
        Node nd;
        if (!nj.contains("id")) throw ParseError("nodes[]: missing 'id'");
        nd.id = nj.at("id").get<std::string>();
        nd.cost = nj.contains("cost") ? detail::json_rat(nj.at("cost"), "node " + nd.id + " cost") : Rat(0);
        nd.sink = nj.value("sink", false);
        g.nodes.push_back(std::move(nd));
    }
    for (const auto& ej : require("edges")) {
        Edge e;
        if (!ej.contains("from") || !ej.contains("to"))
            throw ParseError("edges[]: missing 'from' or 'to'");
        e.from = ej.at("from").get<std::string>();
        e.to = ej.at("to").get<std::string>();
        std::string locus = "edge " + e.from + "->" + e.to;
        if (!ej.contains("prob")) throw ParseError(locus + ": missing 'prob'");
        e.prob = detail::json_rat(ej.at("prob"), locus + " prob");
        e.cost = ej.contains("cost") ? detail::json_rat(ej.at("cost"), locus + " cost") : Rat(0);
        g.edges.push_back(std::move(e));
    }
    return g;
}

inline std::string serialize_graph(const TaskGraph& g) {
    TaskGraph c = g;
    std::sort(c.nodes.begin(), c.nodes.end(),
              [](const Node& a, const Node& b) { return a.id < b.id; });
    std::sort(c.edges.begin(), c.edges.end(), [](const Edge& a, const Edge& b) {
        return std::tie(a.from, a.to) < std::tie(b.from, b.to);
    });

    nlohmann::ordered_json j;
    j["reward"] = rat_to_string(c.reward);
    j["start"] = c.start;
    j["target"] = c.target;
    j["cost_model"] = c.cost_model == CostModel::NodeCosts ? "node" : "edge";
    j["nodes"] = nlohmann::ordered_json::array();
    for (const auto& nd : c.nodes) {
        nlohmann::ordered_json nj;
        nj["id"] = nd.id;
        nj["cost"] = rat_to_string(nd.cost);
        if (nd.sink) nj["sink"] = true;
        j["nodes"].push_back(std::move(nj));
    }
    j["edges"] = nlohmann::ordered_json::array();
    for (const auto& e : c.edges) {
        nlohmann::ordered_json ej;
        ej["from"] = e.from;
        ej["to"] = e.to;
        ej["prob"] = rat_to_string(e.prob);
        if (c.cost_model == CostModel::EdgeCosts) ej["cost"] = rat_to_string(e.cost);
        j["edges"].push_back(std::move(ej));
    }
    return j.dump(2) + "\n";
}

inline bool graphs_equal(const TaskGraph& a, const TaskGraph& b) {
    return serialize_graph(a) == serialize_graph(b);
}

}  // namespace sunkcost
