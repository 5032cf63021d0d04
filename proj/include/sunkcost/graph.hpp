#pragma once

#include "sunkcost/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace sunkcost {

enum class CostModel { NodeCosts, EdgeCosts };
enum class TieBreak { ContinueOnTie, StopOnTie };

struct Node {
    std::string id;
    Rat cost;         // only nonzero under NodeCosts
    bool sink = false;  // non-target node with no outgoing edges; reaching it forces a stop
};

struct Edge {
    std::string from;
    std::string to;
    Rat prob;
    Rat cost;  // only nonzero under EdgeCosts
};

// A task graph: DAG, stochastic transitions, reward granted on arrival at target.
// Immutable by convention once validated; all operations are pure.
struct TaskGraph {
    std::vector<Node> nodes;
    std::vector<Edge> edges;
    std::string start;
    std::string target;
    Rat reward;
    CostModel cost_model = CostModel::NodeCosts;
};

struct Violation {
    std::string locus;    // offending node id, "from->to" edge, or field name
    std::string message;
};

struct ValidationResult {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

namespace detail {

inline int find_node(const TaskGraph& g, const std::string& id) {
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
        if (g.nodes[i].id == id) return static_cast<int>(i);
    return -1;
}

}  // namespace detail

inline ValidationResult validate(const TaskGraph& g) {
    ValidationResult res;
    auto flag = [&](std::string locus, std::string msg) {
        res.violations.push_back({std::move(locus), std::move(msg)});
    };

    const std::size_t n = g.nodes.size();
    std::map<std::string, int> index;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& nd = g.nodes[i];
        if (index.count(nd.id))
            flag(nd.id, "duplicate node id");
        else
            index[nd.id] = static_cast<int>(i);
        if (nd.cost < 0) flag(nd.id, "negative node cost");
    }
    if (!index.count(g.start)) flag("start", "start node '" + g.start + "' not defined");
    if (!index.count(g.target)) flag("target", "target node '" + g.target + "' not defined");
    if (g.reward < 0) flag("reward", "negative reward");

    std::vector<std::vector<int>> out(n), in(n);
    std::map<std::pair<std::string, std::string>, int> seen_edge;
    for (const auto& e : g.edges) {
        std::string locus = e.from + "->" + e.to;
        auto fi = index.find(e.from);
        auto ti = index.find(e.to);
        if (fi == index.end()) { flag(locus, "edge from undefined node"); continue; }
        if (ti == index.end()) { flag(locus, "edge to undefined node"); continue; }
        if (seen_edge.count({e.from, e.to})) { flag(locus, "duplicate edge"); continue; }
        seen_edge[{e.from, e.to}] = 1;
        if (e.prob <= 0 || e.prob > 1) flag(locus, "edge probability outside (0, 1]");
        if (e.cost < 0) flag(locus, "negative edge cost");
        out[fi->second].push_back(ti->second);
        in[ti->second].push_back(fi->second);
        if (e.from == g.target) flag(locus, "target has outgoing edge");
    }

    // Cost model exclusivity.
    if (g.cost_model == CostModel::NodeCosts) {
        for (const auto& e : g.edges)
            if (e.cost != 0) flag(e.from + "->" + e.to, "edge cost nonzero under node-cost model");
    } else {
        for (const auto& nd : g.nodes)
            if (nd.cost != 0) flag(nd.id, "node cost nonzero under edge-cost model");
    }

    // Probability mass per node.
    for (std::size_t i = 0; i < n; ++i) {
        const auto& nd = g.nodes[i];
        if (nd.id == g.target) continue;
        if (out[i].empty()) {
            if (!nd.sink) flag(nd.id, "non-target node with no outgoing edges and no sink flag");
            continue;
        }
        if (nd.sink) flag(nd.id, "sink node has outgoing edges");
        Rat total = 0;
        for (const auto& e : g.edges)
            if (e.from == nd.id) total += e.prob;
        if (total != 1) flag(nd.id, "probabilities sum != 1 (" + rat_to_string(total) + ")");
    }
    if (index.count(g.target) && g.nodes[index[g.target]].sink)
        flag(g.target, "target must not carry a sink flag");
    if (index.count(g.target) && g.nodes[index[g.target]].cost != 0)
        flag(g.target, "target must carry no cost");

    // Acyclicity via Kahn's algorithm.
    {
        std::vector<int> indeg(n, 0);
        for (std::size_t i = 0; i < n; ++i)
            for (int w : out[i]) ++indeg[w];
        std::vector<int> queue;
        for (std::size_t i = 0; i < n; ++i)
            if (indeg[i] == 0) queue.push_back(static_cast<int>(i));
        std::size_t processed = 0;
        while (!queue.empty()) {
            int v = queue.back();
            queue.pop_back();
            ++processed;
            for (int w : out[v])
                if (--indeg[w] == 0) queue.push_back(w);
        }
        if (processed != n) flag("graph", "cycle in edge relation");
    }

    // Reachability from start, and of the target from every continuing node.
    if (index.count(g.start)) {
        std::vector<bool> seen(n, false);
        std::vector<int> stack{index[g.start]};
        seen[index[g.start]] = true;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int w : out[v])
                if (!seen[w]) { seen[w] = true; stack.push_back(w); }
        }
        for (std::size_t i = 0; i < n; ++i)
            if (!seen[i]) flag(g.nodes[i].id, "not reachable from start");
    }
    if (index.count(g.target)) {
        std::vector<bool> seen(n, false);
        std::vector<int> stack{index[g.target]};
        seen[index[g.target]] = true;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int w : in[v])
                if (!seen[w]) { seen[w] = true; stack.push_back(w); }
        }
        for (std::size_t i = 0; i < n; ++i)
            if (!seen[i] && !out[i].empty())
                flag(g.nodes[i].id, "target not reachable from this node");
    }

    return res;
}

/// Multiplies every cost and the reward by `factor`; probabilities unchanged.
inline TaskGraph scale(const TaskGraph& g, const Rat& factor) {
    if (factor <= 0) throw std::domain_error("scale factor must be positive");
    TaskGraph out = g;
    out.reward *= factor;
    for (auto& nd : out.nodes) nd.cost *= factor;
    for (auto& e : out.edges) e.cost *= factor;
    return out;
}

namespace detail {

// Index view of a validated graph used by the evaluators.
struct GraphIndex {
    const TaskGraph* g;
    std::map<std::string, int> id_to_idx;
    std::vector<std::vector<int>> out_edges;  // indices into g->edges
    int start_idx = -1;
    int target_idx = -1;

    explicit GraphIndex(const TaskGraph& graph) : g(&graph) {
        for (std::size_t i = 0; i < graph.nodes.size(); ++i)
            id_to_idx[graph.nodes[i].id] = static_cast<int>(i);
        out_edges.resize(graph.nodes.size());
        for (std::size_t e = 0; e < graph.edges.size(); ++e)
            out_edges[id_to_idx.at(graph.edges[e].from)].push_back(static_cast<int>(e));
        start_idx = id_to_idx.at(graph.start);
        target_idx = id_to_idx.at(graph.target);
    }

    bool is_target(int v) const { return v == target_idx; }
    bool is_sink(int v) const { return g->nodes[v].sink; }
    const Node& node(int v) const { return g->nodes[v]; }
    int edge_to(int e) const { return id_to_idx.at(g->edges[e].to); }
};

}  // namespace detail
}  // namespace sunkcost
