#pragma once

// Shared instance builders for the test suite.

#include "sunkcost/graph.hpp"

namespace sunkcost::testing {

// Four-node motivating instance: s branches to the target or to u; u branches
// to the target or to a dead end. Scaled by w, reward 10w.
inline TaskGraph scb_graph(const Rat& w = 1) {
    TaskGraph g;
    g.reward = 10 * w;
    g.start = "s";
    g.target = "t";
    g.cost_model = CostModel::NodeCosts;
    g.nodes = {{"s", 4 * w, false}, {"t", 0, false}, {"u", 7 * w, false}, {"v", 0, true}};
    g.edges = {{"s", "t", {1, 2}, 0},
               {"s", "u", {1, 2}, 0},
               {"u", "t", {1, 2}, 0},
               {"u", "v", {1, 2}, 0}};
    return g;
}

}  // namespace sunkcost::testing
