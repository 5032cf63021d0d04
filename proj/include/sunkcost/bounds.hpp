#pragma once

#include "sunkcost/agents.hpp"
#include "sunkcost/graph.hpp"
#include "sunkcost/oracle.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace sunkcost {

struct PayoffDecomposition {
    Rat p_success;          // p(S): probability the optimal agent reaches the target
    Rat exp_cost_success;   // E[C|S]
    Rat exp_cost_failure;   // E[C|S-bar]; 0 when p_success = 1
    Rat payoff;             // pi_o
};

enum class BoundId { CorHyb, LambdaPSR, LambdaOver1PlusLambda, ThreeNode, FanBound };

inline const char* bound_id_name(BoundId id) {
    switch (id) {
        case BoundId::CorHyb: return "cor-hyb";
        case BoundId::LambdaPSR: return "lambda-ps-r";
        case BoundId::LambdaOver1PlusLambda: return "lambda-over-1-plus-lambda";
        case BoundId::ThreeNode: return "three-node";
        case BoundId::FanBound: return "fan-bound";
    }
    return "?";
}

struct BoundReport {
    BoundId bound_id;
    Rat lhs;
    Rat rhs;
    bool holds;  // lhs >= rhs
    std::string graph_ref;
    Rat lambda;
};

/// Success/failure-partitioned dynamic program over the optimal policy.
inline PayoffDecomposition decompose_optimal(const TaskGraph& g) {
    detail::Evaluator ev(g, 0, TieBreak::ContinueOnTie);
    const auto& ix = ev.index();
    const std::size_t n = g.nodes.size();

    // s(v): success prob; cs(v): E[cost * 1_S]; cf(v): E[cost * 1_S-bar].
    std::vector<Rat> s(n), cs(n), cf(n);
    std::vector<bool> done(n, false);
    auto solve = [&](auto&& self, int v) -> void {
        if (done[v]) return;
        done[v] = true;
        if (ix.is_target(v)) { s[v] = 1; return; }
        if (ix.is_sink(v) || !ev.optimal_decision(v)) return;  // stop: zero onward cost
        for (int e : ix.out_edges[v]) self(self, ix.edge_to(e));
        if (g.cost_model == CostModel::NodeCosts) {
            const Rat& c = ix.node(v).cost;
            for (int e : ix.out_edges[v]) {
                const Edge& ed = g.edges[e];
                int w = ix.edge_to(e);
                s[v] += ed.prob * s[w];
                cs[v] += ed.prob * (c * s[w] + cs[w]);
                cf[v] += ed.prob * (c * (1 - s[w]) + cf[w]);
            }
        } else {
            for (int e : ix.out_edges[v]) {
                const Edge& ed = g.edges[e];
                int w = ix.edge_to(e);
                s[v] += ed.prob * s[w];
                cs[v] += ed.prob * (ed.cost * s[w] + cs[w]);
                cf[v] += ed.prob * (ed.cost * (1 - s[w]) + cf[w]);
            }
        }
    };
    solve(solve, ix.start_idx);

    PayoffDecomposition d;
    d.p_success = s[ix.start_idx];
    d.exp_cost_success = d.p_success == 0 ? Rat(0) : Rat(cs[ix.start_idx] / d.p_success);
    Rat p_fail = 1 - d.p_success;
    d.exp_cost_failure = p_fail == 0 ? Rat(0) : Rat(cf[ix.start_idx] / p_fail);
    d.payoff = d.p_success * g.reward - cs[ix.start_idx] - cf[ix.start_idx];
    return d;
}

/// Same decomposition straight from the path-enumeration oracle.
inline PayoffDecomposition decompose_optimal_enum(const TaskGraph& g) {
    auto outcomes = enumerate_outcomes(g, AgentKind{Kind::Optimal, 0, TieBreak::ContinueOnTie});
    PayoffDecomposition d;
    Rat cost_success = 0, cost_failure = 0;
    for (const auto& o : outcomes) {
        if (o.reached_target) {
            d.p_success += o.prob;
            cost_success += o.prob * o.total_cost;
        } else {
            cost_failure += o.prob * o.total_cost;
        }
    }
    d.exp_cost_success = d.p_success == 0 ? Rat(0) : Rat(cost_success / d.p_success);
    Rat p_fail = 1 - d.p_success;
    d.exp_cost_failure = p_fail == 0 ? Rat(0) : Rat(cost_failure / p_fail);
    d.payoff = d.p_success * g.reward - cost_success - cost_failure;
    return d;
}

// pi_s >= pi_o - lambda * (1 - p(S)) * E[C|S-bar]
inline BoundReport check_cor_hyb(const TaskGraph& g, const Rat& lambda,
                                 const std::string& graph_ref = "") {
    auto d = decompose_optimal(g);
    Rat lhs = eval_sophisticated(g, lambda).payoff;
    Rat rhs = d.payoff - lambda * (1 - d.p_success) * d.exp_cost_failure;
    return {BoundId::CorHyb, lhs, rhs, lhs >= rhs, graph_ref, lambda};
}

// pi_s >= pi_o - lambda * p(S) * R
inline BoundReport check_lambda_ps_r(const TaskGraph& g, const Rat& lambda,
                                     const std::string& graph_ref = "") {
    auto d = decompose_optimal(g);
    Rat lhs = eval_sophisticated(g, lambda).payoff;
    Rat rhs = d.payoff - lambda * d.p_success * g.reward;
    return {BoundId::LambdaPSR, lhs, rhs, lhs >= rhs, graph_ref, lambda};
}

// pi_s >= pi_o - lambda/(1+lambda) * R
inline BoundReport check_closed_form(const TaskGraph& g, const Rat& lambda,
                                     const std::string& graph_ref = "") {
    Rat lhs = eval_sophisticated(g, lambda).payoff;
    Rat rhs = eval_optimal(g).payoff - lambda / (1 + lambda) * g.reward;
    return {BoundId::LambdaOver1PlusLambda, lhs, rhs, lhs >= rhs, graph_ref, lambda};
}

/// (2 + lambda - 2*sqrt(1+lambda)) / lambda * reward, with sqrt rounded down
/// so the value over-estimates the true gap term.
inline Rat three_node_gap_upper(const Rat& lambda, const Rat& reward, const Rat& precision) {
    Rat root = rat_sqrt_lower(1 + lambda, precision);
    return (2 + lambda - 2 * root) / lambda * reward;
}

/// Worst-case 3-node instance: s with cost C branches to the target with
/// probability p or to an interior node v whose cost R + lambda*C makes the
/// optimal agent stop and the sophisticated agent continue on an exact tie.
/// Irrational optimum values are snapped to rationals within `precision`,
/// rounded so both decisions survive: C rounds down (C <= C*), and p is set
/// to C(1+lambda)/(R+lambda*C) exactly, which pins the sophisticated agent's
/// traversal value to 0.
inline TaskGraph build_three_node_tight(const Rat& lambda, const Rat& reward,
                                        const Rat& precision) {
    if (lambda <= 0) throw std::domain_error("lambda must be positive");
    if (precision <= 0) throw std::domain_error("precision must be positive");
    Rat root = rat_sqrt_lower(1 + lambda, precision);
    Rat c = reward / lambda * (root - 1);
    Rat p = c * (1 + lambda) / (reward + lambda * c);
    TaskGraph g;
    g.reward = reward;
    g.start = "s";
    g.target = "t";
    g.cost_model = CostModel::NodeCosts;
    g.nodes = {{"s", c, false}, {"t", 0, false}, {"v", reward + lambda * c, false}};
    g.edges = {{"s", "t", p, 0}, {"s", "v", 1 - p, 0}, {"v", "t", 1, 0}};
    return g;
}

inline BoundReport check_three_node_bound(const TaskGraph& g, const Rat& lambda,
                                          const Rat& precision = Rat(1, Int("1000000000000")),
                                          const std::string& graph_ref = "") {
    if (g.nodes.size() != 3)
        throw std::domain_error("three-node bound needs exactly 3 nodes, got " +
                                std::to_string(g.nodes.size()));
    if (lambda <= 0) throw std::domain_error("lambda must be positive");
    Rat lhs = eval_sophisticated(g, lambda).payoff;
    Rat rhs = eval_optimal(g).payoff - three_node_gap_upper(lambda, g.reward, precision);
    return {BoundId::ThreeNode, lhs, rhs, lhs >= rhs, graph_ref, lambda};
}

/// Edge-cost instance with pi_s = 0 and pi_o = lambda/(1+lambda) - epsilon
/// exactly (R = 1): the sophisticated agent's traversal value is -epsilon, so
/// it never starts, while the optimal agent risks the epsilon branch.
inline TaskGraph build_edge_cost_tight(const Rat& lambda, const Rat& epsilon) {
    if (lambda <= 0) throw std::domain_error("lambda must be positive");
    if (epsilon <= 0 || epsilon >= 1) throw std::domain_error("epsilon must be in (0, 1)");
    Rat branch_cost = 1 / ((1 + lambda) * epsilon);
    TaskGraph g;
    g.reward = 1;
    g.start = "s";
    g.target = "t";
    g.cost_model = CostModel::EdgeCosts;
    g.nodes = {{"s", 0, false}, {"t", 0, false}, {"v", 0, false}};
    g.edges = {{"s", "v", epsilon, branch_cost},
               {"s", "t", 1 - epsilon, 0},
               {"v", "t", 1, 1 + lambda * branch_cost}};
    return g;
}

}  // namespace sunkcost
