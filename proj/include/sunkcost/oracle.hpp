#pragma once

#include "sunkcost/agents.hpp"
#include "sunkcost/graph.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace sunkcost {

struct PathOutcome {
    std::vector<std::string> path;  // node sequence from start, including the stop node
    Rat prob;
    Rat total_cost;
    bool reached_target;
};

struct MonteCarloEstimate {
    Rat mean;           // exact sample mean
    double std_error;   // sample standard error (display only)
    std::uint64_t trials;
};

namespace oracle_detail {

// Self-contained re-derivation of each agent's decision rule, kept apart from
// the production evaluator so the two can cross-check each other.
class OraclePolicy {
  public:
    OraclePolicy(const TaskGraph& g, const AgentKind& agent)
        : ix_(g), agent_(agent) {}

    bool continues(int v, const Rat& k) {
        switch (agent_.kind) {
            case Kind::Optimal: return meets(optimal_cv(v), 0);
            case Kind::Naive: return meets(optimal_cv(v), -agent_.lambda * k);
            case Kind::Sophisticated: return meets(soph_cv(v, k), -agent_.lambda * k);
            case Kind::Hybrid:
                return optimal_reaches_and_continues(v) ? true
                                                        : meets(soph_cv(v, k), -agent_.lambda * k);
        }
        return false;
    }

    const detail::GraphIndex& index() const { return ix_; }

  private:
    bool meets(const Rat& cv, const Rat& threshold) const {
        return agent_.tie == TieBreak::ContinueOnTie ? cv >= threshold : cv > threshold;
    }

    template <typename ValueFn>
    Rat one_step(int v, const Rat& k, ValueFn&& value) {
        Rat cv = 0;
        if (ix_.g->cost_model == CostModel::NodeCosts) {
            cv = -ix_.node(v).cost;
            for (int e : ix_.out_edges[v])
                cv += ix_.g->edges[e].prob * value(ix_.edge_to(e), k + ix_.node(v).cost);
        } else {
            for (int e : ix_.out_edges[v]) {
                const Edge& ed = ix_.g->edges[e];
                cv += ed.prob * (value(ix_.edge_to(e), k + ed.cost) - ed.cost);
            }
        }
        return cv;
    }

    Rat optimal_cv(int v) {
        auto it = opt_cv_.find(v);
        if (it != opt_cv_.end()) return it->second;
        Rat cv = one_step(v, 0, [this](int w, const Rat&) { return optimal_value(w); });
        opt_cv_.emplace(v, cv);
        return cv;
    }

    Rat optimal_value(int v) {
        if (ix_.is_target(v)) return ix_.g->reward;
        if (ix_.is_sink(v)) return 0;
        Rat cv = optimal_cv(v);
        return meets(cv, 0) ? cv : Rat(0);
    }

    Rat soph_cv(int v, const Rat& k) {
        auto key = std::make_pair(v, k);
        auto it = soph_cv_.find(key);
        if (it != soph_cv_.end()) return it->second;
        Rat cv = one_step(v, k, [this](int w, const Rat& kk) { return soph_value(w, kk); });
        soph_cv_.emplace(key, cv);
        return cv;
    }

    Rat soph_value(int v, const Rat& k) {
        if (ix_.is_target(v)) return ix_.g->reward;
        if (ix_.is_sink(v)) return 0;
        Rat cv = soph_cv(v, k);
        return meets(cv, -agent_.lambda * k) ? cv : Rat(0);
    }

    bool optimal_reaches_and_continues(int v) {
        if (o_reach_.empty()) {
            o_reach_.assign(ix_.g->nodes.size(), false);
            std::vector<int> stack{ix_.start_idx};
            std::vector<bool> seen(ix_.g->nodes.size(), false);
            seen[ix_.start_idx] = true;
            while (!stack.empty()) {
                int u = stack.back();
                stack.pop_back();
                if (ix_.is_target(u) || ix_.is_sink(u) || !meets(optimal_cv(u), 0)) continue;
                o_reach_[u] = true;
                for (int e : ix_.out_edges[u]) {
                    int w = ix_.edge_to(e);
                    if (!seen[w]) { seen[w] = true; stack.push_back(w); }
                }
            }
        }
        return o_reach_[v];
    }

    detail::GraphIndex ix_;
    AgentKind agent_;
    std::map<int, Rat> opt_cv_;
    std::map<std::pair<int, Rat>, Rat> soph_cv_;
    std::vector<bool> o_reach_;
};

inline void enumerate_rec(OraclePolicy& policy, int v, const Rat& k, const Rat& prob,
                          std::vector<std::string>& path, std::vector<PathOutcome>& out) {
    const auto& ix = policy.index();
    path.push_back(ix.node(v).id);
    if (ix.is_target(v)) {
        out.push_back({path, prob, k, true});
    } else if (ix.is_sink(v) || !policy.continues(v, k)) {
        out.push_back({path, prob, k, false});
    } else if (ix.g->cost_model == CostModel::NodeCosts) {
        Rat kk = k + ix.node(v).cost;
        for (int e : ix.out_edges[v])
            enumerate_rec(policy, ix.edge_to(e), kk, prob * ix.g->edges[e].prob, path, out);
    } else {
        for (int e : ix.out_edges[v]) {
            const Edge& ed = ix.g->edges[e];
            enumerate_rec(policy, ix.edge_to(e), k + ed.cost, prob * ed.prob, path, out);
        }
    }
    path.pop_back();
}

}  // namespace oracle_detail

/// Every realized trajectory of the agent's policy, with exact probabilities.
/// The sunk cost along a path doubles as its total cost; a node where the
/// agent stops appears in the path but its cost is not paid.
inline std::vector<PathOutcome> enumerate_outcomes(const TaskGraph& g, const AgentKind& agent,
                                                   std::size_t node_guard = 20) {
    if (g.nodes.size() > node_guard)
        throw std::domain_error("enumeration guard exceeded: " + std::to_string(g.nodes.size()) +
                                " nodes");
    oracle_detail::OraclePolicy policy(g, agent);
    std::vector<PathOutcome> out;
    std::vector<std::string> path;
    oracle_detail::enumerate_rec(policy, policy.index().start_idx, 0, 1, path, out);
    return out;
}

/// Expected payoff implied by an outcome list.
inline Rat outcomes_payoff(const std::vector<PathOutcome>& outcomes, const Rat& reward) {
    Rat total = 0;
    for (const auto& o : outcomes)
        total += o.prob * ((o.reached_target ? reward : Rat(0)) - o.total_cost);
    return total;
}

/// Seeded trajectory simulation. Transitions are sampled by comparing a raw
/// 64-bit mt19937_64 draw against exact cumulative probabilities scaled by
/// 2^64, so runs are reproducible bit-for-bit across platforms.
inline MonteCarloEstimate monte_carlo(const TaskGraph& g, const AgentKind& agent,
                                      std::uint64_t trials, std::uint64_t seed) {
    if (trials < 1) throw std::domain_error("trials must be >= 1");
    oracle_detail::OraclePolicy policy(g, agent);
    const auto& ix = policy.index();
    std::mt19937_64 rng(seed);
    const Int two64 = Int(1) << 64;

    std::map<Rat, std::uint64_t> payoff_counts;
    for (std::uint64_t t = 0; t < trials; ++t) {
        int v = ix.start_idx;
        Rat cost = 0;
        bool reached = false;
        while (true) {
            if (ix.is_target(v)) { reached = true; break; }
            if (ix.is_sink(v) || !policy.continues(v, cost)) break;
            Int draw = rng();
            if (ix.g->cost_model == CostModel::NodeCosts) cost += ix.node(v).cost;
            Rat cum = 0;
            int next = -1;
            Rat next_edge_cost = 0;
            for (int e : ix.out_edges[v]) {
                const Edge& ed = ix.g->edges[e];
                cum += ed.prob;
                // draw/2^64 < cum  <=>  draw * den < num * 2^64
                if (draw * denominator(cum) < numerator(cum) * two64) {
                    next = ix.edge_to(e);
                    next_edge_cost = ed.cost;
                    break;
                }
            }
            if (next < 0) {  // total mass 1; only reachable through rounding at the last edge
                next = ix.edge_to(ix.out_edges[v].back());
                next_edge_cost = ix.g->edges[ix.out_edges[v].back()].cost;
            }
            if (ix.g->cost_model == CostModel::EdgeCosts) cost += next_edge_cost;
            v = next;
        }
        Rat payoff = (reached ? g.reward : Rat(0)) - cost;
        ++payoff_counts[payoff];
    }

    Rat sum = 0;
    for (const auto& [p, c] : payoff_counts) sum += p * Int(c);
    Rat mean = sum / Int(trials);
    Rat var_sum = 0;
    for (const auto& [p, c] : payoff_counts) {
        Rat d = p - mean;
        var_sum += d * d * Int(c);
    }
    double std_error = 0.0;
    if (trials > 1) {
        double variance = static_cast<double>(var_sum) / static_cast<double>(trials - 1);
        std_error = std::sqrt(variance / static_cast<double>(trials));
    }
    return {mean, std_error, trials};
}

}  // namespace sunkcost
