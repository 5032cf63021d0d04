#pragma once

#include "sunkcost/graph.hpp"

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace sunkcost {

enum class Kind { Optimal, Naive, Sophisticated, Hybrid };

struct AgentKind {
    Kind kind = Kind::Optimal;
    Rat lambda = 0;  // ignored for Optimal
    TieBreak tie = TieBreak::ContinueOnTie;
};

struct AgentEvaluation {
    Rat payoff;        // expected net payoff from start with sunk cost 0
    Rat reach_prob;    // probability of reaching the target under the agent's policy
    bool starts;       // whether the agent continues at the start node
    std::size_t states_visited;  // distinct (node, sunk-cost) memo entries
    Rat start_value;   // continuation value at (start, 0), even when the agent stops
};

struct StateCapExceeded : std::runtime_error {
    std::size_t states_visited;
    explicit StateCapExceeded(std::size_t n)
        : std::runtime_error("state cap exceeded after " + std::to_string(n) + " states"),
          states_visited(n) {}
};

struct EvalOptions {
    std::size_t state_cap = 1'000'000;
};

struct Decision {
    std::string node;
    Rat sunk;  // exact K; 0 for the sunk-cost-independent optimal agent
    bool cont;
};

namespace detail {

// Shared backward-induction machinery. Decisions compare the continuation
// value against -lambda*K; the stopped agent's future payoff is 0.
class Evaluator {
  public:
    Evaluator(const TaskGraph& g, Rat lambda, TieBreak tie, EvalOptions opts = {})
        : ix_(g), lambda_(std::move(lambda)), tie_(tie), opts_(opts) {
        compute_optimal();
    }

    const GraphIndex& index() const { return ix_; }

    bool meets(const Rat& cv, const Rat& threshold) const {
        return tie_ == TieBreak::ContinueOnTie ? cv >= threshold : cv > threshold;
    }

    // --- optimal agent (sunk-cost independent, one entry per node) ---

    const Rat& optimal_cv(int v) const { return cv_o_[v]; }
    const Rat& optimal_value(int v) const { return val_o_[v]; }
    bool optimal_decision(int v) const { return dec_o_[v]; }

    // --- per-agent continuation values at (node, K) ---

    Rat soph_cv(int v, const Rat& k) {
        auto key = std::make_pair(v, k);
        auto it = soph_cv_memo_.find(key);
        if (it != soph_cv_memo_.end()) return it->second;
        Rat cv = continuation(v, k, [this](int w, const Rat& kk) { return soph_value(w, kk); });
        soph_cv_memo_.emplace(key, cv);
        return cv;
    }

    Rat soph_value(int v, const Rat& k) {
        if (ix_.is_target(v)) return ix_.g->reward;
        if (ix_.is_sink(v)) return 0;
        auto key = std::make_pair(v, k);
        auto it = soph_memo_.find(key);
        if (it != soph_memo_.end()) return it->second;
        Rat cv = soph_cv(v, k);
        Rat val = meets(cv, -lambda_ * k) ? cv : Rat(0);
        remember(soph_memo_, key, val);
        return val;
    }

    bool soph_decision(int v, const Rat& k) { return meets(soph_cv(v, k), -lambda_ * k); }

    // Naive: threshold applies to the optimal continuation value, but the
    // realized payoff follows the naive decisions with true transitions.
    bool naive_decision(int v, const Rat& k) const { return meets(cv_o_[v], -lambda_ * k); }

    Rat naive_value(int v, const Rat& k) {
        if (ix_.is_target(v)) return ix_.g->reward;
        if (ix_.is_sink(v)) return 0;
        auto key = std::make_pair(v, k);
        auto it = naive_memo_.find(key);
        if (it != naive_memo_.end()) return it->second;
        Rat val = 0;
        if (naive_decision(v, k))
            val = continuation(v, k, [this](int w, const Rat& kk) { return naive_value(w, kk); });
        remember(naive_memo_, key, val);
        return val;
    }

    Rat naive_cv(int v, const Rat& k) {
        return continuation(v, k, [this](int w, const Rat& kk) { return naive_value(w, kk); });
    }

    // Hybrid: continues wherever the optimal agent (on its own policy) reaches
    // and continues; elsewhere behaves as the sophisticated agent from the
    // current (node, K) state onwards.
    bool hybrid_o_label(int v) {
        ensure_o_labels();
        return o_label_[v];
    }

    Rat hybrid_value(int v, const Rat& k) {
        if (ix_.is_target(v)) return ix_.g->reward;
        if (ix_.is_sink(v)) return 0;
        ensure_o_labels();
        if (!o_label_[v]) return soph_value(v, k);
        auto key = std::make_pair(v, k);
        auto it = hybrid_memo_.find(key);
        if (it != hybrid_memo_.end()) return it->second;
        Rat val = continuation(v, k, [this](int w, const Rat& kk) { return hybrid_value(w, kk); });
        remember(hybrid_memo_, key, val);
        return val;
    }

    bool hybrid_decision(int v, const Rat& k) {
        ensure_o_labels();
        return o_label_[v] ? true : soph_decision(v, k);
    }

    // Decision function for a given agent kind at state (v, K).
    bool decision(Kind kind, int v, const Rat& k) {
        switch (kind) {
            case Kind::Optimal: return dec_o_[v];
            case Kind::Naive: return naive_decision(v, k);
            case Kind::Sophisticated: return soph_decision(v, k);
            case Kind::Hybrid: return hybrid_decision(v, k);
        }
        return false;
    }

    Rat value(Kind kind, int v, const Rat& k) {
        switch (kind) {
            case Kind::Optimal: return ix_.is_target(v) ? ix_.g->reward
                                 : ix_.is_sink(v)       ? Rat(0)
                                                        : val_o_[v];
            case Kind::Naive: return naive_value(v, k);
            case Kind::Sophisticated: return soph_value(v, k);
            case Kind::Hybrid: return hybrid_value(v, k);
        }
        return 0;
    }

    Rat start_cv(Kind kind) {
        int s = ix_.start_idx;
        if (ix_.is_target(s)) return ix_.g->reward;
        switch (kind) {
            case Kind::Optimal: return cv_o_[s];
            case Kind::Naive: return naive_cv(s, 0);
            case Kind::Sophisticated: return soph_cv(s, 0);
            case Kind::Hybrid:
                return continuation(s, 0, [this](int w, const Rat& kk) { return hybrid_value(w, kk); });
        }
        return 0;
    }

    Rat reach_prob(Kind kind, int v, const Rat& k) {
        if (ix_.is_target(v)) return 1;
        if (ix_.is_sink(v)) return 0;
        auto key = std::make_tuple(static_cast<int>(kind), v, k);
        auto it = reach_memo_.find(key);
        if (it != reach_memo_.end()) return it->second;
        Rat total = 0;
        if (decision(kind, v, k)) {
            for_branches(v, k, [&](int w, const Rat& kk, const Rat& p, const Rat&) {
                total += p * reach_prob(kind, w, kk);
            });
        }
        reach_memo_.emplace(key, total);
        return total;
    }

    std::size_t states_visited(Kind kind) const {
        switch (kind) {
            case Kind::Optimal: return ix_.g->nodes.size();
            case Kind::Naive: return naive_memo_.size();
            case Kind::Sophisticated: return soph_memo_.size();
            case Kind::Hybrid: return hybrid_memo_.size() + soph_memo_.size();
        }
        return 0;
    }

    // Branch expansion for one step from (v, K): passes (successor, K', prob,
    // step cost) to fn. Node costs fold into K once; edge costs per branch.
    template <typename Fn>
    void for_branches(int v, const Rat& k, Fn&& fn) const {
        if (ix_.g->cost_model == CostModel::NodeCosts) {
            Rat kk = k + ix_.node(v).cost;
            for (int e : ix_.out_edges[v]) {
                const Edge& ed = ix_.g->edges[e];
                fn(ix_.edge_to(e), kk, ed.prob, ix_.node(v).cost);
            }
        } else {
            for (int e : ix_.out_edges[v]) {
                const Edge& ed = ix_.g->edges[e];
                fn(ix_.edge_to(e), k + ed.cost, ed.prob, ed.cost);
            }
        }
    }

  private:
    template <typename Value>
    Rat continuation(int v, const Rat& k, Value&& value_fn) const {
        Rat cv = 0;
        if (ix_.g->cost_model == CostModel::NodeCosts) {
            cv = -ix_.node(v).cost;
            Rat kk = k + ix_.node(v).cost;
            for (int e : ix_.out_edges[v]) {
                const Edge& ed = ix_.g->edges[e];
                cv += ed.prob * value_fn(ix_.edge_to(e), kk);
            }
        } else {
            for (int e : ix_.out_edges[v]) {
                const Edge& ed = ix_.g->edges[e];
                cv += ed.prob * (value_fn(ix_.edge_to(e), k + ed.cost) - ed.cost);
            }
        }
        return cv;
    }

    void compute_optimal() {
        const std::size_t n = ix_.g->nodes.size();
        cv_o_.assign(n, Rat(0));
        val_o_.assign(n, Rat(0));
        dec_o_.assign(n, false);
        // Reverse topological order via DFS.
        std::vector<int> order;
        std::vector<int> state(n, 0);
        std::vector<std::pair<int, std::size_t>> stack;
        for (std::size_t i = 0; i < n; ++i) {
            if (state[i] != 0) continue;
            stack.emplace_back(static_cast<int>(i), 0);
            state[i] = 1;
            while (!stack.empty()) {
                auto& [v, ei] = stack.back();
                if (ei < ix_.out_edges[v].size()) {
                    int w = ix_.edge_to(ix_.out_edges[v][ei++]);
                    if (state[w] == 0) {
                        state[w] = 1;
                        stack.emplace_back(w, 0);
                    }
                } else {
                    state[v] = 2;
                    order.push_back(v);
                    stack.pop_back();
                }
            }
        }
        for (int v : order) {
            if (ix_.is_target(v) || ix_.is_sink(v)) continue;
            Rat cv = continuation(v, 0, [&](int w, const Rat&) -> Rat {
                if (ix_.is_target(w)) return ix_.g->reward;
                if (ix_.is_sink(w)) return 0;
                return val_o_[w];
            });
            cv_o_[v] = cv;
            dec_o_[v] = meets(cv, 0);
            val_o_[v] = dec_o_[v] ? cv : Rat(0);
        }
    }

    void ensure_o_labels() {
        if (!o_label_.empty()) return;
        o_label_.assign(ix_.g->nodes.size(), false);
        std::vector<bool> seen(ix_.g->nodes.size(), false);
        std::vector<int> stack{ix_.start_idx};
        seen[ix_.start_idx] = true;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            if (ix_.is_target(v) || ix_.is_sink(v) || !dec_o_[v]) continue;
            o_label_[v] = true;
            for (int e : ix_.out_edges[v]) {
                int w = ix_.edge_to(e);
                if (!seen[w]) { seen[w] = true; stack.push_back(w); }
            }
        }
    }

    using Memo = std::map<std::pair<int, Rat>, Rat>;

    void remember(Memo& memo, const std::pair<int, Rat>& key, const Rat& val) {
        memo.emplace(key, val);
        if (soph_memo_.size() + naive_memo_.size() + hybrid_memo_.size() > opts_.state_cap)
            throw StateCapExceeded(soph_memo_.size() + naive_memo_.size() + hybrid_memo_.size());
    }

    GraphIndex ix_;
    Rat lambda_;
    TieBreak tie_;
    EvalOptions opts_;
    std::vector<Rat> cv_o_, val_o_;
    std::vector<bool> dec_o_;
    std::vector<bool> o_label_;
    Memo soph_memo_, soph_cv_memo_, naive_memo_, hybrid_memo_;
    std::map<std::tuple<int, int, Rat>, Rat> reach_memo_;
};

inline AgentEvaluation finish_eval(Evaluator& ev, Kind kind) {
    AgentEvaluation out;
    int s = ev.index().start_idx;
    out.payoff = ev.value(kind, s, 0);
    out.start_value = ev.start_cv(kind);
    out.starts = ev.index().is_target(s) ? false : ev.decision(kind, s, 0);
    out.reach_prob = ev.reach_prob(kind, s, 0);
    out.states_visited = ev.states_visited(kind);
    return out;
}

}  // namespace detail

inline AgentEvaluation eval_optimal(const TaskGraph& g,
                                    TieBreak tie = TieBreak::ContinueOnTie,
                                    EvalOptions opts = {}) {
    detail::Evaluator ev(g, 0, tie, opts);
    return detail::finish_eval(ev, Kind::Optimal);
}

inline AgentEvaluation eval_sophisticated(const TaskGraph& g, const Rat& lambda,
                                          TieBreak tie = TieBreak::ContinueOnTie,
                                          EvalOptions opts = {}) {
    detail::Evaluator ev(g, lambda, tie, opts);
    return detail::finish_eval(ev, Kind::Sophisticated);
}

inline AgentEvaluation eval_naive(const TaskGraph& g, const Rat& lambda,
                                  TieBreak tie = TieBreak::ContinueOnTie,
                                  EvalOptions opts = {}) {
    detail::Evaluator ev(g, lambda, tie, opts);
    return detail::finish_eval(ev, Kind::Naive);
}

inline AgentEvaluation eval_hybrid(const TaskGraph& g, const Rat& lambda,
                                   TieBreak tie = TieBreak::ContinueOnTie,
                                   EvalOptions opts = {}) {
    detail::Evaluator ev(g, lambda, tie, opts);
    return detail::finish_eval(ev, Kind::Hybrid);
}

inline AgentEvaluation eval_agent(const TaskGraph& g, const AgentKind& agent,
                                  EvalOptions opts = {}) {
    detail::Evaluator ev(g, agent.lambda, agent.tie, opts);
    return detail::finish_eval(ev, agent.kind);
}

/// Decision table under the agent's own policy. One entry per node for the
/// optimal agent; one per reachable (node, K) state for biased agents.
inline std::vector<Decision> policy_trace(const TaskGraph& g, const AgentKind& agent,
                                          EvalOptions opts = {}) {
    detail::Evaluator ev(g, agent.lambda, agent.tie, opts);
    const auto& ix = ev.index();
    std::vector<Decision> out;

    if (agent.kind == Kind::Optimal) {
        for (std::size_t v = 0; v < g.nodes.size(); ++v) {
            if (ix.is_target(static_cast<int>(v)) || ix.is_sink(static_cast<int>(v))) continue;
            out.push_back({g.nodes[v].id, 0, ev.optimal_decision(static_cast<int>(v))});
        }
        return out;
    }

    // Walk reachable states, expanding only where the agent continues.
    std::map<std::pair<int, Rat>, bool> seen;
    std::vector<std::pair<int, Rat>> stack{{ix.start_idx, Rat(0)}};
    while (!stack.empty()) {
        auto [v, k] = stack.back();
        stack.pop_back();
        if (ix.is_target(v) || ix.is_sink(v)) continue;
        if (seen.count({v, k})) continue;
        bool cont = ev.decision(agent.kind, v, k);
        seen[{v, k}] = cont;
        if (!cont) continue;
        ev.for_branches(v, k, [&](int w, const Rat& kk, const Rat&, const Rat&) {
            stack.emplace_back(w, kk);
        });
    }
    for (const auto& [state, cont] : seen)
        out.push_back({g.nodes[state.first].id, state.second, cont});
    std::sort(out.begin(), out.end(), [](const Decision& a, const Decision& b) {
        return std::tie(a.node, a.sunk) < std::tie(b.node, b.sunk);
    });
    return out;
}

}  // namespace sunkcost
