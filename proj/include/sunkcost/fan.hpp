#pragma once

#include "sunkcost/agents.hpp"
#include "sunkcost/bounds.hpp"
#include "sunkcost/graph.hpp"

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sunkcost {

// A fan is a path v_1..v_n plus the target: from v_i (i < n) the agent jumps
// to the target with probability p_i or advances to v_{i+1}; v_n leads to the
// target with probability 1. probs holds p_1..p_{n-1}, costs holds c_1..c_n.
struct FanSpec {
    int n = 0;
    std::vector<Rat> probs;
    std::vector<Rat> costs;
    Rat reward;
};

inline std::string fan_node_id(int i) { return "v" + std::to_string(i); }

inline TaskGraph build_fan(const FanSpec& spec) {
    if (spec.n < 2) throw std::domain_error("fan needs n >= 2");
    if (static_cast<int>(spec.probs.size()) != spec.n - 1)
        throw std::domain_error("fan needs n-1 probabilities, got " +
                                std::to_string(spec.probs.size()));
    if (static_cast<int>(spec.costs.size()) != spec.n)
        throw std::domain_error("fan needs n costs, got " + std::to_string(spec.costs.size()));
    TaskGraph g;
    g.reward = spec.reward;
    g.start = fan_node_id(1);
    g.target = "t";
    g.cost_model = CostModel::NodeCosts;
    for (int i = 1; i <= spec.n; ++i) g.nodes.push_back({fan_node_id(i), spec.costs[i - 1], false});
    g.nodes.push_back({"t", 0, false});
    for (int i = 1; i < spec.n; ++i) {
        const Rat& p = spec.probs[i - 1];
        if (p < 0 || p >= 1)
            throw std::domain_error("fan jump probability at v_" + std::to_string(i) +
                                    " outside [0, 1)");
        if (p > 0) g.edges.push_back({fan_node_id(i), "t", p, 0});
        g.edges.push_back({fan_node_id(i), fan_node_id(i + 1), 1 - p, 0});
    }
    g.edges.push_back({fan_node_id(spec.n), "t", 1, 0});
    return g;
}

/// pi_o of the uniform fan with p = 1/n, c = 1/n - 1/n^2, R = 1, where the
/// optimal agent continues through v_{n-1} and stops at v_n.
inline Rat tight_fan_optimal_payoff(int n) {
    Rat p(1, n);
    Rat c = p - p * p;
    return (1 - rat_pow(1 - p, n - 1)) / p * (p - c);
}

/// Exact lambda making the sophisticated agent's full-traversal payoff 0:
/// lambda = (1 - (1-1/n)^{n-1}) / (n (1-1/n)^{n+1}).
inline Rat tight_fan_lambda(int n) {
    Rat q = 1 - Rat(1, n);
    return (1 - rat_pow(q, n - 1)) / (n * rat_pow(q, n + 1));
}

/// Tight family: p_i = 1/n, c_i = 1/n - 1/n^2 for i < n, R = 1, and the last
/// node priced at R + lambda*(n-1)*c so the optimal agent stops at v_n while
/// the sophisticated agent continues on an exact tie.
inline std::pair<FanSpec, Rat> build_tight_fan(int n) {
    if (n < 3) throw std::domain_error("tight fan needs n >= 3");
    Rat p(1, n);
    Rat c = p - p * p;
    Rat lambda = tight_fan_lambda(n);
    FanSpec spec;
    spec.n = n;
    spec.reward = 1;
    spec.probs.assign(n - 1, p);
    spec.costs.assign(n - 1, c);
    spec.costs.push_back(spec.reward + lambda * (n - 1) * c);
    return {spec, lambda};
}

/// lambda * (1 - 1/n)^n * R.
inline Rat fan_bound_rhs(int n, const Rat& lambda, const Rat& reward) {
    if (n < 2) throw std::domain_error("fan bound needs n >= 2");
    return lambda * rat_pow(1 - Rat(1, n), n) * reward;
}

inline BoundReport check_fan_bound(const FanSpec& spec, const Rat& lambda,
                                   const std::string& graph_ref = "") {
    TaskGraph g = build_fan(spec);
    Rat lhs = eval_sophisticated(g, lambda).payoff;
    Rat rhs = eval_optimal(g).payoff - fan_bound_rhs(spec.n, lambda, spec.reward);
    return {BoundId::FanBound, lhs, rhs, lhs >= rhs, graph_ref, lambda};
}

/// Last path node the optimal agent reaches: it reaches v_k iff it continues
/// at v_1..v_{k-1}. Returns n when it never stops before v_n.
inline int fan_optimal_stop_node(const FanSpec& spec) {
    TaskGraph g = build_fan(spec);
    detail::Evaluator ev(g, 0, TieBreak::ContinueOnTie);
    const auto& ix = ev.index();
    for (int k = 1; k <= spec.n; ++k)
        if (!ev.optimal_decision(ix.id_to_idx.at(fan_node_id(k)))) return k;
    return spec.n;
}

/// Sums over the prefix the optimal agent commits to: costs paid and jump
/// probabilities before its first stop. When it never stops, the final hop
/// v_n -> t counts with probability 1.
inline std::pair<Rat, Rat> fan_cost_bound_sums(const FanSpec& spec) {
    TaskGraph g = build_fan(spec);
    detail::Evaluator ev(g, 0, TieBreak::ContinueOnTie);
    const auto& ix = ev.index();
    Rat cost_sum = 0, prob_sum = 0;
    for (int i = 1; i <= spec.n; ++i) {
        if (!ev.optimal_decision(ix.id_to_idx.at(fan_node_id(i)))) break;
        cost_sum += spec.costs[i - 1];
        prob_sum += i < spec.n ? spec.probs[i - 1] : Rat(1);
    }
    return {cost_sum, prob_sum};
}

/// If the optimal agent pays the costs of a prefix, the jump probabilities it
/// bought along that prefix cover them: sum c_i <= sum p_i * R.
inline bool check_fan_cost_bound(const FanSpec& spec) {
    auto [cost_sum, prob_sum] = fan_cost_bound_sums(spec);
    return cost_sum <= prob_sum * spec.reward;
}

struct ContinuationReport {
    int k;
    Rat continuation_value;  // sophisticated value of continuing from v_k
    Rat threshold;           // -lambda * sunk cost (k-1)c
    bool holds;
};

/// On the tight fan, the sophisticated agent continues at every reachable
/// state: its continuation value from v_k with sunk cost (k-1)c stays at or
/// above -lambda*(k-1)c. An optional factor scales the bias down; the last
/// node's price tracks the bias, so the lemma survives the reduction.
inline std::vector<ContinuationReport> check_continuation_lemma(int n,
                                                                const Rat& lambda_factor = 1) {
    auto [spec, lambda] = build_tight_fan(n);
    Rat c = spec.costs[0];
    Rat eval_lambda = lambda * lambda_factor;
    spec.costs.back() = spec.reward + eval_lambda * (n - 1) * c;
    TaskGraph g = build_fan(spec);
    detail::Evaluator ev(g, eval_lambda, TieBreak::ContinueOnTie);
    std::vector<ContinuationReport> out;
    for (int k = 1; k <= n; ++k) {
        Rat sunk = (k - 1) * c;
        Rat cv = ev.soph_cv(ev.index().id_to_idx.at(fan_node_id(k)), sunk);
        Rat threshold = -eval_lambda * sunk;
        out.push_back({k, cv, threshold, cv >= threshold});
    }
    return out;
}

struct ConvexityReport {
    Rat bound;               // (1-p)^{n-1} * (n-1)
    bool endpoints_equal;    // f(1) = f(n) = bound exactly
    bool all_below_bound;    // f(x) <= bound at every integer x in 1..n
    bool midpoint_convex;    // f((x+z)/2) <= (f(x)+f(z))/2 on sampled triples
    int triples_checked;
};

/// f(x) = (1-p)^{n-x}(n-1) - (x-1) + (1-p)^{n-1}(x-1), evaluated exactly at
/// integer x; midpoint convexity is sampled over same-parity integer triples
/// so every evaluation stays rational.
inline ConvexityReport check_convexity(int n, const Rat& p, int samples = 1000) {
    if (n < 2) throw std::domain_error("convexity check needs n >= 2");
    if (p <= 0 || p >= 1) throw std::domain_error("p must be in (0, 1)");
    Rat q = 1 - p;
    auto f = [&](int x) -> Rat {
        return rat_pow(q, n - x) * (n - 1) - (x - 1) + rat_pow(q, n - 1) * (x - 1);
    };
    ConvexityReport rep;
    rep.bound = rat_pow(q, n - 1) * (n - 1);
    rep.endpoints_equal = f(1) == rep.bound && f(n) == rep.bound;
    rep.all_below_bound = true;
    for (int x = 1; x <= n; ++x)
        if (f(x) > rep.bound) rep.all_below_bound = false;
    rep.midpoint_convex = true;
    rep.triples_checked = 0;
    for (int x = 1; x <= n && rep.triples_checked < samples; ++x)
        for (int z = x + 2; z <= n && rep.triples_checked < samples; z += 2) {
            int y = (x + z) / 2;
            if (f(y) * 2 > f(x) + f(z)) rep.midpoint_convex = false;
            ++rep.triples_checked;
        }
    return rep;
}

struct LambdaMonotoneReport {
    bool monotone_increasing;
    bool all_at_least_one;
    Rat first_value;  // g(n_lo)
};

/// g(n) = (1-1/n)^{n-1} + n(1-1/n)^{n+1}; g >= 1 is exactly the statement
/// that the tight-fan lambda stays below 1.
inline Rat lambda_margin_fn(int n) {
    Rat q = 1 - Rat(1, n);
    return rat_pow(q, n - 1) + n * rat_pow(q, n + 1);
}

inline LambdaMonotoneReport check_lambda_increasing(int n_lo, int n_hi) {
    if (n_lo < 3 || n_hi < n_lo || n_hi > 10000)
        throw std::domain_error("n range must lie in [3, 10000]");
    LambdaMonotoneReport rep{true, true, lambda_margin_fn(n_lo)};
    Rat prev = rep.first_value;
    if (prev < 1) rep.all_at_least_one = false;
    for (int n = n_lo + 1; n <= n_hi; ++n) {
        Rat cur = lambda_margin_fn(n);
        if (cur <= prev) rep.monotone_increasing = false;
        if (cur < 1) rep.all_at_least_one = false;
        prev = cur;
    }
    return rep;
}

/// Brute-force grid maximization of prod(1-p_i) * sum(p_i) over [0,1]^{k-1},
/// coarse pass then refinement around the incumbent down to step 1/resolution.
inline std::pair<std::vector<Rat>, Rat> maximize_failure_product(int k, int resolution = 200) {
    if (k < 2 || k > 6) throw std::domain_error("grid search supports 2 <= k <= 6");
    if (resolution < 200) throw std::domain_error("resolution must be at least 200");
    const int m = k - 1;
    auto objective = [&](const std::vector<Rat>& p) -> Rat {
        Rat prod = 1, sum = 0;
        for (const auto& pi : p) {
            prod *= 1 - pi;
            sum += pi;
        }
        return Rat(prod * sum);
    };

    std::vector<Rat> best(m, Rat(1, 2));
    Rat best_val = objective(best);
    Rat step(1, 10);
    Rat radius = 1;  // first pass covers the whole box
    while (true) {
        std::vector<Rat> lo(m), hi(m);
        for (int i = 0; i < m; ++i) {
            lo[i] = best[i] - radius < 0 ? Rat(0) : Rat(best[i] - radius);
            hi[i] = best[i] + radius > 1 ? Rat(1) : Rat(best[i] + radius);
        }
        std::vector<Rat> point = lo;
        std::vector<Rat> incumbent = best;
        Rat incumbent_val = best_val;
        while (true) {
            Rat val = objective(point);
            if (val > incumbent_val) {
                incumbent_val = val;
                incumbent = point;
            }
            int i = 0;
            for (; i < m; ++i) {
                point[i] += step;
                if (point[i] <= hi[i]) break;
                point[i] = lo[i];
            }
            if (i == m) break;
        }
        best = incumbent;
        best_val = incumbent_val;
        if (step <= Rat(1, resolution)) break;
        radius = step;
        step /= 5;
    }
    return {best, best_val};
}

}  // namespace sunkcost
