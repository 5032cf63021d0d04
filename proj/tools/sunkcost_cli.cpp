// Command-line front end: instance generation, agent evaluation, bound
// verification, parameter sweeps. All outputs are deterministic given the
// same arguments and seeds.
//
// Exit codes: 0 pass, 1 input error, 2 resource guard, 3 property violation.

#include "sunkcost/agents.hpp"
#include "sunkcost/bounds.hpp"
#include "sunkcost/fan.hpp"
#include "sunkcost/graph_io.hpp"
#include "sunkcost/hardness.hpp"
#include "sunkcost/oracle.hpp"
#include "sunkcost/random_instances.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace sunkcost;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitGuard = 2;
constexpr int kExitViolation = 3;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Rat parse_rat_arg(const std::string& text, const std::string& flag) {
    try {
        return parse_rat(text);
    } catch (const ParseError& e) {
        throw InputError(flag + ": " + e.what());
    }
}

Kind parse_agent(const std::string& name) {
    if (name == "optimal") return Kind::Optimal;
    if (name == "naive") return Kind::Naive;
    if (name == "sophisticated") return Kind::Sophisticated;
    if (name == "hybrid") return Kind::Hybrid;
    throw InputError("unknown agent '" + name + "'");
}

TieBreak parse_tie(const std::string& name) {
    if (name == "continue") return TieBreak::ContinueOnTie;
    if (name == "stop") return TieBreak::StopOnTie;
    throw InputError("unknown tie rule '" + name + "'");
}

TaskGraph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    TaskGraph g;
    try {
        g = parse_graph(buf.str());
    } catch (const ParseError& e) {
        throw InputError(path + ": " + e.what());
    }
    auto res = validate(g);
    if (!res.ok()) {
        std::string msg = path + ": invalid graph";
        for (const auto& v : res.violations) msg += "\n  " + v.locus + ": " + v.message;
        throw InputError(msg);
    }
    return g;
}

// Output sink: --out PATH or stdout.
class Sink {
  public:
    explicit Sink(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw InputError("cannot write '" + path + "'");
        }
    }
    std::ostream& out() { return file_.is_open() ? file_ : std::cout; }

  private:
    std::ofstream file_;
};

// ---------------------------------------------------------------- eval ----

int cmd_eval(const std::string& graph_path, const std::string& agent_name,
             const std::string& lambda_s, const std::string& tie_s) {
    TaskGraph g = load_graph(graph_path);
    AgentKind agent{parse_agent(agent_name), parse_rat_arg(lambda_s, "--lambda"),
                    parse_tie(tie_s)};
    AgentEvaluation ev = eval_agent(g, agent);
    std::cout << "payoff: " << rat_to_string(ev.payoff) << " (" << rat_to_decimal(ev.payoff)
              << ")\n"
              << "reach_prob: " << rat_to_string(ev.reach_prob) << " ("
              << rat_to_decimal(ev.reach_prob) << ")\n"
              << "starts: " << (ev.starts ? "yes" : "no") << "\n"
              << "states_visited: " << ev.states_visited << "\n";
    return kExitOk;
}

// ----------------------------------------------------------------- gen ----

void write_gen(const std::string& out_path, const TaskGraph& g,
               const nlohmann::ordered_json& meta) {
    std::string doc = serialize_graph(g);
    if (out_path.empty()) {
        std::cout << doc;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw InputError("cannot write '" + out_path + "'");
    out << doc;
    std::ofstream mout(out_path + ".meta.json");
    if (!mout) throw InputError("cannot write '" + out_path + ".meta.json'");
    mout << meta.dump(2) << "\n";
}

int cmd_gen(const std::string& family, int n, const std::string& lambda_s,
            const std::string& epsilon_s, std::uint64_t seed, bool seed_given,
            const std::string& out_path) {
    nlohmann::ordered_json meta;
    meta["family"] = family;

    if (family == "fan") {
        if (!seed_given) throw InputError("fan: --seed required");
        InstanceRng rng(seed);
        FanSpec spec = random_fan(rng, n > 0 ? n : 12);
        meta["n"] = spec.n;
        meta["seed"] = seed;
        write_gen(out_path, build_fan(spec), meta);
    } else if (family == "tight-fan") {
        if (n < 3) throw InputError("tight-fan: --n >= 3 required");
        auto [spec, lambda] = build_tight_fan(n);
        meta["n"] = n;
        meta["lambda"] = rat_to_string(lambda);
        write_gen(out_path, build_fan(spec), meta);
    } else if (family == "three-node-tight") {
        Rat lambda = parse_rat_arg(lambda_s, "--lambda");
        if (lambda <= 0) throw InputError("three-node-tight: --lambda > 0 required");
        Rat precision(1, Int("1000000000000"));
        TaskGraph g = build_three_node_tight(lambda, 1, precision);
        meta["lambda"] = rat_to_string(lambda);
        meta["precision"] = rat_to_string(precision);
        write_gen(out_path, g, meta);
    } else if (family == "edge-cost-tight") {
        Rat lambda = parse_rat_arg(lambda_s, "--lambda");
        Rat epsilon = parse_rat_arg(epsilon_s, "--epsilon");
        if (lambda <= 0 || epsilon <= 0 || epsilon >= 1)
            throw InputError("edge-cost-tight: need --lambda > 0 and --epsilon in (0,1)");
        meta["lambda"] = rat_to_string(lambda);
        meta["epsilon"] = rat_to_string(epsilon);
        write_gen(out_path, build_edge_cost_tight(lambda, epsilon), meta);
    } else if (family == "knapsack") {
        if (!seed_given) throw InputError("knapsack: --seed required");
        InstanceRng rng(seed);
        KnapsackInstance inst = random_knapsack(rng, n > 0 ? n : 8);
        Rat lambda = parse_rat_arg(lambda_s, "--lambda");
        if (lambda <= 0) throw InputError("knapsack: --lambda > 0 required");
        KnapsackGadget gadget = build_gadget(inst, lambda, 0);
        meta["seed"] = seed;
        meta["weights"] = inst.weights;
        meta["capacity"] = inst.capacity;
        meta["lambda"] = rat_to_string(lambda);
        meta["C"] = rat_to_string(gadget.big_c);
        meta["reward"] = rat_to_string(gadget.reward);
        write_gen(out_path, gadget.graph, meta);
    } else if (family == "random") {
        if (!seed_given) throw InputError("random: --seed required");
        InstanceRng rng(seed);
        TaskGraph g = random_dag(rng, n > 0 ? n : 10);
        meta["seed"] = seed;
        write_gen(out_path, g, meta);
    } else {
        throw InputError("unknown family '" + family + "'");
    }
    return kExitOk;
}

// -------------------------------------------------------------- verify ----

class VerifyWriter {
  public:
    explicit VerifyWriter(std::ostream& out) : out_(out) {
        out_ << "bound_id,graph_ref,lambda,lhs,rhs,holds\n";
    }

    void row(const std::string& bound_id, const std::string& graph_ref, const Rat& lambda,
             const Rat& lhs, const Rat& rhs, bool holds, const TaskGraph* graph = nullptr) {
        out_ << bound_id << ',' << graph_ref << ',' << rat_to_string(lambda) << ','
             << rat_to_string(lhs) << ',' << rat_to_string(rhs) << ','
             << (holds ? "true" : "false") << '\n';
        if (!holds) {
            all_hold_ = false;
            std::cerr << "violated: " << bound_id << " on " << graph_ref << "\n";
            if (graph) std::cerr << serialize_graph(*graph);
        }
    }

    void report(const BoundReport& r, const TaskGraph* graph = nullptr) {
        row(bound_id_name(r.bound_id), r.graph_ref, r.lambda, r.lhs, r.rhs, r.holds, graph);
    }

    bool all_hold() const { return all_hold_; }

  private:
    std::ostream& out_;
    bool all_hold_ = true;
};

void verify_bounds(VerifyWriter& w, std::uint64_t seed, int count) {
    const std::vector<Rat> lambdas{{1, 4}, {1, 2}, 1, 2};

    InstanceRng rng(seed);
    for (int i = 0; i < count; ++i) {
        TaskGraph g = random_dag(rng);
        std::string ref = "dag-" + std::to_string(seed) + "-" + std::to_string(i);
        for (const Rat& lambda : lambdas) {
            w.report(check_cor_hyb(g, lambda, ref), &g);
            w.report(check_lambda_ps_r(g, lambda, ref), &g);
            w.report(check_closed_form(g, lambda, ref), &g);
        }
    }

    const std::vector<Rat> tight_lambdas{{1, 4}, {1, 2}, 1, 2, 10};
    Rat precision(1, Int("1000000000000"));
    for (const Rat& lambda : tight_lambdas) {
        TaskGraph g = build_three_node_tight(lambda, 1, precision);
        std::string ref = "three-node-tight-" + rat_to_string(lambda);
        w.report(check_three_node_bound(g, lambda, precision, ref), &g);
    }

    InstanceRng rng3(seed + 1);
    for (int i = 0; i < count; ++i) {
        TaskGraph g = random_three_node(rng3);
        std::string ref = "three-node-" + std::to_string(seed) + "-" + std::to_string(i);
        for (const Rat& lambda : lambdas)
            w.report(check_three_node_bound(g, lambda, precision, ref), &g);
    }

    {
        Rat lambda(1, 2), epsilon(1, 100);
        TaskGraph g = build_edge_cost_tight(lambda, epsilon);
        Rat pi_s = eval_sophisticated(g, lambda).payoff;
        Rat pi_o = eval_optimal(g).payoff;
        w.row("edge-cost-pi-s", "edge-cost-tight", lambda, pi_s, 0, pi_s == 0, &g);
        Rat expected = lambda / (1 + lambda) - epsilon;
        w.row("edge-cost-pi-o", "edge-cost-tight", lambda, pi_o, expected, pi_o == expected, &g);
        w.report(check_closed_form(g, lambda, "edge-cost-tight"), &g);
    }
}

void verify_fan(VerifyWriter& w, std::uint64_t seed, int count) {
    for (int n = 3; n <= 50; ++n) {
        auto [spec, lambda] = build_tight_fan(n);
        TaskGraph g = build_fan(spec);
        std::string ref = "tight-fan-" + std::to_string(n);
        Rat c = spec.costs[0];
        Rat pi_o = eval_optimal(g).payoff;
        Rat pi_s = eval_sophisticated(g, lambda).payoff;
        Rat identity_rhs = lambda * rat_pow(1 - Rat(1, n), n - 1) * (n - 1) * c;
        w.row("tight-fan-identity", ref, lambda, pi_o, identity_rhs, pi_o == identity_rhs, &g);
        w.row("tight-fan-pi-s", ref, lambda, pi_s, 0, pi_s == 0, &g);
        w.row("tight-fan-lambda-below-1", ref, lambda, 1, lambda, lambda < 1, &g);
    }

    InstanceRng rng(seed);
    const std::vector<Rat> lambdas{{1, 4}, {1, 2}, 1};
    for (int i = 0; i < count; ++i) {
        FanSpec spec = random_fan(rng);
        TaskGraph g = build_fan(spec);
        std::string ref = "fan-" + std::to_string(seed) + "-" + std::to_string(i);
        for (const Rat& lambda : lambdas)
            w.report(check_fan_bound(spec, lambda, ref), &g);
        auto [cost_sum, prob_sum] = fan_cost_bound_sums(spec);
        w.row("fan-cost-bound", ref, 0, prob_sum * spec.reward, cost_sum,
              check_fan_cost_bound(spec), &g);
    }

    for (int n : {3, 10, 25}) {
        bool all = true;
        for (const auto& rep : check_continuation_lemma(n))
            if (!rep.holds) all = false;
        w.row("fan-continuation", "tight-fan-" + std::to_string(n), 0, all ? 1 : 0, 1, all);
    }

    for (int n : {2, 5, 10, 20}) {
        auto rep = check_convexity(n, Rat(1, n < 3 ? 2 : n));
        bool ok = rep.endpoints_equal && rep.all_below_bound && rep.midpoint_convex;
        w.row("fan-convexity", "n-" + std::to_string(n), 0, ok ? 1 : 0, 1, ok);
    }

    {
        auto rep = check_lambda_increasing(3, 1000);
        bool ok = rep.monotone_increasing && rep.all_at_least_one;
        w.row("fan-lambda-margin", "n-3-1000", 0, rep.first_value, Rat(28, 27),
              ok && rep.first_value == Rat(28, 27));
    }

    for (int k = 2; k <= 5; ++k) {
        auto [argmax, value] = maximize_failure_product(k);
        bool near = true;
        for (const auto& p : argmax)
            if (rat_abs(p - Rat(1, k)) > Rat(1, 200)) near = false;
        Rat closed = rat_pow(1 - Rat(1, k), k);
        w.row("fan-optimizer", "k-" + std::to_string(k), 0, value, closed,
              near && rat_abs(value - closed) <= Rat(1, 10000));
    }
}

void verify_hardness(VerifyWriter& w, std::uint64_t seed, int count) {
    InstanceRng rng(seed);
    const std::vector<Rat> lambdas{{1, 4}, {1, 2}, 1};
    for (int i = 0; i < count; ++i) {
        KnapsackInstance inst = random_knapsack(rng, 12);
        const Rat& lambda = lambdas[i % lambdas.size()];
        Rat big_c = (i % 3 == 0) ? Rat(0) : (i % 3 == 1) ? Rat(1) : Rat(weight_sum(inst));
        std::string ref = "knapsack-" + std::to_string(seed) + "-" + std::to_string(i);
        KnapsackGadget gadget = build_gadget(inst, lambda, big_c);
        Int expect = count_bruteforce(inst);
        Int got = recover_count(gadget_traversal_payoff(gadget), inst, lambda, big_c);
        w.row("hardness-count", ref, lambda, Rat(got), Rat(expect), got == expect,
              &gadget.graph);
    }

    InstanceRng rng2(seed + 1);
    int probes = std::min(count, 25);
    for (int i = 0; i < probes; ++i) {
        KnapsackInstance inst = random_knapsack(rng2, 10);
        std::string ref = "knapsack-bs-" + std::to_string(seed) + "-" + std::to_string(i);
        Int expect = count_bruteforce(inst);
        Int got = binary_search_count(inst, Rat(1, 2));
        w.row("hardness-binary-search", ref, Rat(1, 2), Rat(got), Rat(expect), got == expect);
    }
}

int cmd_verify(const std::string& suite, std::uint64_t seed, int count,
               const std::string& out_path) {
    if (count < 1) throw InputError("--count must be >= 1");
    Sink sink(out_path);
    VerifyWriter w(sink.out());
    bool known = false;
    if (suite == "bounds" || suite == "all") { verify_bounds(w, seed, count); known = true; }
    if (suite == "fan" || suite == "all") { verify_fan(w, seed, count); known = true; }
    if (suite == "hardness" || suite == "all") { verify_hardness(w, seed, count); known = true; }
    if (!known) throw InputError("unknown suite '" + suite + "'");
    return w.all_hold() ? kExitOk : kExitViolation;
}

// --------------------------------------------------------------- sweep ----

class SweepWriter {
  public:
    explicit SweepWriter(std::ostream& out) : out_(out) {
        out_ << "family,n,lambda,epsilon,pi_o,pi_s,pi_h,p_success,bound_rhs,gap,"
                "pi_o_dec,pi_s_dec,pi_h_dec,p_success_dec,bound_rhs_dec,gap_dec\n";
    }

    void row(const std::string& family, const std::string& n, const Rat& lambda,
             const std::string& epsilon, const Rat& pi_o, const Rat& pi_s, const Rat& pi_h,
             const Rat& p_success, const Rat& bound_rhs, const Rat& gap) {
        out_ << family << ',' << n << ',' << rat_to_string(lambda) << ',' << epsilon << ','
             << rat_to_string(pi_o) << ',' << rat_to_string(pi_s) << ','
             << rat_to_string(pi_h) << ',' << rat_to_string(p_success) << ','
             << rat_to_string(bound_rhs) << ',' << rat_to_string(gap) << ','
             << rat_to_decimal(pi_o) << ',' << rat_to_decimal(pi_s) << ','
             << rat_to_decimal(pi_h) << ',' << rat_to_decimal(p_success) << ','
             << rat_to_decimal(bound_rhs) << ',' << rat_to_decimal(gap) << '\n';
    }

  private:
    std::ostream& out_;
};

void sweep_graph_row(SweepWriter& w, const std::string& family, const std::string& n,
                     const TaskGraph& g, const Rat& lambda, const std::string& epsilon,
                     const Rat& bound_rhs) {
    Rat pi_o = eval_optimal(g).payoff;
    Rat pi_s = eval_sophisticated(g, lambda).payoff;
    Rat pi_h = eval_hybrid(g, lambda).payoff;
    Rat p_success = decompose_optimal(g).p_success;
    w.row(family, n, lambda, epsilon, pi_o, pi_s, pi_h, p_success, bound_rhs, pi_o - pi_s);
}

int cmd_sweep(const std::string& family, const std::vector<std::string>& lambda_args,
              const std::vector<std::string>& epsilon_args, int n, std::uint64_t seed,
              bool seed_given, int count, const std::string& out_path) {
    std::vector<Rat> lambdas;
    for (const auto& s : lambda_args) lambdas.push_back(parse_rat_arg(s, "--lambda"));
    std::vector<Rat> epsilons;
    for (const auto& s : epsilon_args) epsilons.push_back(parse_rat_arg(s, "--epsilon"));

    Sink sink(out_path);
    SweepWriter w(sink.out());

    if (family == "tight-fan") {
        int hi = n > 0 ? n : 50;
        if (hi < 3) throw InputError("tight-fan: --n >= 3 required");
        for (int m = 3; m <= hi; ++m) {
            auto [spec, lambda] = build_tight_fan(m);
            TaskGraph g = build_fan(spec);
            sweep_graph_row(w, family, std::to_string(m), g, lambda, "",
                            fan_bound_rhs(m, lambda, spec.reward));
        }
    } else if (family == "three-node-tight") {
        if (lambdas.empty()) lambdas = {{1, 4}, {1, 2}, 1, 2, 10};
        Rat precision(1, Int("1000000000000"));
        for (const Rat& lambda : lambdas) {
            if (lambda <= 0) throw InputError("--lambda must be > 0");
            TaskGraph g = build_three_node_tight(lambda, 1, precision);
            sweep_graph_row(w, family, "3", g, lambda, "",
                            three_node_gap_upper(lambda, 1, precision));
        }
    } else if (family == "edge-cost-tight") {
        if (lambdas.empty()) lambdas = {Rat(1, 2)};
        if (epsilons.empty()) epsilons = {Rat(1, 100)};
        for (const Rat& lambda : lambdas)
            for (const Rat& epsilon : epsilons) {
                TaskGraph g = build_edge_cost_tight(lambda, epsilon);
                sweep_graph_row(w, family, "3", g, lambda, rat_to_string(epsilon),
                                lambda / (1 + lambda));
            }
    } else if (family == "random") {
        if (!seed_given) throw InputError("random: --seed required");
        if (lambdas.empty()) lambdas = {Rat(1, 2)};
        InstanceRng rng(seed);
        for (int i = 0; i < count; ++i) {
            TaskGraph g = random_dag(rng, n > 0 ? n : 10);
            for (const Rat& lambda : lambdas)
                sweep_graph_row(w, family, std::to_string(g.nodes.size()), g, lambda, "",
                                lambda / (1 + lambda) * g.reward);
        }
    } else if (family == "random-fans") {
        if (!seed_given) throw InputError("random-fans: --seed required");
        if (lambdas.empty()) lambdas = {Rat(1, 2)};
        InstanceRng rng(seed);
        for (int i = 0; i < count; ++i) {
            FanSpec spec = random_fan(rng, n > 0 ? n : 12);
            TaskGraph g = build_fan(spec);
            for (const Rat& lambda : lambdas)
                sweep_graph_row(w, family, std::to_string(spec.n), g, lambda, "",
                                fan_bound_rhs(spec.n, lambda, spec.reward));
        }
    } else if (family == "knapsack") {
        if (!seed_given) throw InputError("knapsack: --seed required");
        if (lambdas.empty()) lambdas = {Rat(1, 2)};
        InstanceRng rng(seed);
        for (int i = 0; i < count; ++i) {
            KnapsackInstance inst = random_knapsack(rng, n > 0 ? n : 8);
            for (const Rat& lambda : lambdas) {
                KnapsackGadget gadget = build_gadget(inst, lambda, 0);
                sweep_graph_row(w, family, std::to_string(inst.weights.size()), gadget.graph,
                                lambda, "", 0);
            }
        }
    } else {
        throw InputError("unknown family '" + family + "'");
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sunk-cost agent evaluation on stochastic task graphs"};
    app.require_subcommand(1);

    std::string graph_path, agent = "optimal", lambda_s = "0", tie_s = "continue";
    std::string family, out_path;
    std::vector<std::string> lambda_args, epsilon_args;
    std::string epsilon_s = "1/100";
    int n = 0, count = 50;
    std::uint64_t seed = 0;

    auto* eval = app.add_subcommand("eval", "evaluate one agent on a graph file");
    eval->add_option("--graph", graph_path, "graph JSON file")->required();
    eval->add_option("--agent", agent, "optimal|naive|sophisticated|hybrid");
    eval->add_option("--lambda", lambda_s, "bias parameter (rational)");
    eval->add_option("--tie", tie_s, "continue|stop");

    auto* gen = app.add_subcommand("gen", "generate an instance");
    gen->add_option("family", family,
                    "fan|tight-fan|three-node-tight|edge-cost-tight|knapsack|random")
        ->required();
    gen->add_option("--n", n, "size parameter");
    gen->add_option("--lambda", lambda_s, "bias parameter (rational)");
    gen->add_option("--epsilon", epsilon_s, "epsilon parameter (rational)");
    auto* gen_seed = gen->add_option("--seed", seed, "random seed");
    gen->add_option("--out", out_path, "output path (sidecar metadata written alongside)");

    auto* verify = app.add_subcommand("verify", "run a property suite, emit CSV");
    verify->add_option("suite", family, "bounds|fan|hardness|all")->required();
    verify->add_option("--seed", seed, "random seed");
    verify->add_option("--count", count, "random instances per family");
    verify->add_option("--out", out_path, "CSV output path");

    auto* sweep = app.add_subcommand("sweep", "parameter sweep, emit CSV");
    sweep->add_option("--family", family,
                      "tight-fan|three-node-tight|edge-cost-tight|random|random-fans|knapsack")
        ->required();
    sweep->add_option("--lambda", lambda_args, "lambda grid (repeatable)");
    sweep->add_option("--epsilon", epsilon_args, "epsilon grid (repeatable)");
    sweep->add_option("--n", n, "size parameter");
    auto* sweep_seed = sweep->add_option("--seed", seed, "random seed");
    sweep->add_option("--count", count, "random instances");
    sweep->add_option("--out", out_path, "CSV output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitInput;
    }

    try {
        if (eval->parsed()) return cmd_eval(graph_path, agent, lambda_s, tie_s);
        if (gen->parsed())
            return cmd_gen(family, n, lambda_s, epsilon_s, seed, gen_seed->count() > 0,
                           out_path);
        if (verify->parsed()) return cmd_verify(family, seed, count, out_path);
        if (sweep->parsed())
            return cmd_sweep(family, lambda_args, epsilon_args, n, seed,
                             sweep_seed->count() > 0, count, out_path);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const StateCapExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitGuard;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitGuard;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
