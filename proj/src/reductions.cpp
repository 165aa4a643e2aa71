#include "tip/reductions.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "tip/motivating.hpp"

namespace tip {

namespace {

std::string pad_num(long v, int width) {
    std::string s = std::to_string(v);
    return std::string(std::max(0, width - static_cast<int>(s.size())), '0') + s;
}

int digits(long v) { return static_cast<int>(std::to_string(v).size()); }

}  // namespace

int MmsGadget::edge_index(const std::string& from, const std::string& to) const {
    auto e = graph.edge_between(graph.index_of(from), graph.index_of(to));
    if (!e) throw Error(Err::MissingEndpoint, "no gadget edge " + from + " -> " + to);
    return *e;
}

MmsGadget build_mms_gadget(const Formula3CNF& f, const Rational& beta) {
    if (!(beta > 0 && beta < 1)) throw Error(Err::BadParameter, "gadget requires 0 < beta < 1");
    if (f.num_clauses() < 1) throw Error(Err::BadParameter, "gadget requires at least one clause");
    MmsGadget g;
    g.formula = f;
    g.beta = beta;
    g.f = 1 - beta / 2 - beta * beta / 2;
    Rational hub_exit = 3 * beta / 2 + (1 + beta) / (1 - beta);
    g.z = 2 + hub_exit;
    g.ell = to_long(rat_ceil(g.z / g.f));
    g.reward = 1 + beta / 2 + 1 / beta + 2 / (1 - beta);

    const int m = f.num_clauses();
    const int n = f.num_vars;
    const int wm = digits(m), wn = digits(n), wl = digits(g.ell);
    TaskGraph& gr = g.graph;
    gr.name = "mms-gadget";
    gr.nodes.push_back("s");
    for (int i = 1; i <= m; ++i) g.clause_nodes.push_back("u" + pad_num(i, wm));
    for (int k = 1; k <= n; ++k) g.var_nodes.push_back("v" + pad_num(k, wn));
    for (int k = 1; k <= n; ++k) g.var_prime_nodes.push_back("vp" + pad_num(k, wn));
    for (long j = 1; j <= g.ell; ++j) g.bus_nodes.push_back("w" + pad_num(j, wl));
    g.hub = "w";
    for (const auto& id : g.clause_nodes) gr.nodes.push_back(id);
    for (const auto& id : g.var_nodes) gr.nodes.push_back(id);
    for (const auto& id : g.var_prime_nodes) gr.nodes.push_back(id);
    for (const auto& id : g.bus_nodes) gr.nodes.push_back(id);
    gr.nodes.push_back(g.hub);
    gr.nodes.push_back("t");
    gr.start = "s";
    gr.target = "t";
    gr.goal_reward = g.reward;

    // Bus.
    gr.edges.push_back({"s", g.clause_nodes[0], g.f});
    for (int i = 0; i + 1 < m; ++i)
        gr.edges.push_back({g.clause_nodes[i], g.clause_nodes[i + 1], g.f});
    gr.edges.push_back({g.clause_nodes[m - 1], g.bus_nodes[0], g.f});
    for (long j = 0; j + 1 < g.ell; ++j)
        gr.edges.push_back({g.bus_nodes[j], g.bus_nodes[j + 1], g.f});
    Rational last = g.f + g.z - g.f * g.ell;
    if (!(last > 0 && last <= g.f))
        throw Error(Err::RelationViolated, "final bus weight out of range: " + to_string(last));
    gr.edges.push_back({g.bus_nodes[g.ell - 1], "t", last});
    gr.edges.push_back({g.hub, "t", hub_exit});

    // Variable routes to the hub.
    for (int k = 0; k < n; ++k) {
        gr.edges.push_back({g.var_nodes[k], g.var_prime_nodes[k], 1 - beta});
        gr.edges.push_back({g.var_prime_nodes[k], g.hub, rat(0)});
        gr.edges.push_back({g.var_nodes[k], g.hub, rat(0)});
    }

    // Literal edges, deduplicated per (clause, variable); an expensive role
    // wins when the same pair appears with both polarities.
    g.literal_edges.assign(m, {});
    for (int i = 0; i < m; ++i) {
        std::map<int, std::pair<bool, int>> roles;  // var -> (any positive, occurrences)
        for (const auto& lit : f.clauses[i]) {
            auto& r = roles[lit.var];
            r.first = r.first || lit.positive;
            r.second++;
        }
        for (const auto& [var, role] : roles) {
            bool expensive = role.first;
            Rational w = expensive ? rat(2) : Rational(1 + beta);
            int idx = static_cast<int>(gr.edges.size());
            gr.edges.push_back({g.clause_nodes[i], g.var_nodes[var - 1], w});
            g.literal_edges[i].push_back({idx, var, expensive});
            if (role.second > 1)
                g.dedup_notes.push_back("clause " + std::to_string(i + 1) + " variable " +
                                        std::to_string(var) + ": " +
                                        std::to_string(role.second) +
                                        " occurrences merged into one " +
                                        (expensive ? "expensive" : "cheap") + " edge");
        }
    }
    gr.validate();
    return g;
}

Subgraph assignment_to_mms(const MmsGadget& g, const std::vector<bool>& assignment) {
    const Formula3CNF& f = g.formula;
    if (static_cast<int>(assignment.size()) != f.num_vars)
        throw Error(Err::BadParameter, "assignment length mismatch");
    if (!eval_formula(f, assignment))
        throw Error(Err::AssignmentNotSatisfying, "assignment does not satisfy the formula");

    std::set<int> kept;
    for (int e = 0; e < g.graph.edge_count(); ++e) kept.insert(e);
    for (int k = 1; k <= f.num_vars; ++k) {
        if (assignment[k - 1]) {
            kept.erase(g.edge_index(g.var_nodes[k - 1], g.var_prime_nodes[k - 1]));
            kept.erase(g.edge_index(g.var_prime_nodes[k - 1], g.hub));
        } else {
            kept.erase(g.edge_index(g.var_nodes[k - 1], g.hub));
        }
    }
    for (int i = 0; i < f.num_clauses(); ++i) {
        int chosen_var = -1;
        for (const auto& lit : f.clauses[i]) {
            if (assignment[lit.var - 1] != lit.positive) continue;
            // the deduplicated edge must carry this literal's role
            for (const auto& le : g.literal_edges[i])
                if (le.var == lit.var && le.expensive == lit.positive) {
                    chosen_var = lit.var;
                    break;
                }
            if (chosen_var >= 0) break;
        }
        if (chosen_var < 0)
            throw Error(Err::AssignmentNotSatisfying,
                        "clause " + std::to_string(i + 1) +
                            " has no satisfied literal with a matching edge role");
        for (const auto& le : g.literal_edges[i])
            if (le.var != chosen_var) kept.erase(le.edge);
    }

    // Drop nodes left without in-edges (and their out-edges), repeatedly.
    bool changed = true;
    while (changed) {
        changed = false;
        std::map<std::string, int> indeg;
        for (int e : kept) indeg[g.graph.edges[e].to]++;
        std::vector<int> drop;
        for (int e : kept) {
            const std::string& from = g.graph.edges[e].from;
            if (from != g.graph.start && indeg.find(from) == indeg.end()) drop.push_back(e);
        }
        for (int e : drop) {
            kept.erase(e);
            changed = true;
        }
    }
    Subgraph sub;
    sub.parent = &g.graph;
    sub.kept_edges = std::move(kept);
    return sub;
}

std::vector<bool> mms_to_assignment(const MmsGadget& g, const Subgraph& sub) {
    if (sub.parent != &g.graph) throw Error(Err::BadParameter, "subgraph of a different graph");
    if (!is_motivating(sub, g.agent()))
        throw Error(Err::NotMinimalMotivating, "subgraph is not motivating");
    std::vector<bool> asg(g.formula.num_vars, true);
    for (int k = 1; k <= g.formula.num_vars; ++k) {
        bool expensive_path =
            sub.contains_edge(g.edge_index(g.var_nodes[k - 1], g.var_prime_nodes[k - 1])) &&
            sub.contains_edge(g.edge_index(g.var_prime_nodes[k - 1], g.hub));
        asg[k - 1] = !expensive_path;
    }
    if (!eval_formula(g.formula, asg))
        throw Error(Err::NotMinimalMotivating,
                    "extracted assignment does not satisfy the formula");
    return asg;
}

MmsAudit audit_mms_structure(const MmsGadget& g, const Subgraph& sub) {
    MmsAudit audit;
    auto fail = [&](const std::string& msg) {
        audit.ok = false;
        audit.failures.push_back(msg);
    };
    // Full bus.
    std::vector<std::pair<std::string, std::string>> bus;
    bus.emplace_back("s", g.clause_nodes[0]);
    for (size_t i = 0; i + 1 < g.clause_nodes.size(); ++i)
        bus.emplace_back(g.clause_nodes[i], g.clause_nodes[i + 1]);
    bus.emplace_back(g.clause_nodes.back(), g.bus_nodes[0]);
    for (size_t j = 0; j + 1 < g.bus_nodes.size(); ++j)
        bus.emplace_back(g.bus_nodes[j], g.bus_nodes[j + 1]);
    bus.emplace_back(g.bus_nodes.back(), "t");
    for (const auto& [a, b] : bus)
        if (!sub.contains_edge(g.edge_index(a, b))) fail("bus edge missing: " + a + " -> " + b);

    for (size_t i = 0; i < g.clause_nodes.size(); ++i) {
        std::vector<const MmsGadget::LiteralEdge*> kept;
        for (const auto& le : g.literal_edges[i])
            if (sub.contains_edge(le.edge)) kept.push_back(&le);
        if (kept.size() != 1) {
            fail("clause node " + g.clause_nodes[i] + " keeps " + std::to_string(kept.size()) +
                 " off-bus edges");
            continue;
        }
        int var = kept[0]->var;
        bool cheap_route = sub.contains_edge(g.edge_index(g.var_nodes[var - 1], g.hub));
        bool exp_route =
            sub.contains_edge(g.edge_index(g.var_nodes[var - 1], g.var_prime_nodes[var - 1])) &&
            sub.contains_edge(g.edge_index(g.var_prime_nodes[var - 1], g.hub));
        if (cheap_route == exp_route)
            fail("variable node " + g.var_nodes[var - 1] + " keeps " +
                 (cheap_route ? "both hub routes" : "no hub route"));
        else if (kept[0]->expensive == exp_route)
            fail("clause " + std::to_string(i + 1) + " edge and hub route are both " +
                 (exp_route ? "expensive" : "cheap"));
    }
    for (const auto& id : out_degree_violations(sub)) fail("out-degree > 2 at " + id);
    return audit;
}

std::string MtrGadget::a_id(int i, int j) const {
    return "a" + pad_num(i, digits(m)) + "_" + pad_num(j, digits(l));
}
std::string MtrGadget::b_id(int i) const { return "b" + pad_num(i, digits(m)); }
std::string MtrGadget::c_id(int k) const { return "c" + pad_num(k, digits(n)); }
std::string MtrGadget::u_id(int k, bool prime) const {
    return (prime ? "up" : "u") + pad_num(k, digits(n));
}
std::string MtrGadget::v_id(int k, bool prime) const {
    return (prime ? "vp" : "v") + pad_num(k, digits(n));
}

MtrGadget build_mtr_gadget(const Formula3CNF& f, const Rational& beta, int pad_n) {
    if (!(beta > 0 && beta < 1)) throw Error(Err::BadParameter, "gadget requires 0 < beta < 1");
    if (f.num_clauses() < 1) throw Error(Err::BadParameter, "gadget requires at least one clause");
    MtrGadget g;
    g.formula = f;
    g.beta = beta;
    g.n = std::max(f.num_vars, pad_n);
    g.m = f.num_clauses();
    g.x = 1 / beta - 1;
    g.y = g.x / 2;
    g.r_t = rat(12) * g.n - 6 + 6 / beta;
    if (!(g.n * g.x > 2 / beta)) {
        long n_min = to_long(rat_ceil((2 / beta) / g.x)) + 1;
        if (rat(n_min - 1) * g.x > 2 / beta) --n_min;  // ceil landed past a strict boundary
        throw Error(Err::NTooSmall, "need n*x > 2/beta; pad to n >= " + std::to_string(n_min));
    }
    g.l = to_long(rat_ceil((g.n * g.x + 12 * g.n + 6 / beta - 6) / (beta * g.x))) + 1;

    TaskGraph& gr = g.graph;
    gr.name = "mtr-gadget";
    gr.start = "s";
    gr.target = "t";
    gr.nodes.push_back("s");
    for (int i = 1; i <= g.m; ++i) {
        for (long j = 1; j <= g.l; ++j) gr.nodes.push_back(g.a_id(i, static_cast<int>(j)));
        gr.nodes.push_back(g.b_id(i));
    }
    for (int k = 1; k <= g.n; ++k) gr.nodes.push_back(g.c_id(k));
    for (int k = 0; k <= g.n; ++k) gr.nodes.push_back(g.u_id(k, false));
    for (int k = 0; k <= g.n; ++k) gr.nodes.push_back(g.u_id(k, true));
    for (int k = 1; k <= g.n; ++k) gr.nodes.push_back(g.v_id(k, false));
    for (int k = 1; k <= g.n; ++k) gr.nodes.push_back(g.v_id(k, true));
    gr.nodes.push_back("t");

    Rational step = beta * g.x;
    gr.edges.push_back({"s", g.a_id(1, 1), rat(0)});
    for (int i = 1; i <= g.m; ++i) {
        gr.edges.push_back({g.a_id(i, 1), g.b_id(i), rat(0)});
        for (int j = 1; j < g.l; ++j) gr.edges.push_back({g.a_id(i, j), g.a_id(i, j + 1), step});
        if (i < g.m) gr.edges.push_back({g.a_id(i, static_cast<int>(g.l)), g.a_id(i + 1, 1), rat(0)});
    }
    gr.edges.push_back({g.a_id(g.m, static_cast<int>(g.l)), g.c_id(1), rat(0)});
    for (int k = 1; k < g.n; ++k) gr.edges.push_back({g.c_id(k), g.c_id(k + 1), rat(6)});
    gr.edges.push_back({g.c_id(g.n), g.u_id(g.n, false), rat(6)});
    gr.edges.push_back({g.c_id(g.n), g.u_id(g.n, true), rat(6)});
    for (int k = 1; k <= g.n; ++k) {
        gr.edges.push_back({g.u_id(k, false), g.v_id(k, false), g.x});
        gr.edges.push_back({g.u_id(k, true), g.v_id(k, true), g.x});
        gr.edges.push_back({g.v_id(k, false), g.u_id(k - 1, false), rat(6)});
        gr.edges.push_back({g.v_id(k, false), g.u_id(k - 1, true), rat(6)});
        gr.edges.push_back({g.v_id(k, true), g.u_id(k - 1, false), rat(6)});
        gr.edges.push_back({g.v_id(k, true), g.u_id(k - 1, true), rat(6)});
    }
    gr.edges.push_back({g.u_id(0, false), "t", rat(0)});
    gr.edges.push_back({g.u_id(0, true), "t", rat(0)});

    for (int i = 1; i <= g.m; ++i) {
        std::set<int> vars;
        std::set<std::pair<int, bool>> lits;
        for (const auto& lit : f.clauses[i - 1]) {
            vars.insert(lit.var);
            lits.insert({lit.var, lit.positive});
        }
        for (int k : vars) {
            gr.edges.push_back({g.b_id(i), g.u_id(k - 1, false), g.h_k(k)});
            gr.edges.push_back({g.b_id(i), g.u_id(k - 1, true), g.h_k(k)});
        }
        for (const auto& [k, positive] : lits)
            for (int j = 2; j <= g.l; ++j)
                gr.edges.push_back({g.a_id(i, j), g.v_id(k, !positive), g.g_k(k)});
    }
    gr.validate();

    ConstantsReport rep = verify_constants(g);
    if (!rep.all_ok) throw Error(Err::RelationViolated, render_constants_report(rep));
    return g;
}

ConstantsReport verify_constants(const MtrGadget& g) {
    ConstantsReport rep;
    Rational target = g.target_objective();
    auto add = [&](const std::string& name, int k, Rational lhs, const std::string& op,
                   Rational rhs) {
        bool ok = op == ">" ? lhs > rhs : op == "<" ? lhs < rhs : lhs == rhs;
        rep.checks.push_back({name, k, std::move(lhs), std::move(rhs), op, ok});
        rep.all_ok = rep.all_ok && ok;
    };
    const Rational inv_beta = 1 / g.beta;
    add("(3) (l-1)*beta*x > r_t + n*x", 0, Rational((g.l - 1) * g.beta * g.x), ">",
        Rational(g.r_t + g.n * g.x));
    add("(8) 6/beta + 6(n-1) + 6n = r_t", 0, Rational(6 * inv_beta + 6 * (g.n - 1) + 6 * g.n), "=",
        g.r_t);
    for (int k = 1; k <= g.n; ++k) {
        add("(1) h_k/beta + 6(k-1) > n*x + r_t", k, Rational(g.h_k(k) * inv_beta + 6 * (k - 1)),
            ">", target);
        add("(2) g_k/beta + 6k > n*x + r_t", k, Rational(g.g_k(k) * inv_beta + 6 * k), ">", target);
        add("(4) h_k < x + g_k + 6", k, g.h_k(k), "<", Rational(g.x + g.g_k(k) + 6));
        add("(5) g_k + 6k < r_t", k, Rational(g.g_k(k) + 6 * k), "<", g.r_t);
        add("(6) g_k + 6k < h_k + 6(k-1)", k, Rational(g.g_k(k) + 6 * k), "<",
            Rational(g.h_k(k) + 6 * (k - 1)));
        add("(7) beta*x + g_k - x + 6k < r_t", k,
            Rational(g.beta * g.x + g.g_k(k) - g.x + 6 * k), "<", g.r_t);
        add("(9) g_k + 6k < g_k/beta - x + 6k", k, Rational(g.g_k(k) + 6 * k), "<",
            Rational(g.g_k(k) * inv_beta - g.x + 6 * k));
    }
    return rep;
}

std::string render_constants_report(const ConstantsReport& r) {
    std::ostringstream os;
    for (const auto& c : r.checks) {
        os << (c.ok ? "ok   " : "FAIL ") << c.name;
        if (c.k > 0) os << " [k=" << c.k << "]";
        os << ": " << to_string(c.lhs) << " " << c.op << " " << to_string(c.rhs) << "\n";
    }
    os << (r.all_ok ? "all relations hold\n" : "relation violated\n");
    return os.str();
}

RewardConfig assignment_to_rewards(const MtrGadget& g, const std::vector<bool>& assignment) {
    if (static_cast<int>(assignment.size()) != g.formula.num_vars)
        throw Error(Err::BadParameter, "assignment length mismatch");
    if (!eval_formula(g.formula, assignment))
        throw Error(Err::AssignmentNotSatisfying, "assignment does not satisfy the formula");
    RewardConfig rw;
    for (int k = 1; k <= g.n; ++k) {
        bool truthy = k <= g.formula.num_vars && assignment[k - 1];
        rw.rewards[g.v_id(k, !truthy)] = g.x;
    }
    rw.rewards["t"] = g.r_t;
    return rw;
}

std::vector<bool> rewards_to_assignment(const MtrGadget& g, const RewardConfig& rw) {
    AgentConfig cfg;
    cfg.beta = g.beta;
    Trajectory t = simulate_with_rewards(g.graph, cfg, rw);
    if (!t.reached())
        throw Error(Err::InfeasibleRewards, "agent does not reach the target; stops at " + t.stop_node);
    if (rw.total_abs() > g.target_objective())
        throw Error(Err::InfeasibleRewards,
                    "objective " + to_string(rw.total_abs()) + " exceeds " +
                        to_string(g.target_objective()));
    for (int k = 1; k <= g.n; ++k)
        if (rw.at(g.v_id(k, false)) > 0 && rw.at(g.v_id(k, true)) > 0)
            throw Error(Err::InfeasibleRewards,
                        "rewards on both sides of variable " + std::to_string(k));
    std::vector<bool> asg(g.formula.num_vars);
    for (int k = 1; k <= g.formula.num_vars; ++k) asg[k - 1] = rw.at(g.v_id(k, false)) > 0;
    if (!eval_formula(g.formula, asg))
        throw Error(Err::InfeasibleRewards, "extracted assignment does not satisfy the formula");
    return asg;
}

MtrForwardCheck verify_mtr_forward(const MtrGadget& g, const std::vector<bool>& assignment) {
    MtrForwardCheck out;
    auto fail = [&](const std::string& msg) {
        out.ok = false;
        out.failures.push_back(msg);
    };
    RewardConfig rw = assignment_to_rewards(g, assignment);
    AgentConfig cfg;
    cfg.beta = g.beta;
    out.trajectory = simulate_with_rewards(g.graph, cfg, rw);
    out.objective = rw.total_abs();
    if (!out.trajectory.reached()) {
        fail("agent stopped at " + out.trajectory.stop_node);
        return out;
    }
    if (out.objective != g.target_objective())
        fail("objective " + to_string(out.objective) + " != " + to_string(g.target_objective()));
    if (out.trajectory.total_claimed_reward != g.target_objective())
        fail("claimed total " + to_string(out.trajectory.total_claimed_reward) +
             " != " + to_string(g.target_objective()));

    std::map<std::string, std::string> next;
    for (size_t i = 0; i + 1 < out.trajectory.nodes.size(); ++i)
        next[out.trajectory.nodes[i]] = out.trajectory.nodes[i + 1];
    auto leads = [&](const std::string& a, const std::string& b, const std::string& what) {
        auto it = next.find(a);
        if (it == next.end())
            fail(what + ": " + a + " not on the trajectory");
        else if (it->second != b)
            fail(what + ": " + a + " leads to " + it->second + ", expected " + b);
    };
    auto side = [&](int k) { return !(k <= g.formula.num_vars && assignment[k - 1]); };

    leads("s", g.a_id(1, 1), "statement 1");
    for (int i = 1; i <= g.m; ++i) leads(g.a_id(i, 1), g.a_id(i, 2), "statement 2");
    for (int i = 1; i <= g.m; ++i)
        for (int j = 2; j < g.l; ++j) leads(g.a_id(i, j), g.a_id(i, j + 1), "statement 3");
    for (int i = 1; i < g.m; ++i)
        leads(g.a_id(i, static_cast<int>(g.l)), g.a_id(i + 1, 1), "statement 4");
    leads(g.a_id(g.m, static_cast<int>(g.l)), g.c_id(1), "statement 5");
    for (int k = 1; k < g.n; ++k) leads(g.c_id(k), g.c_id(k + 1), "statement 6");
    leads(g.c_id(g.n), g.u_id(g.n, side(g.n)), "statement 7");
    for (int k = g.n; k >= 1; --k) {
        leads(g.u_id(k, side(k)), g.v_id(k, side(k)), "statement 8");
        if (k > 1) leads(g.v_id(k, side(k)), g.u_id(k - 1, side(k - 1)), "statement 8");
    }
    auto last = next.find(g.v_id(1, side(1)));
    if (last == next.end())
        fail("statement 8: " + g.v_id(1, side(1)) + " not on the trajectory");
    else if (last->second != g.u_id(0, false) && last->second != g.u_id(0, true))
        fail("statement 8: descent does not end at a terminal pair node");
    else
        leads(last->second, "t", "statement 8");

    // Adjusted distances along the rewarded chain equal 6k.
    RewardAdjustedDist rd(g.graph, rw);
    for (int k = 1; k <= g.n; ++k) {
        for (std::string id : {g.v_id(k, side(k)), g.u_id(k, side(k))}) {
            const auto& d = rd.at(g.graph.index_of(id));
            if (!d || *d + g.r_t != rat(6) * k)
                fail("adjusted distance at " + id + " is not " + to_string(rat(6) * k));
        }
    }
    return out;
}

}  // namespace tip
