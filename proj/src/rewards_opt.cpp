#include "tip/rewards_opt.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "tip/lp.hpp"

namespace tip {

namespace {

void check_variant_static(const MtrInstance& inst, const RewardConfig& rw) {
    if (inst.variant == MtrVariant::I || inst.variant == MtrVariant::II) {
        for (const auto& [node, r] : rw.rewards)
            if (r < 0)
                throw Error(Err::VariantViolation, "negative reward on " + node);
    }
}

void check_variant_path(const MtrInstance& inst, const RewardConfig& rw, const Trajectory& t) {
    if (inst.variant != MtrVariant::II) return;
    std::set<std::string> on_path(t.nodes.begin(), t.nodes.end());
    for (const auto& [node, r] : rw.rewards)
        if (r != 0 && !on_path.count(node))
            throw Error(Err::VariantViolation, "variant II reward off the realized path: " + node);
}

}  // namespace

std::optional<MtrSolution> check_feasible(const MtrInstance& inst, const RewardConfig& rw) {
    check_variant_static(inst, rw);
    AgentConfig cfg;
    cfg.beta = inst.beta;
    Trajectory t = simulate_with_rewards(inst.graph, cfg, rw);
    if (!t.reached()) return std::nullopt;
    check_variant_path(inst, rw, t);
    Rational obj = rw.total_abs();
    if (inst.bound && obj > *inst.bound) return std::nullopt;
    MtrSolution sol;
    sol.rewards = rw;
    sol.trajectory = std::move(t);
    sol.objective = obj;
    return sol;
}

namespace {

// A u->t path as the node sequence it visits after u (heads of its edges),
// plus the cost split the biased agent perceives.
struct PathInfo {
    int first_to = -1;          // node index the first edge enters
    Rational first_cost;        // c(e1)
    Rational rest_cost;         // sum of later edge costs
    std::vector<int> tail;      // node indexes strictly after u (includes t)
};

class PathCatalog {
  public:
    PathCatalog(const TaskGraph& g, long long cap) : g_(g), cap_(cap) {}

    // All u->t paths, lexicographic by successor ids. Throws BudgetExceeded
    // past the cap.
    const std::vector<PathInfo>& from(int u) {
        auto it = cache_.find(u);
        if (it != cache_.end()) return it->second;
        std::vector<PathInfo> acc;
        PathInfo cur;
        dfs(u, cur, acc);
        return cache_.emplace(u, std::move(acc)).first->second;
    }

  private:
    void dfs(int u, PathInfo& prefix, std::vector<PathInfo>& acc) {
        if (u == g_.target_index()) {
            if (static_cast<long long>(acc.size()) >= cap_)
                throw Error(Err::BudgetExceeded, "path enumeration cap exceeded");
            acc.push_back(prefix);
            return;
        }
        for (int e : g_.out_edges(u)) {
            int v = g_.index_of(g_.edges[e].to);
            PathInfo next = prefix;
            if (next.first_to < 0) {
                next.first_to = v;
                next.first_cost = g_.edges[e].cost;
            } else {
                next.rest_cost += g_.edges[e].cost;
            }
            next.tail.push_back(v);
            dfs(v, next, acc);
        }
    }

    const TaskGraph& g_;
    long long cap_;
    std::map<int, std::vector<PathInfo>> cache_;
};

struct LpShape {
    std::vector<int> var_nodes;        // node index per reward variable
    std::map<int, int> var_of_node;
    bool split = false;                // variant III: columns are p_0..,n_0..
    int columns() const { return split ? 2 * static_cast<int>(var_nodes.size())
                                       : static_cast<int>(var_nodes.size()); }
    // coefficient row for "beta * sum of rewards over path tail"
    void add_tail(std::vector<Rational>& row, const PathInfo& p, const Rational& beta,
                  const Rational& sign) const {
        for (int v : p.tail) {
            auto it = var_of_node.find(v);
            if (it == var_of_node.end()) continue;  // fixed to zero
            int j = it->second;
            if (split) {
                row[j] += sign * beta;
                row[j + var_nodes.size()] -= sign * beta;
            } else {
                row[j] += sign * beta;
            }
        }
    }
};

// c'(Q) = first_cost + beta*rest_cost - beta*sum, so c'(W) <= c'(Q) becomes
//   beta*sum_Q(r) - beta*sum_W(r) <= const(Q) - const(W).
Rational path_const(const PathInfo& p, const Rational& beta) {
    return p.first_cost + beta * p.rest_cost;
}

struct ComboLp {
    LinearProgram lp;
    LpShape shape;
    // rows whose slack must become strict for a clean tie-free optimum:
    std::vector<int> separable_rows;
};

ComboLp build_combo_lp(const TaskGraph& g, const Rational& beta, MtrVariant variant,
                       const std::vector<int>& traj_nodes,  // node indexes along P, s first
                       const std::vector<const PathInfo*>& witnesses,
                       PathCatalog& catalog, const std::vector<int>& relevant) {
    ComboLp out;
    LpShape& shape = out.shape;
    if (variant == MtrVariant::II) {
        for (size_t i = 1; i < traj_nodes.size(); ++i) shape.var_nodes.push_back(traj_nodes[i]);
    } else {
        shape.var_nodes = relevant;
    }
    std::sort(shape.var_nodes.begin(), shape.var_nodes.end());
    for (int i = 0; i < static_cast<int>(shape.var_nodes.size()); ++i)
        shape.var_of_node[shape.var_nodes[i]] = i;
    shape.split = variant == MtrVariant::III;

    LinearProgram& lp = out.lp;
    lp.num_vars = shape.columns();
    lp.objective.assign(lp.num_vars, rat(1));  // sum r (I/II) or sum p+n (III)

    for (size_t i = 0; i + 1 < traj_nodes.size(); ++i) {
        const PathInfo& w = *witnesses[i];
        // continue: c'(W) <= 0
        std::vector<Rational> row(lp.num_vars, rat(0));
        shape.add_tail(row, w, beta, rat(-1));
        lp.add_row(std::move(row), -path_const(w, beta));
        // choice: c'(W) <= c'(Q) for every path Q from this node
        for (const PathInfo& q : catalog.from(traj_nodes[i])) {
            if (&q == &w) continue;
            std::vector<Rational> r2(lp.num_vars, rat(0));
            shape.add_tail(r2, q, beta, rat(1));
            shape.add_tail(r2, w, beta, rat(-1));
            lp.add_row(std::move(r2), path_const(q, beta) - path_const(w, beta));
            if (q.first_to != w.first_to)
                out.separable_rows.push_back(static_cast<int>(lp.rows.size()) - 1);
        }
    }
    return out;
}

RewardConfig extract_rewards(const TaskGraph& g, const LpShape& shape,
                             const std::vector<Rational>& x) {
    RewardConfig rw;
    int n = static_cast<int>(shape.var_nodes.size());
    for (int i = 0; i < n; ++i) {
        Rational v = shape.split ? Rational(x[i] - x[i + n]) : x[i];
        if (v != 0) rw.rewards[g.nodes[shape.var_nodes[i]]] = v;
    }
    return rw;
}

}  // namespace

std::optional<MtrSolution> solve_exact(const MtrInstance& inst, const SolveBudget& budget) {
    const TaskGraph& g = inst.graph;
    if (!dist(g, g.start, g.target))
        throw Error(Err::TargetUnreachable, "no path from start to target");

    // Nodes that can carry a useful reward: on some s->t path, excluding s.
    std::vector<int> relevant;
    {
        DistTable to_t(g, g.target_index());
        std::vector<char> from_s(g.node_count(), 0);
        std::vector<int> stack{g.start_index()};
        from_s[g.start_index()] = 1;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int e : g.out_edges(u)) {
                int v = g.index_of(g.edges[e].to);
                if (!from_s[v]) {
                    from_s[v] = 1;
                    stack.push_back(v);
                }
            }
        }
        for (int v = 0; v < g.node_count(); ++v)
            if (v != g.start_index() && from_s[v] && to_t.reachable(v)) relevant.push_back(v);
    }

    PathCatalog catalog(g, budget.max_paths_per_node);
    long long lp_solves = 0;
    bool complete = true;

    struct Best {
        Rational objective;
        RewardConfig rewards;
        std::vector<int> traj_nodes;
        std::vector<const PathInfo*> witnesses;
        ComboLp combo;
    };
    std::optional<Best> best;

    for (const PathInfo& traj : catalog.from(g.start_index())) {
        std::vector<int> nodes_along;
        nodes_along.push_back(g.start_index());
        for (int v : traj.tail) nodes_along.push_back(v);

        // Witness choices per step: paths sharing the trajectory's edge there.
        std::vector<std::vector<const PathInfo*>> options(nodes_along.size() - 1);
        bool viable = true;
        for (size_t i = 0; i + 1 < nodes_along.size(); ++i) {
            for (const PathInfo& q : catalog.from(nodes_along[i]))
                if (q.first_to == nodes_along[i + 1]) options[i].push_back(&q);
            if (options[i].empty()) viable = false;
        }
        if (!viable) continue;

        std::vector<size_t> pick(options.size(), 0);
        while (true) {
            if (lp_solves >= budget.max_lp_solves) {
                complete = false;
                break;
            }
            std::vector<const PathInfo*> witnesses;
            for (size_t i = 0; i < options.size(); ++i) witnesses.push_back(options[i][pick[i]]);
            ComboLp combo =
                build_combo_lp(g, inst.beta, inst.variant, nodes_along, witnesses, catalog, relevant);
            ++lp_solves;
            LpResult res = solve_lp(combo.lp);
            if (res.status == LpResult::Status::Optimal) {
                if (!best || res.objective < best->objective) {
                    Best b;
                    b.objective = res.objective;
                    b.rewards = extract_rewards(g, combo.shape, res.x);
                    b.traj_nodes = nodes_along;
                    b.witnesses = witnesses;
                    b.combo = std::move(combo);
                    best = std::move(b);
                }
            }
            // next combination
            size_t k = 0;
            while (k < pick.size() && ++pick[k] == options[k].size()) {
                pick[k] = 0;
                ++k;
            }
            if (k == pick.size()) break;
            if (pick.empty()) break;
        }
        if (!complete) break;
    }

    if (!best) return std::nullopt;

    MtrSolution sol;
    sol.objective = best->objective;
    sol.rewards = best->rewards;
    sol.optimal = complete;

    AgentConfig lex;
    lex.beta = inst.beta;
    auto validate = [&](const RewardConfig& rw, Trajectory* out) {
        Trajectory t = simulate_with_rewards(g, lex, rw);
        if (!t.reached()) return false;
        if (inst.variant == MtrVariant::II) {
            std::set<std::string> on_path(t.nodes.begin(), t.nodes.end());
            for (const auto& [node, r] : rw.rewards)
                if (r != 0 && !on_path.count(node)) return false;
        }
        *out = std::move(t);
        return true;
    };
    if (!validate(sol.rewards, &sol.trajectory)) {
        // Push the same-objective solution strictly inside the tie region.
        LinearProgram lp2 = best->combo.lp;
        int eps = lp2.num_vars;  // one extra column
        lp2.num_vars += 1;
        for (auto& row : lp2.rows) row.push_back(rat(0));
        for (int ridx : best->combo.separable_rows) lp2.rows[ridx][eps] = rat(1);
        std::vector<Rational> obj_row(lp2.num_vars, rat(1));
        obj_row[eps] = rat(0);
        lp2.add_row(std::move(obj_row), best->objective);  // keep the optimum
        std::vector<Rational> eps_cap(lp2.num_vars, rat(0));
        eps_cap[eps] = rat(1);
        lp2.add_row(std::move(eps_cap), rat(1));
        lp2.objective.assign(lp2.num_vars, rat(0));
        lp2.objective[eps] = rat(-1);  // maximize eps
        LpResult r2 = solve_lp(lp2);
        bool fixed = false;
        if (r2.status == LpResult::Status::Optimal && -r2.objective > 0) {
            r2.x.pop_back();
            RewardConfig rw2 = extract_rewards(g, best->combo.shape, r2.x);
            if (validate(rw2, &sol.trajectory)) {
                sol.rewards = rw2;
                fixed = true;
            }
        }
        if (!fixed) {
            // Optimum genuinely needs ties broken toward the plan.
            AgentConfig fav;
            fav.beta = inst.beta;
            fav.tie_break = TieBreak::Custom;
            for (int v : best->traj_nodes) fav.custom_order.push_back(g.nodes[v]);
            Trajectory t = simulate_with_rewards(g, fav, sol.rewards);
            if (!t.reached())
                throw Error(Err::PreconditionViolated,
                            "solver witness does not re-simulate under plan-favoring ties");
            sol.trajectory = std::move(t);
            sol.used_tie_preference = true;
        }
    }
    return sol;
}

std::optional<Rational> grid_oracle(const MtrInstance& inst, const Rational& delta,
                                    const Rational& cap) {
    const TaskGraph& g = inst.graph;
    if (!(delta > 0) || cap < 0) throw Error(Err::BadParameter, "grid oracle needs delta > 0, cap >= 0");
    std::vector<std::string> nodes;
    {
        DistTable to_t(g, g.target_index());
        std::vector<char> from_s(g.node_count(), 0);
        std::vector<int> stack{g.start_index()};
        from_s[g.start_index()] = 1;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int e : g.out_edges(u)) {
                int v = g.index_of(g.edges[e].to);
                if (!from_s[v]) {
                    from_s[v] = 1;
                    stack.push_back(v);
                }
            }
        }
        for (int v = 0; v < g.node_count(); ++v)
            if (v != g.start_index() && from_s[v] && to_t.reachable(v)) nodes.push_back(g.nodes[v]);
    }
    long steps = to_long(rat_ceil(cap / delta));
    std::vector<Rational> values;
    values.push_back(rat(0));
    for (long i = 1; i <= steps; ++i) {
        Rational v = i * delta;
        if (v > cap) break;
        values.push_back(v);
        if (inst.variant == MtrVariant::III) values.push_back(-v);
    }

    AgentConfig cfg;
    cfg.beta = inst.beta;
    std::optional<Rational> best;
    std::vector<size_t> pick(nodes.size(), 0);
    while (true) {
        RewardConfig rw;
        for (size_t i = 0; i < nodes.size(); ++i)
            if (values[pick[i]] != 0) rw.rewards[nodes[i]] = values[pick[i]];
        Rational obj = rw.total_abs();
        if ((!best || obj < *best) && (!inst.bound || obj <= *inst.bound)) {
            Trajectory t = simulate_with_rewards(g, cfg, rw);
            bool ok = t.reached();
            if (ok && inst.variant == MtrVariant::II) {
                std::set<std::string> on_path(t.nodes.begin(), t.nodes.end());
                for (const auto& [node, r] : rw.rewards)
                    if (r != 0 && !on_path.count(node)) ok = false;
            }
            if (ok && (!best || obj < *best)) best = obj;
        }
        size_t k = 0;
        while (k < pick.size() && ++pick[k] == values.size()) {
            pick[k] = 0;
            ++k;
        }
        if (k == pick.size()) break;
        if (pick.empty()) break;
    }
    return best;
}

std::pair<bool, bool> continue_checks(const TaskGraph& g, const RewardConfig& rw,
                                      const Rational& beta, const std::string& node) {
    int u = g.index_of(node);
    RewardAdjustedDist rd(g, rw);
    std::optional<Rational> biased;   // min over paths of c'(Q)
    std::optional<Rational> scaled;   // min over paths of beta^{-1} c(e1) + later costs - rewards
    for (int e : g.out_edges(u)) {
        int v = g.index_of(g.edges[e].to);
        if (!rd.at(v)) continue;
        Rational tail = *rd.at(v) - rw.at(g.edges[e].to);
        Rational b = g.edges[e].cost + beta * tail;
        Rational s = g.edges[e].cost / beta + tail;
        if (!biased || b < *biased) biased = b;
        if (!scaled || s < *scaled) scaled = s;
    }
    bool first = biased && *biased <= 0;
    bool second = scaled && *scaled <= 0;
    return {first, second};
}

std::string render_solution(const MtrSolution& sol) {
    std::ostringstream os;
    os << render_rewards(sol.rewards);
    os << "objective " << to_string(sol.objective) << "\n";
    os << "optimal " << (sol.optimal ? "true" : "false") << "\n";
    if (sol.used_tie_preference) os << "tie-preference used\n";
    return os.str();
}

}  // namespace tip
