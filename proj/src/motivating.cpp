#include "tip/motivating.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

namespace tip {

bool is_motivating(const Subgraph& sub, const AgentConfig& cfg) {
    if (!cfg.goal_reward) throw Error(Err::BadParameter, "goal reward required");
    TaskGraph ind = sub.induced();
    try {
        return simulate_with_goal_reward(ind, cfg).reached();
    } catch (const Error& e) {
        if (e.code() == Err::TargetUnreachable) return false;
        throw;
    }
}

namespace {

// Exhaustive motivating-subgraph search over one base edge set.
//
// Pre-analysis shrinks the space without losing any motivating subgraph:
//  - only edges on some s->t path of the base can influence the walk or any
//    evaluation, so candidates live inside that universe;
//  - deletions only raise distances, so a node where even the optimistic
//    (whole-universe) distances push every option above beta*r abandons the
//    agent in every candidate. The walked path must avoid such nodes and use
//    only edges whose optimistic value fits under beta*r. An edge on every
//    such surviving s->t path is pinned into all candidates.
// Candidates are forced ∪ (subset of the remaining optional edges), and each
// one is canonicalized to its live part (edges still on an s->t path) before
// simulation, so structurally equal candidates share one memoized verdict.
// Per-node distance and outcome memos are keyed by the forward-reachable slice
// of the optional mask.
class Engine {
  public:
    Engine(const TaskGraph& g, const AgentConfig& cfg, std::vector<int> base_edges,
           SearchStats* stats, long long budget)
        : g_(g), cfg_(cfg), base_(std::move(base_edges)), stats_(stats), budget_(budget) {
        if (!cfg.goal_reward) throw Error(Err::BadParameter, "goal reward required");
        threshold_ = cfg.beta * (*cfg.goal_reward);
        analyze();
    }

    bool no_survivable_path() const { return no_survivable_path_; }
    const std::vector<int>& optional_edges() const { return optional_; }
    const std::vector<int>& forced_edges() const { return forced_list_; }
    std::uint64_t full_mask() const { return optional_.empty() ? 0 : (~0ull >> (64 - optional_.size())); }

    bool verdict(std::uint64_t mask) {
        Canon c = canonical(mask);
        if (!c.connected) return false;
        return verdict_live(c.live);
    }

    // Decreasing-size sweep over optional subsets; first hit wins.
    std::optional<std::uint64_t> enumerate() {
        const int nbits = static_cast<int>(optional_.size());
        for (int size = nbits; size >= 0; --size) {
            if (size == 0) {
                stats_->subsets_explored++;
                if (verdict(0)) return std::uint64_t{0};
                break;
            }
            std::uint64_t m = (1ull << size) - 1;
            while (true) {
                stats_->subsets_explored++;
                if (verdict(m)) return m;
                std::uint64_t c = m & -m;  // Gosper: next mask of equal popcount
                std::uint64_t r = m + c;
                std::uint64_t next = (((r ^ m) >> 2) / c) | r;
                if (nbits >= 64 || next >= (1ull << nbits)) break;
                m = next;
            }
        }
        return std::nullopt;
    }

    // Decision mode: walk-guided deletion probes first (they do not change the
    // answer, only the exploration order), exhaustive sweep as the authority.
    bool contains_motivating() {
        if (no_survivable_path_) return false;
        std::uint64_t full = full_mask();
        stats_->subsets_explored++;
        if (verdict(full)) return true;
        std::set<std::uint64_t> seen{full};
        std::vector<std::uint64_t> stack{full};
        long long probe_cap = 64 + 4 * static_cast<long long>(optional_.size()) *
                                       static_cast<long long>(optional_.size());
        while (!stack.empty() && probe_cap > 0) {
            std::uint64_t m = stack.back();
            stack.pop_back();
            auto [reached, trace] = walk_trace(m);
            if (reached) return true;
            // Deleting an edge the agent actually walked is the only single
            // deletion that can reroute it; try those, newest decision first.
            for (auto it = trace.rbegin(); it != trace.rend(); ++it) {
                int bit = edge_bit(*it);
                if (bit < 0) continue;  // pinned edge
                std::uint64_t next = m & ~(1ull << bit);
                if (seen.insert(next).second) {
                    --probe_cap;
                    stats_->subsets_explored++;
                    if (verdict(next)) return true;
                    stack.push_back(next);
                }
            }
        }
        return enumerate().has_value();
    }

  private:
    struct Canon {
        std::uint64_t live;
        bool connected;
    };

    int edge_bit(int edge_id) const {
        auto it = opt_bit_.find(edge_id);
        return it == opt_bit_.end() ? -1 : it->second;
    }

    bool present(int edge_id, std::uint64_t mask) const {
        if (forced_[edge_id]) return true;
        auto it = opt_bit_.find(edge_id);
        return it != opt_bit_.end() && (mask >> it->second & 1);
    }

    // Reachability over base edges passing `ok`, via the parent adjacency.
    std::vector<char> reach(int from, bool forward, const std::vector<char>& ok) const {
        std::vector<char> vis(g_.node_count(), 0);
        std::vector<int> stack{from};
        vis[from] = 1;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            const auto& edges = forward ? g_.out_edges(u) : g_.in_edges(u);
            for (int e : edges) {
                if (!ok[e]) continue;
                int b = forward ? head_[e] : tail_[e];
                if (!vis[b]) {
                    vis[b] = 1;
                    stack.push_back(b);
                }
            }
        }
        return vis;
    }

    void analyze();
    Canon canonical(std::uint64_t mask) const;
    bool verdict_live(std::uint64_t live);
    bool walk_from(int node, std::uint64_t mask);
    int choose(int node, std::uint64_t mask);
    std::optional<Rational> dval(int node, std::uint64_t mask);

    std::pair<bool, std::vector<int>> walk_trace(std::uint64_t mask) {
        std::vector<int> trace;
        int u = g_.start_index();
        while (u != g_.target_index()) {
            int e = choose(u, mask);
            if (e < 0) return {false, trace};
            trace.push_back(e);
            u = head_[e];
        }
        return {true, trace};
    }

    const TaskGraph& g_;
    AgentConfig cfg_;
    std::vector<int> base_;
    SearchStats* stats_;
    long long budget_;
    Rational threshold_;

    std::vector<int> head_, tail_;       // per edge id
    std::vector<char> forced_;           // per edge id
    std::vector<int> forced_list_;       // lex order
    std::vector<int> optional_;          // lex order; index = bit
    std::unordered_map<int, int> opt_bit_;
    std::vector<std::vector<int>> adj_;  // per node: universe out-edges, sorted by target id
    std::vector<std::uint64_t> fwd_opt_; // per node: optional bits forward-reachable in universe
    bool no_survivable_path_ = false;

    // liveness machinery over dynamic nodes (optional-edge endpoints + s,t)
    std::vector<int> opt_tail_dyn_, opt_head_dyn_;   // per optional bit
    std::vector<std::uint64_t> closure_fwd_, closure_bwd_;  // per dyn bit, via forced edges
    std::uint64_t s_seed_ = 0, t_seed_ = 0;
    int t_dyn_ = -1;

    std::vector<std::unordered_map<std::uint64_t, std::optional<Rational>>> dmemo_;
    std::vector<std::unordered_map<std::uint64_t, char>> vmemo_;
    std::unordered_map<std::uint64_t, char> sim_memo_;
};

void Engine::analyze() {
    const int V = g_.node_count();
    const int E = g_.edge_count();
    head_.assign(E, -1);
    tail_.assign(E, -1);
    for (int e = 0; e < E; ++e) {
        tail_[e] = g_.index_of(g_.edges[e].from);
        head_[e] = g_.index_of(g_.edges[e].to);
    }
    std::vector<char> in_base(E, 0);
    for (int e : base_) in_base[e] = 1;

    std::vector<char> from_s = reach(g_.start_index(), true, in_base);
    std::vector<char> to_t = reach(g_.target_index(), false, in_base);
    std::vector<char> in_universe(E, 0);
    std::vector<int> universe;
    for (int e = 0; e < E; ++e)
        if (in_base[e] && from_s[tail_[e]] && to_t[head_[e]]) {
            in_universe[e] = 1;
            universe.push_back(e);
        }

    adj_.assign(V, {});
    for (int e : universe) adj_[tail_[e]].push_back(e);
    for (auto& lst : adj_)
        std::sort(lst.begin(), lst.end(),
                  [&](int a, int b) { return g_.edges[a].to < g_.edges[b].to; });

    // Optimistic distances within the universe.
    std::vector<std::optional<Rational>> dist_lo(V);
    dist_lo[g_.target_index()] = rat(0);
    const auto& order = g_.topo_order();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int u = *it;
        if (u == g_.target_index()) continue;
        for (int e : adj_[u]) {
            if (!dist_lo[head_[e]]) continue;
            Rational cand = g_.edges[e].cost + *dist_lo[head_[e]];
            if (!dist_lo[u] || cand < *dist_lo[u]) dist_lo[u] = cand;
        }
    }

    // Nodes that abandon in every candidate, and edges no continuing agent can
    // ever take.
    std::vector<char> death(V, 1);
    death[g_.target_index()] = 0;
    std::vector<char> walkable(E, 0);
    for (int u = 0; u < V; ++u) {
        if (u == g_.target_index()) continue;
        for (int e : adj_[u]) {
            if (!dist_lo[head_[e]]) continue;
            if (g_.edges[e].cost + cfg_.beta * (*dist_lo[head_[e]]) <= threshold_) {
                walkable[e] = 1;
                death[u] = 0;
            }
        }
    }
    std::vector<char> survivable(E, 0);
    for (int e : universe)
        if (walkable[e] && !death[tail_[e]] && !death[head_[e]]) survivable[e] = 1;

    auto surv_connects = [&](int skip_edge) {
        std::vector<char> ok = survivable;
        if (skip_edge >= 0) ok[skip_edge] = 0;
        return reach(g_.start_index(), true, ok)[g_.target_index()] == 1;
    };
    no_survivable_path_ = !surv_connects(-1);

    forced_.assign(E, 0);
    forced_list_.clear();
    optional_.clear();
    if (!no_survivable_path_) {
        for (int e : universe)
            if (survivable[e] && !surv_connects(e)) forced_[e] = 1;
    }
    for (int e : universe)
        (forced_[e] ? forced_list_ : optional_).push_back(e);
    auto lex = [&](int a, int b) {
        return std::tie(g_.edges[a].from, g_.edges[a].to) <
               std::tie(g_.edges[b].from, g_.edges[b].to);
    };
    std::sort(optional_.begin(), optional_.end(), lex);
    std::sort(forced_list_.begin(), forced_list_.end(), lex);
    if (optional_.size() > 63)
        throw Error(Err::BudgetExceeded,
                    "exhaustive search space too large: " + std::to_string(optional_.size()) +
                        " optional edges (limit 63)");
    opt_bit_.clear();
    for (int i = 0; i < static_cast<int>(optional_.size()); ++i) opt_bit_[optional_[i]] = i;

    fwd_opt_.assign(V, 0);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int u = *it;
        std::uint64_t m = 0;
        for (int e : adj_[u]) {
            int bit = edge_bit(e);
            if (bit >= 0) m |= 1ull << bit;
            m |= fwd_opt_[head_[e]];
        }
        fwd_opt_[u] = m;
    }

    // Dynamic nodes and forced-edge closures for the fast liveness fixpoint.
    std::set<int> dyn{g_.start_index(), g_.target_index()};
    for (int e : optional_) {
        dyn.insert(tail_[e]);
        dyn.insert(head_[e]);
    }
    std::vector<int> dyn_nodes(dyn.begin(), dyn.end());
    if (dyn_nodes.size() > 64)
        throw Error(Err::BudgetExceeded, "too many endpoints in the optional universe");
    std::unordered_map<int, int> dyn_index;
    for (int i = 0; i < static_cast<int>(dyn_nodes.size()); ++i) dyn_index[dyn_nodes[i]] = i;
    t_dyn_ = dyn_index[g_.target_index()];

    std::vector<char> forced_ok(E, 0);
    for (int e : forced_list_) forced_ok[e] = 1;
    closure_fwd_.assign(dyn_nodes.size(), 0);
    closure_bwd_.assign(dyn_nodes.size(), 0);
    for (int i = 0; i < static_cast<int>(dyn_nodes.size()); ++i) {
        std::vector<char> visf = reach(dyn_nodes[i], true, forced_ok);
        std::vector<char> visb = reach(dyn_nodes[i], false, forced_ok);
        for (int j = 0; j < static_cast<int>(dyn_nodes.size()); ++j) {
            if (visf[dyn_nodes[j]]) closure_fwd_[i] |= 1ull << j;
            if (visb[dyn_nodes[j]]) closure_bwd_[i] |= 1ull << j;
        }
    }
    s_seed_ = closure_fwd_[dyn_index[g_.start_index()]];
    t_seed_ = closure_bwd_[t_dyn_];
    opt_tail_dyn_.clear();
    opt_head_dyn_.clear();
    for (int e : optional_) {
        opt_tail_dyn_.push_back(dyn_index[tail_[e]]);
        opt_head_dyn_.push_back(dyn_index[head_[e]]);
    }

    dmemo_.assign(V, {});
    vmemo_.assign(V, {});
    sim_memo_.clear();
}

Engine::Canon Engine::canonical(std::uint64_t mask) const {
    std::uint64_t R = s_seed_;
    for (bool grew = true; grew;) {
        grew = false;
        for (std::uint64_t m = mask; m;) {
            int bit = __builtin_ctzll(m);
            m &= m - 1;
            if (!(R >> opt_tail_dyn_[bit] & 1)) continue;
            std::uint64_t add = closure_fwd_[opt_head_dyn_[bit]];
            if ((R | add) != R) {
                R |= add;
                grew = true;
            }
        }
    }
    std::uint64_t C = t_seed_;
    for (bool grew = true; grew;) {
        grew = false;
        for (std::uint64_t m = mask; m;) {
            int bit = __builtin_ctzll(m);
            m &= m - 1;
            if (!(C >> opt_head_dyn_[bit] & 1)) continue;
            std::uint64_t add = closure_bwd_[opt_tail_dyn_[bit]];
            if ((C | add) != C) {
                C |= add;
                grew = true;
            }
        }
    }
    Canon c;
    c.connected = (R >> t_dyn_) & 1;
    c.live = 0;
    for (std::uint64_t m = mask; m;) {
        int bit = __builtin_ctzll(m);
        m &= m - 1;
        if ((R >> opt_tail_dyn_[bit] & 1) && (C >> opt_head_dyn_[bit] & 1)) c.live |= 1ull << bit;
    }
    return c;
}

bool Engine::verdict_live(std::uint64_t live) {
    auto it = sim_memo_.find(live);
    if (it != sim_memo_.end()) return it->second;
    if (stats_->oracle_calls >= budget_)
        throw Error(Err::BudgetExceeded, "simulation budget exhausted");
    stats_->oracle_calls++;
    bool out = walk_from(g_.start_index(), live);
    sim_memo_.emplace(live, out);
    return out;
}

std::optional<Rational> Engine::dval(int node, std::uint64_t mask) {
    std::uint64_t key = mask & fwd_opt_[node];
    auto it = dmemo_[node].find(key);
    if (it != dmemo_[node].end()) return it->second;
    std::optional<Rational> best;
    if (node == g_.target_index()) {
        best = rat(0);
    } else {
        for (int e : adj_[node]) {
            if (!present(e, mask)) continue;
            auto dv = dval(head_[e], mask);
            if (!dv) continue;
            Rational cand = g_.edges[e].cost + *dv;
            if (!best || cand < *best) best = cand;
        }
    }
    dmemo_[node].emplace(key, best);
    return best;
}

int Engine::choose(int node, std::uint64_t mask) {
    std::optional<Rational> best;
    std::vector<int> mins;
    for (int e : adj_[node]) {  // sorted by target id: lexicographic default
        if (!present(e, mask)) continue;
        auto dv = dval(head_[e], mask);
        if (!dv) continue;
        Rational val = g_.edges[e].cost + cfg_.beta * (*dv);
        if (!best || val < *best) {
            best = val;
            mins.assign(1, e);
        } else if (val == *best) {
            mins.push_back(e);
        }
    }
    if (!best || *best > threshold_) return -1;
    if (mins.size() > 1 && cfg_.tie_break == TieBreak::Procrastinate) {
        auto du = dval(node, mask);
        for (int e : mins)
            if (*dval(head_[e], mask) + g_.edges[e].cost > *du) return e;
    } else if (mins.size() > 1 && cfg_.tie_break == TieBreak::Custom) {
        auto rank = [&](int e) {
            const std::string& id = g_.edges[e].to;
            auto it = std::find(cfg_.custom_order.begin(), cfg_.custom_order.end(), id);
            return it == cfg_.custom_order.end()
                       ? cfg_.custom_order.size()
                       : static_cast<size_t>(it - cfg_.custom_order.begin());
        };
        int pick = mins.front();
        size_t best_rank = rank(pick);
        for (int e : mins)
            if (rank(e) < best_rank) {
                best_rank = rank(e);
                pick = e;
            }
        return pick;
    }
    return mins.front();
}

bool Engine::walk_from(int node, std::uint64_t mask) {
    if (node == g_.target_index()) return true;
    std::uint64_t key = mask & fwd_opt_[node];
    auto it = vmemo_[node].find(key);
    if (it != vmemo_[node].end()) return it->second;
    int e = choose(node, mask);
    bool out = e >= 0 && walk_from(head_[e], mask);
    vmemo_[node].emplace(key, out);
    return out;
}

std::vector<int> all_edge_ids(const TaskGraph& g) {
    std::vector<int> ids(g.edge_count());
    for (int i = 0; i < g.edge_count(); ++i) ids[i] = i;
    return ids;
}

Subgraph make_subgraph(const TaskGraph& g, const std::vector<int>& edges) {
    Subgraph sub;
    sub.parent = &g;
    sub.kept_edges.insert(edges.begin(), edges.end());
    return sub;
}

bool contains_motivating(const TaskGraph& g, const AgentConfig& cfg,
                         const std::vector<int>& base, SearchStats* stats, long long budget) {
    Engine eng(g, cfg, base, stats, budget);
    return eng.contains_motivating();
}

}  // namespace

MotivatingSearchResult find_motivating_subgraph(const TaskGraph& g, const AgentConfig& cfg,
                                                long long budget) {
    MotivatingSearchResult res;
    Engine eng(g, cfg, all_edge_ids(g), &res.stats, budget);
    if (eng.no_survivable_path()) return res;

    res.stats.subsets_explored++;
    if (eng.verdict(eng.full_mask())) {
        // The whole graph is motivating; report it as-is.
        res.status = MotivatingSearchResult::Status::Found;
        res.subgraph = make_subgraph(g, all_edge_ids(g));
        return res;
    }
    auto found = eng.enumerate();
    if (!found) return res;
    std::vector<int> kept = eng.forced_edges();
    for (size_t bit = 0; bit < eng.optional_edges().size(); ++bit)
        if (*found >> bit & 1) kept.push_back(eng.optional_edges()[bit]);
    res.status = MotivatingSearchResult::Status::Found;
    res.subgraph = make_subgraph(g, kept);
    return res;
}

MotivatingSearchResult find_minimal_motivating_subgraph(const TaskGraph& g,
                                                        const AgentConfig& cfg,
                                                        long long budget) {
    MotivatingSearchResult res;
    std::vector<int> current = all_edge_ids(g);
    auto lex = [&](int a, int b) {
        return std::tie(g.edges[a].from, g.edges[a].to) <
               std::tie(g.edges[b].from, g.edges[b].to);
    };
    std::sort(current.begin(), current.end(), lex);

    if (!contains_motivating(g, cfg, current, &res.stats, budget)) return res;
    bool removed = true;
    while (removed) {
        removed = false;
        for (size_t i = 0; i < current.size(); ++i) {
            std::vector<int> trial = current;
            trial.erase(trial.begin() + i);
            if (contains_motivating(g, cfg, trial, &res.stats, budget)) {
                current = std::move(trial);
                removed = true;
                break;  // restart at the lexicographically first edge
            }
        }
    }
    res.status = MotivatingSearchResult::Status::Found;
    res.subgraph = make_subgraph(g, current);
    if (!is_motivating(res.subgraph, cfg))
        throw Error(Err::PreconditionViolated, "greedy terminated on a non-motivating graph");
    return res;
}

bool check_minimality(const Subgraph& sub, const AgentConfig& cfg, long long budget) {
    if (!is_motivating(sub, cfg))
        throw Error(Err::BadParameter, "check_minimality requires a motivating subgraph");
    const TaskGraph& g = *sub.parent;
    std::vector<int> edges(sub.kept_edges.begin(), sub.kept_edges.end());
    SearchStats stats;
    for (size_t i = 0; i < edges.size(); ++i) {
        std::vector<int> trial = edges;
        trial.erase(trial.begin() + i);
        if (contains_motivating(g, cfg, trial, &stats, budget)) return false;
    }
    return true;
}

std::vector<std::string> out_degree_violations(const Subgraph& sub) {
    std::map<std::string, int> deg;
    for (int e : sub.kept_edges) deg[sub.parent->edges[e].from]++;
    std::vector<std::string> bad;
    for (const auto& [id, d] : deg)
        if (d > 2) bad.push_back(id);
    return bad;
}

std::string render_subgraph(const Subgraph& sub) {
    TaskGraph ind = sub.induced();
    std::ostringstream os;
    os << "graph " << ind.name << "\n";
    for (const auto& n : ind.nodes) os << "node " << n << "\n";
    for (const auto& e : ind.edges)
        os << "edge " << e.from << " " << e.to << " " << to_string(e.cost) << " # kept-edge\n";
    os << "start " << ind.start << "\n";
    os << "target " << ind.target << "\n";
    if (ind.goal_reward) os << "goalreward " << to_string(*ind.goal_reward) << "\n";
    return os.str();
}

}  // namespace tip
