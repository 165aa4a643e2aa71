#include "tip/agent.hpp"

#include <algorithm>
#include <sstream>

namespace tip {

namespace {

// One evaluation pass at a node: score every out-neighbor, pick the minimizer
// under the configured tie-break. Values are D-based where D is either the
// plain dist-to-target or the reward-adjusted variant shifted by -r(v).
struct Choice {
    int edge = -1;
    Rational value;
    bool tied = false;
    std::vector<std::pair<std::string, Rational>> evals;
};

// tie_rank returns true when edge a is preferred over edge b at equal value.
std::optional<Choice> evaluate_node(const TaskGraph& g, const AgentConfig& cfg, int u,
                                    const std::vector<std::optional<Rational>>& dval,
                                    const std::vector<Rational>& shift) {
    Choice ch;
    std::optional<Rational> best;
    std::vector<int> minimizers;
    for (int e : g.out_edges(u)) {  // sorted by target id
        int v = g.index_of(g.edges[e].to);
        if (!dval[v]) continue;
        Rational val = g.edges[e].cost + cfg.beta * (*dval[v] - shift[v]);
        ch.evals.emplace_back(g.edges[e].to, val);
        if (!best || val < *best) {
            best = val;
            minimizers.clear();
            minimizers.push_back(e);
        } else if (val == *best) {
            minimizers.push_back(e);
        }
    }
    if (!best) return std::nullopt;
    ch.value = *best;
    ch.tied = minimizers.size() > 1;
    ch.edge = minimizers.front();  // lexicographic default: first in sorted order
    if (ch.tied && cfg.tie_break == TieBreak::Procrastinate) {
        // Prefer a minimizer that is NOT the start of a min-cost continuation:
        // c(u,v) + D(v) > D(u). D(u) itself is the unbiased minimum over options.
        std::optional<Rational> du;
        for (int e : g.out_edges(u)) {
            int v = g.index_of(g.edges[e].to);
            if (!dval[v]) continue;
            Rational t = g.edges[e].cost + (*dval[v] - shift[v]);
            if (!du || t < *du) du = t;
        }
        for (int e : minimizers) {
            int v = g.index_of(g.edges[e].to);
            if (g.edges[e].cost + (*dval[v] - shift[v]) > *du) {
                ch.edge = e;
                break;
            }
        }
    } else if (ch.tied && cfg.tie_break == TieBreak::Custom) {
        auto rank = [&](int e) {
            const std::string& id = g.edges[e].to;
            auto it = std::find(cfg.custom_order.begin(), cfg.custom_order.end(), id);
            return it == cfg.custom_order.end()
                       ? cfg.custom_order.size()
                       : static_cast<size_t>(it - cfg.custom_order.begin());
        };
        int pick = minimizers.front();
        size_t best_rank = rank(pick);
        for (int e : minimizers) {
            size_t r = rank(e);
            if (r < best_rank) {  // ties on rank keep the lex-first minimizer
                best_rank = r;
                pick = e;
            }
        }
        ch.edge = pick;
    }
    return ch;
}

void check_cfg(const AgentConfig& cfg) {
    if (!(cfg.beta > 0 && cfg.beta <= 1))
        throw Error(Err::BadParameter, "beta must satisfy 0 < beta <= 1");
}

enum class Mode { Plain, GoalReward, Rewards };

Trajectory walk(const TaskGraph& g, const AgentConfig& cfg, Mode mode,
                const RewardConfig* rw) {
    check_cfg(cfg);
    std::vector<std::optional<Rational>> dval(g.node_count());
    std::vector<Rational> shift(g.node_count(), rat(0));
    if (mode == Mode::Rewards) {
        RewardAdjustedDist rd(g, *rw);
        for (int i = 0; i < g.node_count(); ++i) dval[i] = rd.at(i);
        for (int i = 0; i < g.node_count(); ++i) shift[i] = rw->at(g.nodes[i]);
    } else {
        DistTable dt(g, g.target_index());
        for (int i = 0; i < g.node_count(); ++i) dval[i] = dt.at(i);
    }
    if (!dval[g.start_index()] && g.start_index() != g.target_index())
        throw Error(Err::TargetUnreachable, "no path from start to target");

    std::optional<Rational> threshold;  // continue iff min value <= threshold
    if (mode == Mode::GoalReward) {
        if (!cfg.goal_reward) throw Error(Err::BadParameter, "goal reward required");
        threshold = cfg.beta * (*cfg.goal_reward);
    } else if (mode == Mode::Rewards) {
        threshold = rat(0);
    }

    Trajectory t;
    int u = g.start_index();
    t.nodes.push_back(g.nodes[u]);
    if (mode == Mode::Rewards && rw) {
        // Reward at the start node counts as already claimed.
        Rational r0 = rw->at(g.nodes[u]);
        t.total_claimed_reward += r0;
    }
    while (u != g.target_index()) {
        auto ch = evaluate_node(g, cfg, u, dval, shift);
        if (!ch) {
            t.outcome = Outcome::Stuck;
            t.stop_node = g.nodes[u];
            return t;
        }
        if (threshold && ch->value > *threshold) {
            t.outcome = Outcome::Abandoned;
            t.stop_node = g.nodes[u];
            return t;
        }
        int v = g.index_of(g.edges[ch->edge].to);
        StepRecord step;
        step.node = g.nodes[u];
        step.chosen = g.nodes[v];
        step.value = ch->value;
        step.evaluations = std::move(ch->evals);
        step.tied = ch->tied;
        if (mode == Mode::Rewards) {
            step.claimed_reward = rw->at(g.nodes[v]);
            t.total_claimed_reward += step.claimed_reward;
        }
        t.total_cost += g.edges[ch->edge].cost;
        t.steps.push_back(std::move(step));
        t.nodes.push_back(g.nodes[v]);
        u = v;
    }
    t.outcome = Outcome::Reached;
    t.stop_node = g.nodes[u];
    return t;
}

}  // namespace

Trajectory simulate_plain(const TaskGraph& g, const AgentConfig& cfg) {
    return walk(g, cfg, Mode::Plain, nullptr);
}

Trajectory simulate_with_goal_reward(const TaskGraph& g, const AgentConfig& cfg) {
    return walk(g, cfg, Mode::GoalReward, nullptr);
}

Trajectory simulate_with_rewards(const TaskGraph& g, const AgentConfig& cfg,
                                 const RewardConfig& rw) {
    return walk(g, cfg, Mode::Rewards, &rw);
}

Rational cost_ratio(const TaskGraph& g, const AgentConfig& cfg) {
    auto d = dist(g, g.start, g.target);
    if (!d) throw Error(Err::TargetUnreachable, "no path from start to target");
    if (*d == 0) throw Error(Err::ZeroOptimalCost, "cost ratio undefined: dist(s,t) = 0");
    Trajectory t = simulate_plain(g, cfg);
    if (!t.reached()) throw Error(Err::TargetUnreachable, "agent did not reach target");
    return t.total_cost / *d;
}

RewardAdjustedDist::RewardAdjustedDist(const TaskGraph& g, const RewardConfig& rw) {
    dist_.assign(g.node_count(), std::nullopt);
    dist_[g.target_index()] = rat(0);
    const auto& order = g.topo_order();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int u = *it;
        if (u == g.target_index()) continue;
        for (int e : g.out_edges(u)) {
            int v = g.index_of(g.edges[e].to);
            if (!dist_[v]) continue;
            Rational cand = g.edges[e].cost - rw.at(g.edges[e].to) + *dist_[v];
            if (!dist_[u] || cand < *dist_[u]) dist_[u] = cand;
        }
    }
}

std::string render_trajectory(const TaskGraph& g, const Trajectory& t) {
    std::ostringstream os;
    for (const auto& s : t.steps) {
        os << "step " << s.node << " " << s.chosen << " " << to_string(s.value) << "\n";
        for (const auto& [id, val] : s.evaluations)
            os << "  eval " << id << " " << to_string(val) << "\n";
        if (s.tied) os << "  tied\n";
        if (s.claimed_reward != 0) os << "  claimed " << to_string(s.claimed_reward) << "\n";
    }
    switch (t.outcome) {
        case Outcome::Reached: os << "outcome reached\n"; break;
        case Outcome::Abandoned: os << "outcome abandoned " << t.stop_node << "\n"; break;
        case Outcome::Stuck: os << "outcome stuck " << t.stop_node << "\n"; break;
    }
    os << "totalcost " << to_string(t.total_cost) << "\n";
    if (t.total_claimed_reward != 0)
        os << "totalclaimed " << to_string(t.total_claimed_reward) << "\n";
    return os.str();
}

std::string render_rewards(const RewardConfig& rw) {
    std::ostringstream os;
    for (const auto& [node, r] : rw.rewards) os << "reward " << node << " " << to_string(r) << "\n";
    return os.str();
}

RewardConfig parse_rewards(const std::string& text) {
    RewardConfig rw;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string kw, node, val;
        if (!(ls >> kw)) continue;
        if (kw != "reward" || !(ls >> node >> val))
            throw Error(Err::ParseError, "line " + std::to_string(lineno) + ": expected 'reward <node> <num>/<den>'");
        auto r = parse_rational(val);
        if (!r) throw Error(Err::ParseError, "line " + std::to_string(lineno) + ": bad rational " + val);
        rw.rewards[node] = *r;
    }
    return rw;
}

}  // namespace tip
