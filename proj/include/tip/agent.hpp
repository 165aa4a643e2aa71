#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tip/task_graph.hpp"

namespace tip {

enum class TieBreak {
    Lexicographic,  // smallest target node id among value minimizers
    Procrastinate,  // prefer an edge NOT starting a min-cost continuation; lex fallback
    Custom,         // smallest rank in AgentConfig::custom_order; lex fallback
};

struct AgentConfig {
    Rational beta = rat(1);
    TieBreak tie_break = TieBreak::Lexicographic;
    std::vector<std::string> custom_order;  // only consulted for TieBreak::Custom
    std::optional<Rational> goal_reward;
};

// Node rewards; nodes absent from the map carry reward 0.
struct RewardConfig {
    std::map<std::string, Rational> rewards;

    Rational at(const std::string& node) const {
        auto it = rewards.find(node);
        return it == rewards.end() ? rat(0) : it->second;
    }
    Rational total_abs() const {
        Rational s = rat(0);
        for (const auto& [_, r] : rewards) s += rat_abs(r);
        return s;
    }
};

enum class Outcome { Reached, Abandoned, Stuck };

struct StepRecord {
    std::string node;
    std::string chosen;                                        // target of the chosen edge
    Rational value;                                            // biased value of the chosen edge
    std::vector<std::pair<std::string, Rational>> evaluations; // per out-neighbor, sorted by id
    bool tied = false;                                         // more than one minimizer
    Rational claimed_reward = rat(0);                          // reward collected on arrival
};

struct Trajectory {
    std::vector<std::string> nodes;  // visited sequence starting at s
    std::vector<StepRecord> steps;
    Outcome outcome = Outcome::Stuck;
    std::string stop_node;  // node of abandonment / sticking; target when Reached
    Rational total_cost = rat(0);
    Rational total_claimed_reward = rat(0);

    bool reached() const { return outcome == Outcome::Reached; }
};

// Plain model: at u move to the out-neighbor minimizing c(u,v) + beta*d(v).
Trajectory simulate_plain(const TaskGraph& g, const AgentConfig& cfg);

// Goal-reward model: same step rule, but abandon at u when
// min_v c(u,v) + beta*d(v) > beta*r (strict; equality continues).
Trajectory simulate_with_goal_reward(const TaskGraph& g, const AgentConfig& cfg);

// Intermediate-reward model: at u the agent scores every u->t path Q by
//   c'(Q) = c(u,v0) + beta * sum over nodes v of Q after u of (c(v,v') - r(v)),
// with the target contributing -r(t); it abandons when min_Q c'(Q) > 0 and
// otherwise moves along the first edge of the minimizing path, claiming the
// reward of the node it arrives at.
Trajectory simulate_with_rewards(const TaskGraph& g, const AgentConfig& cfg,
                                 const RewardConfig& rw);

// total_cost(simulate_plain) / dist(s,t). Throws ZeroOptimalCost when
// dist(s,t)=0 and TargetUnreachable when there is no s->t path.
Rational cost_ratio(const TaskGraph& g, const AgentConfig& cfg);

// Min over v->t paths of sum of (edge cost - reward of edge head); the
// quantity the reward model's step rule reduces to. Nullopt when t is
// unreachable. Rewards make this possibly negative.
class RewardAdjustedDist {
  public:
    RewardAdjustedDist(const TaskGraph& g, const RewardConfig& rw);
    const std::optional<Rational>& at(int node_idx) const { return dist_[node_idx]; }

  private:
    std::vector<std::optional<Rational>> dist_;
};

// Text report: one human-readable block per step plus the machine lines
//   step <node> <next> <num>/<den>   and   outcome reached|abandoned <n>|stuck <n>.
std::string render_trajectory(const TaskGraph& g, const Trajectory& t);

std::string render_rewards(const RewardConfig& rw);
RewardConfig parse_rewards(const std::string& text);

}  // namespace tip
