#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tip/agent.hpp"
#include "tip/task_graph.hpp"

namespace tip {

struct SearchStats {
    long long subsets_explored = 0;  // candidates enumerated (including pruned)
    long long oracle_calls = 0;      // distinct subgraph simulations
};

struct MotivatingSearchResult {
    enum class Status { Found, NoneExists } status = Status::NoneExists;
    Subgraph subgraph;  // valid when Found
    SearchStats stats;

    bool found() const { return status == Status::Found; }
};

// True iff the goal-reward agent reaches the target inside the induced graph.
// cfg.goal_reward must be set and the subgraph must contain start and target.
bool is_motivating(const Subgraph& sub, const AgentConfig& cfg);

// Exact search over edge subsets in decreasing-size order (deterministic:
// within a size class, canonical bit order over lexicographically sorted
// edges). Candidates are pruned to edges that can matter (on some s->t path),
// edges present in every motivating subgraph are detected up front and pinned,
// and simulations are memoized on the live part of each candidate. Returns the
// first motivating subgraph found, or NoneExists after exhausting the space.
// Throws BudgetExceeded when more than `budget` distinct simulations would be
// needed.
MotivatingSearchResult find_motivating_subgraph(const TaskGraph& g, const AgentConfig& cfg,
                                                long long budget = 1000000);

// The greedy loop: repeatedly delete the lexicographically first edge whose
// removal leaves a graph that still contains a motivating subgraph; afterwards
// isolated nodes drop out. The result is motivating and minimal.
MotivatingSearchResult find_minimal_motivating_subgraph(const TaskGraph& g,
                                                        const AgentConfig& cfg,
                                                        long long budget = 1000000);

// True iff no proper subgraph is motivating: every single-edge deletion leaves
// a graph with no motivating subgraph. `sub` must itself be motivating.
bool check_minimality(const Subgraph& sub, const AgentConfig& cfg, long long budget = 1000000);

// Every node has at most two outgoing edges (property of minimal motivating
// subgraphs); returns offending node ids.
std::vector<std::string> out_degree_violations(const Subgraph& sub);

// Subgraph in graph text format with '# kept-edge' annotations.
std::string render_subgraph(const Subgraph& sub);

}  // namespace tip
