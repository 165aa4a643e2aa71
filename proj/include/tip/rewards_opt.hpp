#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tip/agent.hpp"
#include "tip/task_graph.hpp"

namespace tip {

// Reward-placement regimes:
//   I   nonnegative rewards anywhere (they may go unclaimed),
//   II  nonnegative rewards, all on the path the agent actually walks,
//   III signed rewards; objective is the sum of absolute values.
enum class MtrVariant { I = 1, II = 2, III = 3 };

struct MtrInstance {
    TaskGraph graph;
    Rational beta;
    std::optional<Rational> bound;  // decision form: objective must be <= bound
    MtrVariant variant = MtrVariant::I;
};

struct MtrSolution {
    RewardConfig rewards;
    Trajectory trajectory;
    Rational objective;          // sum of |r(v)|
    bool optimal = false;        // enumeration completed within budget
    bool used_tie_preference = false;  // agent ties had to break toward the plan
};

// Simulates the given rewards and accepts when the agent reaches the target
// and the objective fits under the bound. Throws VariantViolation when the
// config breaks its variant's constraints (for II: support off the realized
// path).
std::optional<MtrSolution> check_feasible(const MtrInstance& inst, const RewardConfig& rw);

struct SolveBudget {
    long long max_lp_solves = 100000;
    long long max_paths_per_node = 20000;
};

// Exact optimum by enumeration plus exact linear programming:
//  (a) enumerate candidate trajectories P (s->t paths);
//  (b) per node u of P, enumerate a witness path starting with P's edge at u;
//  (c) per combination, minimize the objective subject to
//        c'(W_u) <= 0   and   c'(W_u) <= c'(Q) for every u->t path Q,
//      all linear in the rewards (split into +/- parts for variant III);
//  (d) keep the best over all combinations (ties: earliest trajectory).
// Inter-path comparisons are encoded weakly; when the optimum needs a tie
// broken toward the plan, a second solve pushes the solution strictly inside
// if the same objective allows it, and otherwise the solution is flagged
// used_tie_preference. Returns nullopt when no trajectory admits any feasible
// rewards. A blown budget degrades to best-found with optimal=false.
std::optional<MtrSolution> solve_exact(const MtrInstance& inst, const SolveBudget& budget = {});

// Independent brute-force check: tries every reward vector with entries in
// {0, ±delta, ..., ±cap} (nonnegative half for variants I/II) on nodes that
// can matter, simulates each, and returns the best feasible objective.
std::optional<Rational> grid_oracle(const MtrInstance& inst, const Rational& delta,
                                    const Rational& cap);

// Both forms of the continue test at a node, evaluated independently:
//  first:  min over paths Q from u of c'(Q) <= 0
//  second: exists a path with beta^{-1} c(e1) + sum of later costs <= sum of rewards.
// They must always agree.
std::pair<bool, bool> continue_checks(const TaskGraph& g, const RewardConfig& rw,
                                      const Rational& beta, const std::string& node);

std::string render_solution(const MtrSolution& sol);

}  // namespace tip
