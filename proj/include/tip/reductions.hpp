#pragma once

#include <string>
#include <vector>

#include "tip/agent.hpp"
#include "tip/cnf.hpp"
#include "tip/task_graph.hpp"

namespace tip {

// Motivating-subgraph hardness gadget. The bus s,u_1..u_m,w_1..w_ell,t is the
// only route the agent can complete; every clause node hangs literal edges
// onto variable nodes whose two routes to the hub w encode the polarity
// (expensive edge weight 2 / cheap edge weight 1+beta; cheap hub path total 0
// / expensive hub path total 1-beta).
struct MmsGadget {
    TaskGraph graph;
    Formula3CNF formula;
    Rational beta;
    Rational f;        // bus step weight 1 - beta/2 - beta^2/2
    Rational z;        // off-bus route value 2 + 3*beta/2 + (1+beta)/(1-beta)
    Rational reward;   // goal reward 1 + beta/2 + 1/beta + 2/(1-beta)
    long ell = 0;      // ceil(z/f) interior bus nodes

    std::vector<std::string> clause_nodes;  // u_i
    std::vector<std::string> var_nodes;     // v_k
    std::vector<std::string> var_prime_nodes;
    std::vector<std::string> bus_nodes;     // w_1..w_ell
    std::string hub;                        // w

    struct LiteralEdge {
        int edge = -1;
        int var = 0;
        bool expensive = false;
    };
    std::vector<std::vector<LiteralEdge>> literal_edges;  // per clause, deduplicated
    std::vector<std::string> dedup_notes;

    AgentConfig agent() const {
        AgentConfig cfg;
        cfg.beta = beta;
        cfg.goal_reward = reward;
        return cfg;
    }
    int edge_index(const std::string& from, const std::string& to) const;
};

MmsGadget build_mms_gadget(const Formula3CNF& f, const Rational& beta);

// A satisfying assignment to a minimal motivating subgraph: keep the cheap hub
// path for true variables and the expensive one for false variables, keep one
// matching literal edge per clause, drop nodes left without in-edges.
// Throws AssignmentNotSatisfying.
Subgraph assignment_to_mms(const MmsGadget& g, const std::vector<bool>& assignment);

// Reads the assignment back off a minimal motivating subgraph: surviving
// expensive hub path means false. Verifies the result satisfies the formula;
// throws NotMinimalMotivating otherwise or when the input is not motivating.
std::vector<bool> mms_to_assignment(const MmsGadget& g, const Subgraph& sub);

struct MmsAudit {
    bool ok = true;
    std::vector<std::string> failures;
};
// Structural audit of a minimal motivating subgraph: full bus present, exactly
// one off-bus edge per clause node, one hub route per kept variable node,
// mixed edge/route weights, out-degree <= 2 everywhere.
MmsAudit audit_mms_structure(const MmsGadget& g, const Subgraph& sub);

// Minimum-total-reward hardness gadget: per clause a long chain a_{i,1..l}
// with a bait node b_i, then a spine c_1..c_n feeding the alternating
// u_k/v_k (and primed) descent to t.
struct MtrGadget {
    TaskGraph graph;
    Formula3CNF formula;
    int n = 0;  // effective variable count (>= formula.num_vars when padded)
    int m = 0;
    long l = 0;
    Rational beta;
    Rational x;    // 1/beta - 1
    Rational y;    // x/2
    Rational r_t;  // 12n - 6 + 6/beta

    Rational g_k(int k) const { return rat(6) * rat(2 * n - k); }
    Rational h_k(int k) const { return g_k(k) + 6 + y; }
    Rational target_objective() const { return n * x + r_t; }

    std::string a_id(int i, int j) const;
    std::string b_id(int i) const;
    std::string c_id(int k) const;
    std::string u_id(int k, bool prime) const;
    std::string v_id(int k, bool prime) const;
};

// pad_n raises the effective variable count; n*x > 2/beta must hold (throws
// NTooSmall naming the smallest sufficient n otherwise).
MtrGadget build_mtr_gadget(const Formula3CNF& f, const Rational& beta, int pad_n = 0);

// Reward x on v_k for true variables (v'_k for false and for padding), r_t on
// t; total n*x + r_t. Throws AssignmentNotSatisfying.
RewardConfig assignment_to_rewards(const MtrGadget& g, const std::vector<bool>& assignment);

// Audits a feasible config with objective <= n*x + r_t and reads the
// assignment off the rewarded v-side. Throws InfeasibleRewards when the agent
// does not reach t, the objective is too large, both sides of a variable carry
// reward, or the extracted assignment fails the formula.
std::vector<bool> rewards_to_assignment(const MtrGadget& g, const RewardConfig& rw);

struct RelationCheck {
    std::string name;
    int k = 0;  // 0 for k-independent relations
    Rational lhs, rhs;
    std::string op;  // ">", "<", "="
    bool ok = false;
};
struct ConstantsReport {
    std::vector<RelationCheck> checks;
    bool all_ok = true;
};
// The nine constants relations, each evaluated exactly for every k.
ConstantsReport verify_constants(const MtrGadget& g);
std::string render_constants_report(const ConstantsReport& r);

// End-to-end check of the forward direction: simulates the rewarded agent and
// confirms, step by step, the expected route (clause chains in order, no bait
// detour, spine, then the rewarded descent), the claimed total, and the
// adjusted distances 6k along the rewarded chain.
struct MtrForwardCheck {
    bool ok = true;
    std::vector<std::string> failures;
    Trajectory trajectory;
    Rational objective;
};
MtrForwardCheck verify_mtr_forward(const MtrGadget& g, const std::vector<bool>& assignment);

}  // namespace tip
