#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tip/agent.hpp"
#include "tip/task_graph.hpp"

namespace tip {

// One shortcut node on the agent's path: the canonical min-cost continuation
// from u starts with a different edge than the one the agent took.
struct Shortcut {
    std::string u;                      // the shortcut node itself
    std::string v;                      // second node of the min-cost path from u
    std::string w;                      // second crossing of that path with the agent path
    std::vector<std::string> min_path;  // canonical min-cost path u -> t
    Rational t_value;                   // merge index: j, j+1/2, or n+1
};

// Executable certificate for the shortcut-node cost-ratio bound. Indices are
// 1-based in the write-up; vectors here are 0-based with a[i-1] = a_i.
// Invariants (checked by check_certificate): t_i >= i+1, a_1 = 1,
// a_i,b_i > 0, and b_i >= a_i >= beta^{|S_i|}.
struct ShortcutCertificate {
    Rational beta;
    std::vector<std::string> path;       // agent path P
    std::vector<Shortcut> shortcuts;     // in order of appearance on P
    std::vector<std::vector<int>> s_sets;  // S_1..S_{n+1}; members are 1-based shortcut indices
    std::vector<Rational> a;             // a_1..a_{n+1}
    std::vector<Rational> b;             // b_1..b_n

    int n() const { return static_cast<int>(shortcuts.size()); }
    int max_s_size() const;
};

// Simulates the plain agent, finds the shortcut nodes and merge data, and
// runs the coefficient recursion a_i = beta*b_{i-1} + sum over {j : t_j =
// i-1/2} of (1-beta) b_j, b_i = a_i + sum over {j : t_j = i} of (1-beta) b_j,
// with a_1 = 1.
ShortcutCertificate analyze(const TaskGraph& g, const AgentConfig& cfg);

// Right-hand side of the certificate inequality: the segment-cost combination
//   sum_j ( a_j * cP(u_{j-1}', u_j) + b_j * cP(u_j, u_j') ) + a_{n+1} * cP(u_n', t)
// where cP measures cost along the agent path. dist(s,t) >= this value.
Rational certified_lower_bound(const ShortcutCertificate& cert, const TaskGraph& g);

// beta^(-max_i |S_i|); the simulated cost ratio never exceeds this.
Rational ratio_bound(const ShortcutCertificate& cert, const Rational& beta);

// Recomputes the bookkeeping identities with exact arithmetic and throws
// PreconditionViolated on any failure:
//  - t_i >= i+1 and a_i, b_i > 0 with a_1 = 1
//  - b_i >= a_i >= beta^|S_i|
//  - running-sum identity: sum_{j in S_m} b_j = b_{m-1} + sum_{j in S_{m-1}, t_j >= m} b_j
//  - normalization: a_m + sum_{j in S_m} (1-beta) b_j = 1
void check_certificate(const ShortcutCertificate& cert);

// Branch sets witnessing a fan-minor in the skeleton: U_1..U_k then the hub
// set W last; connecting_edges[i] is a graph edge (as an index) witnessing the
// i-th required adjacency.
struct MinorWitness {
    int k = 0;
    std::vector<std::vector<std::string>> branch_sets;  // size k+1, hub last
    struct Adjacency {
        int set_a;  // indices into branch_sets
        int set_b;
        int edge;   // witnessing edge index in the parent graph
    };
    std::vector<Adjacency> connecting_edges;
};

// Constructs the fan-minor witness from k-1 anchors on P plus the node u'
// immediately after the last anchor: U_l = P-segment [anchor_l, anchor_{l+1}),
// U_k = {u'}, W = union of the escape-path tails up to their crossings and the
// P-suffix after u'. Every escape path must re-cross P strictly after u'.
// Throws PreconditionViolated otherwise. The result passes validate_minor_witness.
MinorWitness build_minor_witness(const TaskGraph& g, const std::vector<std::string>& path,
                                 const std::vector<std::string>& anchors,
                                 const std::string& u_prime,
                                 const std::vector<std::vector<std::string>>& escape_paths);

// Tries to extract an F_{sigma+1} witness from a certificate with max |S_i| =
// sigma >= 1, attempting every index i attaining a set of size >= sigma.
std::optional<MinorWitness> minor_witness_from_certificate(const TaskGraph& g,
                                                           const ShortcutCertificate& cert);

// Independent check: disjointness, connectivity of each branch set in the
// skeleton, and one witnessing edge per required fan adjacency.
void validate_minor_witness(const TaskGraph& g, const MinorWitness& w);

std::string render_certificate(const ShortcutCertificate& cert);

}  // namespace tip
