#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "tip/error.hpp"
#include "tip/rational.hpp"

namespace tip {

struct Edge {
    std::string from;
    std::string to;
    Rational cost;
};

// Weighted DAG with a designated start and target node. Node ids are opaque
// strings; the lexicographic order on ids is the deterministic tie-break used
// everywhere downstream. A graph is immutable once validate() has run; all
// queries on a validated graph are const and safe to share across threads.
class TaskGraph {
  public:
    std::string name = "g";
    std::vector<std::string> nodes;  // insertion order, preserved by serialization
    std::vector<Edge> edges;
    std::string start;
    std::string target;
    std::optional<Rational> goal_reward;  // optional reward annotation at target

    // Checks all structural invariants (unique ids, unique edge pairs,
    // non-negative costs, endpoints present, acyclic) and freezes the graph,
    // caching a topological order and sorted adjacency.
    // Throws Error with CycleDetected / NegativeCost / MissingEndpoint /
    // DuplicateEdge / DuplicateNode.
    void validate();
    bool validated() const { return validated_; }

    int node_count() const { return static_cast<int>(nodes.size()); }
    int edge_count() const { return static_cast<int>(edges.size()); }
    int index_of(const std::string& id) const;
    bool has_node(const std::string& id) const { return node_index_.count(id) != 0; }
    const std::vector<int>& topo_order() const { return topo_; }
    // Out-edges of a node as edge indexes, sorted by target id.
    const std::vector<int>& out_edges(int node_idx) const { return out_[node_idx]; }
    const std::vector<int>& in_edges(int node_idx) const { return in_[node_idx]; }
    int start_index() const { return start_idx_; }
    int target_index() const { return target_idx_; }
    std::optional<int> edge_between(int from_idx, int to_idx) const;

    bool operator==(const TaskGraph& other) const;

  private:
    bool validated_ = false;
    std::unordered_map<std::string, int> node_index_;
    std::vector<std::vector<int>> out_;
    std::vector<std::vector<int>> in_;
    std::vector<int> topo_;
    int start_idx_ = -1;
    int target_idx_ = -1;
};

// Exact min-cost distances from every node to a fixed sink, plus the canonical
// (lexicographically smallest next node among minimizers) min-cost path.
class DistTable {
  public:
    DistTable(const TaskGraph& g, int sink_idx);

    const std::optional<Rational>& at(int node_idx) const { return dist_[node_idx]; }
    bool reachable(int node_idx) const { return dist_[node_idx].has_value(); }
    // Index of the canonical successor toward the sink, -1 at the sink itself.
    int canonical_next(int node_idx) const { return next_[node_idx]; }
    // Canonical min-cost path node sequence from `from_idx` to the sink.
    std::vector<int> canonical_path(int from_idx) const;

  private:
    std::vector<std::optional<Rational>> dist_;
    std::vector<int> next_;
};

// dist(g,u,v): exact min-cost u->v distance; nullopt when unreachable.
std::optional<Rational> dist(const TaskGraph& g, const std::string& u, const std::string& v);
// Canonical min-cost path u->v as node ids; nullopt when unreachable.
std::optional<std::vector<std::string>> min_cost_path(const TaskGraph& g, const std::string& u,
                                                      const std::string& v);

// Edge-subset view of a validated parent graph. Kept nodes are the endpoints
// of kept edges plus start/target.
struct Subgraph {
    const TaskGraph* parent = nullptr;
    std::set<int> kept_edges;  // edge indexes into parent->edges

    std::set<int> kept_nodes() const;
    // Materializes the induced TaskGraph (validated).
    TaskGraph induced() const;
    bool contains_edge(int edge_idx) const { return kept_edges.count(edge_idx) != 0; }
};

// The weighted fan chain: nodes v1..v{k-1} and t, zero-cost chain edges
// (v_i, v_{i+1}), and exit edges (v_i, t) with cost base*beta^(1-i). With
// procrastinate tie-breaking the biased agent defers all the way and pays
// exactly beta^(2-k) times the optimum.
TaskGraph gen_akerlof(long k, const Rational& beta, const Rational& base_cost);

struct RandomDagParams {
    long n = 2;
    Rational edge_prob = rat(1, 2);
    long max_cost_num = 6;  // numerators sampled from 0..max_cost_num
    long max_cost_den = 3;  // denominators sampled from 1..max_cost_den
    std::uint64_t seed = 0;
};

// Deterministic for a fixed seed; always contains an s->t backbone path.
TaskGraph gen_random_dag(const RandomDagParams& p);

// Line-oriented text format:
//   graph <name> / node <id> / edge <from> <to> <num>/<den> / start <id> /
//   target <id> / goalreward <num>/<den>, with '#' comments.
std::string render_graph(const TaskGraph& g);
TaskGraph parse_graph(const std::string& text);

}  // namespace tip
