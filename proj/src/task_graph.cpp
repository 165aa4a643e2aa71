#include "tip/task_graph.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <sstream>

namespace tip {

void TaskGraph::validate() {
    node_index_.clear();
    for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
        if (!node_index_.emplace(nodes[i], i).second)
            throw Error(Err::DuplicateNode, "node id repeated: " + nodes[i]);
    }
    if (!has_node(start)) throw Error(Err::MissingEndpoint, "start node not in graph: " + start);
    if (!has_node(target)) throw Error(Err::MissingEndpoint, "target node not in graph: " + target);

    std::set<std::pair<std::string, std::string>> seen;
    out_.assign(nodes.size(), {});
    in_.assign(nodes.size(), {});
    for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
        const Edge& ed = edges[e];
        if (!has_node(ed.from) || !has_node(ed.to))
            throw Error(Err::MissingEndpoint, "edge endpoint not in graph: " + ed.from + " -> " + ed.to);
        if (ed.cost < 0)
            throw Error(Err::NegativeCost, "edge " + ed.from + " -> " + ed.to + " has cost " + to_string(ed.cost));
        if (!seen.emplace(ed.from, ed.to).second)
            throw Error(Err::DuplicateEdge, "edge repeated: " + ed.from + " -> " + ed.to);
        out_[node_index_[ed.from]].push_back(e);
        in_[node_index_[ed.to]].push_back(e);
    }
    for (auto& lst : out_)
        std::sort(lst.begin(), lst.end(),
                  [&](int a, int b) { return edges[a].to < edges[b].to; });
    for (auto& lst : in_)
        std::sort(lst.begin(), lst.end(),
                  [&](int a, int b) { return edges[a].from < edges[b].from; });

    // Kahn topological sort; leftover nodes mean a cycle.
    std::vector<int> indeg(nodes.size(), 0);
    for (const Edge& ed : edges) indeg[node_index_[ed.to]]++;
    std::deque<int> ready;
    for (int i = 0; i < node_count(); ++i)
        if (indeg[i] == 0) ready.push_back(i);
    topo_.clear();
    while (!ready.empty()) {
        int u = ready.front();
        ready.pop_front();
        topo_.push_back(u);
        for (int e : out_[u]) {
            int v = node_index_[edges[e].to];
            if (--indeg[v] == 0) ready.push_back(v);
        }
    }
    if (topo_.size() != nodes.size()) throw Error(Err::CycleDetected, "graph is not acyclic");

    start_idx_ = node_index_[start];
    target_idx_ = node_index_[target];
    validated_ = true;
}

int TaskGraph::index_of(const std::string& id) const {
    auto it = node_index_.find(id);
    if (it == node_index_.end()) throw Error(Err::MissingEndpoint, "unknown node: " + id);
    return it->second;
}

std::optional<int> TaskGraph::edge_between(int from_idx, int to_idx) const {
    for (int e : out_[from_idx])
        if (index_of(edges[e].to) == to_idx) return e;
    return std::nullopt;
}

bool TaskGraph::operator==(const TaskGraph& other) const {
    if (name != other.name || nodes != other.nodes || start != other.start ||
        target != other.target)
        return false;
    if (goal_reward.has_value() != other.goal_reward.has_value()) return false;
    if (goal_reward && *goal_reward != *other.goal_reward) return false;
    if (edges.size() != other.edges.size()) return false;
    for (size_t i = 0; i < edges.size(); ++i) {
        if (edges[i].from != other.edges[i].from || edges[i].to != other.edges[i].to ||
            edges[i].cost != other.edges[i].cost)
            return false;
    }
    return true;
}

DistTable::DistTable(const TaskGraph& g, int sink_idx) {
    dist_.assign(g.node_count(), std::nullopt);
    next_.assign(g.node_count(), -1);
    dist_[sink_idx] = rat(0);
    // Reverse topological sweep: all successors settle before their parents.
    const auto& order = g.topo_order();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int u = *it;
        if (u == sink_idx) continue;
        for (int e : g.out_edges(u)) {  // sorted by target id: first strict min is the lex choice
            int v = g.index_of(g.edges[e].to);
            if (!dist_[v]) continue;
            Rational cand = g.edges[e].cost + *dist_[v];
            if (!dist_[u] || cand < *dist_[u]) {
                dist_[u] = cand;
                next_[u] = v;
            }
        }
    }
}

std::vector<int> DistTable::canonical_path(int from_idx) const {
    std::vector<int> path;
    int u = from_idx;
    path.push_back(u);
    while (next_[u] != -1) {
        u = next_[u];
        path.push_back(u);
    }
    return path;
}

std::optional<Rational> dist(const TaskGraph& g, const std::string& u, const std::string& v) {
    DistTable t(g, g.index_of(v));
    return t.at(g.index_of(u));
}

std::optional<std::vector<std::string>> min_cost_path(const TaskGraph& g, const std::string& u,
                                                      const std::string& v) {
    DistTable t(g, g.index_of(v));
    int ui = g.index_of(u);
    if (!t.reachable(ui)) return std::nullopt;
    std::vector<std::string> out;
    for (int idx : t.canonical_path(ui)) out.push_back(g.nodes[idx]);
    return out;
}

std::set<int> Subgraph::kept_nodes() const {
    std::set<int> ns;
    ns.insert(parent->start_index());
    ns.insert(parent->target_index());
    for (int e : kept_edges) {
        ns.insert(parent->index_of(parent->edges[e].from));
        ns.insert(parent->index_of(parent->edges[e].to));
    }
    return ns;
}

TaskGraph Subgraph::induced() const {
    TaskGraph g;
    g.name = parent->name + "-sub";
    for (int n : kept_nodes()) g.nodes.push_back(parent->nodes[n]);
    std::vector<int> es(kept_edges.begin(), kept_edges.end());
    std::sort(es.begin(), es.end(), [&](int a, int b) {
        const Edge& x = parent->edges[a];
        const Edge& y = parent->edges[b];
        return std::tie(x.from, x.to) < std::tie(y.from, y.to);
    });
    for (int e : es) g.edges.push_back(parent->edges[e]);
    g.start = parent->start;
    g.target = parent->target;
    g.goal_reward = parent->goal_reward;
    g.validate();
    return g;
}

TaskGraph gen_akerlof(long k, const Rational& beta, const Rational& base_cost) {
    if (k < 2) throw Error(Err::BadParameter, "akerlof requires k >= 2");
    if (!(beta > 0 && beta < 1)) throw Error(Err::BadParameter, "akerlof requires 0 < beta < 1");
    if (!(base_cost > 0)) throw Error(Err::BadParameter, "akerlof requires base cost > 0");
    TaskGraph g;
    g.name = "akerlof-k" + std::to_string(k);
    int width = static_cast<int>(std::to_string(k - 1).size());
    auto vid = [&](long i) {
        std::string num = std::to_string(i);
        return "v" + std::string(width - num.size(), '0') + num;
    };
    for (long i = 1; i <= k - 1; ++i) g.nodes.push_back(vid(i));
    g.nodes.push_back("t");
    for (long i = 1; i <= k - 2; ++i) g.edges.push_back({vid(i), vid(i + 1), rat(0)});
    for (long i = 1; i <= k - 1; ++i)
        g.edges.push_back({vid(i), "t", base_cost * pow_int(beta, 1 - i)});
    g.start = vid(1);
    g.target = "t";
    g.validate();
    return g;
}

namespace {

// Deterministic bounded sampling on top of the (standardized) mt19937_64
// stream; std::uniform_int_distribution is implementation-defined so it is
// avoided here on purpose.
std::uint64_t next_below(std::mt19937_64& rng, std::uint64_t n) {
    // Rejection sampling to stay unbiased.
    std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - (std::numeric_limits<std::uint64_t>::max() % n);
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

}  // namespace

TaskGraph gen_random_dag(const RandomDagParams& p) {
    if (p.n < 2) throw Error(Err::BadParameter, "random dag requires n >= 2");
    if (p.edge_prob < 0 || p.edge_prob > 1)
        throw Error(Err::BadParameter, "edge probability must be in [0,1]");
    std::mt19937_64 rng(p.seed);
    TaskGraph g;
    g.name = "random-n" + std::to_string(p.n) + "-s" + std::to_string(p.seed);
    int width = static_cast<int>(std::to_string(p.n - 1).size());
    auto vid = [&](long i) {
        if (i == 0) return std::string("s");
        if (i == p.n - 1) return std::string("t");
        std::string num = std::to_string(i);
        return "n" + std::string(width - num.size(), '0') + num;
    };
    for (long i = 0; i < p.n; ++i) g.nodes.push_back(vid(i));
    g.start = vid(0);
    g.target = vid(p.n - 1);

    auto rand_cost = [&]() {
        long num = static_cast<long>(next_below(rng, p.max_cost_num + 1));
        long den = 1 + static_cast<long>(next_below(rng, p.max_cost_den));
        return rat(num, den);
    };

    // Random monotone backbone through a sampled subset of interior nodes.
    std::vector<long> backbone;
    backbone.push_back(0);
    for (long i = 1; i < p.n - 1; ++i)
        if (next_below(rng, 2) == 0) backbone.push_back(i);
    backbone.push_back(p.n - 1);

    std::set<std::pair<long, long>> used;
    for (size_t i = 0; i + 1 < backbone.size(); ++i) {
        used.emplace(backbone[i], backbone[i + 1]);
        g.edges.push_back({vid(backbone[i]), vid(backbone[i + 1]), rand_cost()});
    }
    // edge_prob = pn/pd as an exact coin
    const auto pn = p.edge_prob.get_num().get_ui();
    const auto pd = p.edge_prob.get_den().get_ui();
    for (long i = 0; i < p.n; ++i) {
        for (long j = i + 1; j < p.n; ++j) {
            bool keep = next_below(rng, pd) < pn;
            if (!keep || used.count({i, j})) continue;
            used.emplace(i, j);
            g.edges.push_back({vid(i), vid(j), rand_cost()});
        }
    }
    std::sort(g.edges.begin(), g.edges.end(), [](const Edge& a, const Edge& b) {
        return std::tie(a.from, a.to) < std::tie(b.from, b.to);
    });
    g.validate();
    return g;
}

std::string render_graph(const TaskGraph& g) {
    std::ostringstream os;
    os << "graph " << g.name << "\n";
    for (const auto& n : g.nodes) os << "node " << n << "\n";
    for (const auto& e : g.edges)
        os << "edge " << e.from << " " << e.to << " " << to_string(e.cost) << "\n";
    os << "start " << g.start << "\n";
    os << "target " << g.target << "\n";
    if (g.goal_reward) os << "goalreward " << to_string(*g.goal_reward) << "\n";
    return os.str();
}

TaskGraph parse_graph(const std::string& text) {
    TaskGraph g;
    bool saw_graph = false, saw_start = false, saw_target = false;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw)) continue;
        auto want = [&](int n_args, std::vector<std::string>& out) {
            out.clear();
            std::string tok;
            while (ls >> tok) out.push_back(tok);
            if (static_cast<int>(out.size()) != n_args)
                throw Error(Err::ParseError, "line " + std::to_string(lineno) + ": '" + kw +
                                                 "' expects " + std::to_string(n_args) + " fields");
        };
        std::vector<std::string> args;
        if (kw == "graph") {
            want(1, args);
            g.name = args[0];
            saw_graph = true;
        } else if (kw == "node") {
            want(1, args);
            g.nodes.push_back(args[0]);
        } else if (kw == "edge") {
            want(3, args);
            auto c = parse_rational(args[2]);
            if (!c) throw Error(Err::ParseError, "line " + std::to_string(lineno) + ": bad rational " + args[2]);
            g.edges.push_back({args[0], args[1], *c});
        } else if (kw == "start") {
            want(1, args);
            g.start = args[0];
            saw_start = true;
        } else if (kw == "target") {
            want(1, args);
            g.target = args[0];
            saw_target = true;
        } else if (kw == "goalreward") {
            want(1, args);
            auto r = parse_rational(args[0]);
            if (!r) throw Error(Err::ParseError, "line " + std::to_string(lineno) + ": bad rational " + args[0]);
            g.goal_reward = *r;
        } else {
            throw Error(Err::ParseError, "line " + std::to_string(lineno) + ": unknown directive " + kw);
        }
    }
    if (!saw_graph || !saw_start || !saw_target)
        throw Error(Err::ParseError, "graph/start/target lines are required");
    g.validate();
    return g;
}

}  // namespace tip
