#include "tip/shortcut.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace tip {

int ShortcutCertificate::max_s_size() const {
    size_t m = 0;
    for (const auto& s : s_sets) m = std::max(m, s.size());
    return static_cast<int>(m);
}

ShortcutCertificate analyze(const TaskGraph& g, const AgentConfig& cfg) {
    ShortcutCertificate cert;
    cert.beta = cfg.beta;
    Trajectory traj = simulate_plain(g, cfg);
    if (!traj.reached()) throw Error(Err::TargetUnreachable, "agent did not reach target");
    cert.path = traj.nodes;

    DistTable dt(g, g.target_index());
    std::map<std::string, int> pos;  // position on P
    for (int i = 0; i < static_cast<int>(cert.path.size()); ++i) pos[cert.path[i]] = i;

    // Shortcut nodes: canonical min-cost continuation starts elsewhere.
    for (int i = 0; i + 1 < static_cast<int>(cert.path.size()); ++i) {
        int u = g.index_of(cert.path[i]);
        auto mp = dt.canonical_path(u);
        if (mp.size() < 2) continue;
        if (g.nodes[mp[1]] == cert.path[i + 1]) continue;
        Shortcut sc;
        sc.u = cert.path[i];
        for (int idx : mp) sc.min_path.push_back(g.nodes[idx]);
        sc.v = sc.min_path[1];
        // Second crossing: first node of the min-cost path after u that lies on P.
        for (size_t j = 1; j < sc.min_path.size(); ++j) {
            if (pos.count(sc.min_path[j])) {
                sc.w = sc.min_path[j];
                break;
            }
        }
        cert.shortcuts.push_back(std::move(sc));
    }

    const int n = cert.n();
    std::map<std::string, int> shortcut_index;  // node -> 1-based index
    for (int i = 0; i < n; ++i) shortcut_index[cert.shortcuts[i].u] = i + 1;

    // Merge indices t_i: j when w = u_j; j + 1/2 when w is the P-successor of
    // u_j; otherwise the first shortcut index past w, or n+1.
    for (int i = 0; i < n; ++i) {
        Shortcut& sc = cert.shortcuts[i];
        int wp = pos.at(sc.w);
        auto it = shortcut_index.find(sc.w);
        if (it != shortcut_index.end()) {
            sc.t_value = rat(it->second);
            continue;
        }
        if (wp > 0) {
            auto pred = shortcut_index.find(cert.path[wp - 1]);
            if (pred != shortcut_index.end()) {
                sc.t_value = rat(pred->second) + rat(1, 2);
                continue;
            }
        }
        sc.t_value = rat(n + 1);
        for (int j = 0; j < n; ++j) {
            if (pos.at(cert.shortcuts[j].u) > wp) {
                sc.t_value = rat(j + 1);
                break;
            }
        }
    }

    // S_i = { j < i : t_j >= i }, computed for i = 1..n+1.
    cert.s_sets.assign(n + 1, {});
    for (int i = 1; i <= n + 1; ++i)
        for (int j = 1; j < i; ++j)
            if (cert.shortcuts[j - 1].t_value >= i) cert.s_sets[i - 1].push_back(j);

    // Coefficient recursion.
    cert.a.assign(n + 1, rat(0));
    cert.b.assign(n, rat(0));
    const Rational& beta = cert.beta;
    for (int i = 1; i <= n + 1; ++i) {
        if (i == 1) {
            cert.a[0] = rat(1);
        } else {
            Rational acc = beta * cert.b[i - 2];
            for (int j = 1; j < i; ++j)
                if (cert.shortcuts[j - 1].t_value == Rational(rat(i) - rat(1, 2)))
                    acc += (1 - beta) * cert.b[j - 1];
            cert.a[i - 1] = acc;
        }
        if (i <= n) {
            Rational acc = cert.a[i - 1];
            for (int j = 1; j < i; ++j)
                if (cert.shortcuts[j - 1].t_value == rat(i)) acc += (1 - beta) * cert.b[j - 1];
            cert.b[i - 1] = acc;
        }
    }
    return cert;
}

namespace {

// Cost along the certificate path between two path positions.
Rational path_cost(const TaskGraph& g, const std::vector<std::string>& path, int from, int to) {
    Rational s = rat(0);
    for (int i = from; i < to; ++i) {
        auto e = g.edge_between(g.index_of(path[i]), g.index_of(path[i + 1]));
        s += g.edges[*e].cost;
    }
    return s;
}

}  // namespace

Rational certified_lower_bound(const ShortcutCertificate& cert, const TaskGraph& g) {
    const int n = cert.n();
    std::map<std::string, int> pos;
    for (int i = 0; i < static_cast<int>(cert.path.size()); ++i) pos[cert.path[i]] = i;
    Rational total = rat(0);
    int prev_exit = 0;  // position of u_{j-1}' (u_0' = s)
    for (int j = 1; j <= n; ++j) {
        int uj = pos.at(cert.shortcuts[j - 1].u);
        total += cert.a[j - 1] * path_cost(g, cert.path, prev_exit, uj);
        total += cert.b[j - 1] * path_cost(g, cert.path, uj, uj + 1);
        prev_exit = uj + 1;
    }
    total += cert.a[n] * path_cost(g, cert.path, prev_exit, static_cast<int>(cert.path.size()) - 1);
    return total;
}

Rational ratio_bound(const ShortcutCertificate& cert, const Rational& beta) {
    return pow_int(beta, -cert.max_s_size());
}

void check_certificate(const ShortcutCertificate& cert) {
    const int n = cert.n();
    const Rational& beta = cert.beta;
    auto fail = [](const std::string& msg) { throw Error(Err::PreconditionViolated, msg); };
    if (cert.a.size() != static_cast<size_t>(n + 1) || cert.b.size() != static_cast<size_t>(n) ||
        cert.s_sets.size() != static_cast<size_t>(n + 1))
        fail("certificate arrays inconsistent with shortcut count");
    if (n > 0 && cert.a[0] != 1) fail("a_1 != 1");
    for (int i = 1; i <= n; ++i)
        if (cert.shortcuts[i - 1].t_value < i + 1) fail("t_i < i+1 at i=" + std::to_string(i));
    for (int i = 1; i <= n + 1; ++i) {
        if (cert.a[i - 1] <= 0) fail("a_i <= 0");
        if (i <= n && cert.b[i - 1] <= 0) fail("b_i <= 0");
        Rational lower = pow_int(beta, static_cast<long>(cert.s_sets[i - 1].size()));
        if (cert.a[i - 1] < lower) fail("a_i < beta^|S_i| at i=" + std::to_string(i));
        if (i <= n && cert.b[i - 1] < cert.a[i - 1]) fail("b_i < a_i at i=" + std::to_string(i));
    }
    // Running-sum identity over the b sequence, and the normalization identity.
    for (int m = 2; m <= n + 1; ++m) {
        Rational lhs = rat(0);
        for (int j : cert.s_sets[m - 1]) lhs += cert.b[j - 1];
        Rational rhs = cert.b[m - 2];
        for (int j : cert.s_sets[m - 2])
            if (cert.shortcuts[j - 1].t_value >= m) rhs += cert.b[j - 1];
        if (lhs != rhs) fail("running-sum identity fails at m=" + std::to_string(m));
    }
    for (int m = 1; m <= n + 1; ++m) {
        Rational acc = cert.a[m - 1];
        for (int j : cert.s_sets[m - 1]) acc += (1 - beta) * cert.b[j - 1];
        if (acc != 1) fail("normalization identity fails at m=" + std::to_string(m));
    }
}

MinorWitness build_minor_witness(const TaskGraph& g, const std::vector<std::string>& path,
                                 const std::vector<std::string>& anchors,
                                 const std::string& u_prime,
                                 const std::vector<std::vector<std::string>>& escape_paths) {
    if (anchors.empty() || anchors.size() != escape_paths.size())
        throw Error(Err::PreconditionViolated, "need one escape path per anchor");
    std::map<std::string, int> pos;
    for (int i = 0; i < static_cast<int>(path.size()); ++i) pos[path[i]] = i;
    const int k = static_cast<int>(anchors.size()) + 1;

    std::vector<int> anchor_pos;
    for (const auto& a : anchors) {
        if (!pos.count(a)) throw Error(Err::PreconditionViolated, "anchor not on path: " + a);
        anchor_pos.push_back(pos.at(a));
    }
    for (size_t i = 0; i + 1 < anchor_pos.size(); ++i)
        if (anchor_pos[i] >= anchor_pos[i + 1])
            throw Error(Err::PreconditionViolated, "anchors not in path order");
    if (!pos.count(u_prime) || pos.at(u_prime) != anchor_pos.back() + 1)
        throw Error(Err::PreconditionViolated, "u' must immediately follow the last anchor");
    const int up_pos = pos.at(u_prime);
    if (up_pos + 1 >= static_cast<int>(path.size()))
        throw Error(Err::PreconditionViolated, "path must continue past u'");

    MinorWitness w;
    w.k = k;
    w.branch_sets.assign(k + 1, {});
    // U_1..U_{k-1}: consecutive path segments, U_k = {u'}.
    for (int l = 0; l < k - 1; ++l) {
        int hi = (l + 1 < k - 1) ? anchor_pos[l + 1] : up_pos;
        for (int p = anchor_pos[l]; p < hi; ++p) w.branch_sets[l].push_back(path[p]);
    }
    w.branch_sets[k - 1].push_back(u_prime);

    // Hub: escape-path tails up to and including their crossings, plus the
    // path suffix strictly after u'.
    std::set<std::string> hub;
    std::vector<std::pair<int, int>> hub_edges;  // (anchor index, first escape edge)
    for (size_t l = 0; l < escape_paths.size(); ++l) {
        const auto& ep = escape_paths[l];
        if (ep.size() < 2 || ep.front() != anchors[l])
            throw Error(Err::PreconditionViolated, "escape path must start at its anchor");
        int cross = -1;
        for (size_t i = 1; i < ep.size(); ++i) {
            if (pos.count(ep[i])) {
                cross = static_cast<int>(i);
                break;
            }
        }
        if (cross < 0) throw Error(Err::PreconditionViolated, "escape path never re-crosses");
        if (pos.at(ep[cross]) <= up_pos)
            throw Error(Err::PreconditionViolated,
                        "escape path re-crosses at or before u': " + ep[cross]);
        for (int i = 1; i <= cross; ++i) hub.insert(ep[i]);
    }
    for (int p = up_pos + 1; p < static_cast<int>(path.size()); ++p) hub.insert(path[p]);
    w.branch_sets[k].assign(hub.begin(), hub.end());

    auto edge_idx = [&](const std::string& a, const std::string& b) {
        auto e = g.edge_between(g.index_of(a), g.index_of(b));
        if (!e) throw Error(Err::PreconditionViolated, "missing edge " + a + " -> " + b);
        return *e;
    };
    // Chain adjacencies U_l - U_{l+1}: the path edge entering the next set.
    for (int l = 0; l < k - 1; ++l) {
        int into = (l + 1 < k - 1) ? anchor_pos[l + 1] : up_pos;
        w.connecting_edges.push_back({l, l + 1, edge_idx(path[into - 1], path[into])});
    }
    // Hub adjacencies U_l - W via each escape path's first edge.
    for (int l = 0; l < k - 1; ++l)
        w.connecting_edges.push_back({l, k, edge_idx(anchors[l], escape_paths[l][1])});
    // U_k - W via the path edge leaving u'.
    w.connecting_edges.push_back({k - 1, k, edge_idx(u_prime, path[up_pos + 1])});

    validate_minor_witness(g, w);
    return w;
}

std::optional<MinorWitness> minor_witness_from_certificate(const TaskGraph& g,
                                                           const ShortcutCertificate& cert) {
    int sigma = cert.max_s_size();
    if (sigma < 1) return std::nullopt;
    std::map<std::string, int> pos;
    for (int i = 0; i < static_cast<int>(cert.path.size()); ++i) pos[cert.path[i]] = i;
    for (size_t i = 0; i < cert.s_sets.size(); ++i) {
        if (static_cast<int>(cert.s_sets[i].size()) != sigma) continue;
        std::vector<std::string> anchors;
        std::vector<std::vector<std::string>> eps;
        for (int j : cert.s_sets[i]) {
            anchors.push_back(cert.shortcuts[j - 1].u);
            eps.push_back(cert.shortcuts[j - 1].min_path);
        }
        int last_pos = pos.at(anchors.back());
        if (last_pos + 1 >= static_cast<int>(cert.path.size())) continue;
        try {
            return build_minor_witness(g, cert.path, anchors, cert.path[last_pos + 1], eps);
        } catch (const Error&) {
            continue;  // merge point lands exactly on u'; try another attaining index
        }
    }
    return std::nullopt;
}

void validate_minor_witness(const TaskGraph& g, const MinorWitness& w) {
    auto fail = [](const std::string& msg) { throw Error(Err::PreconditionViolated, msg); };
    if (static_cast<int>(w.branch_sets.size()) != w.k + 1) fail("branch set count != k+1");
    std::set<std::string> seen;
    for (const auto& bs : w.branch_sets) {
        if (bs.empty()) fail("empty branch set");
        for (const auto& id : bs) {
            if (!g.has_node(id)) fail("branch set node not in graph: " + id);
            if (!seen.insert(id).second) fail("branch sets overlap at " + id);
        }
    }
    // Connectivity inside the skeleton (directions dropped).
    for (const auto& bs : w.branch_sets) {
        std::set<std::string> in_set(bs.begin(), bs.end());
        std::set<std::string> reached;
        std::vector<std::string> stack{bs.front()};
        reached.insert(bs.front());
        while (!stack.empty()) {
            std::string u = stack.back();
            stack.pop_back();
            int ui = g.index_of(u);
            auto visit = [&](const std::string& v) {
                if (in_set.count(v) && !reached.count(v)) {
                    reached.insert(v);
                    stack.push_back(v);
                }
            };
            for (int e : g.out_edges(ui)) visit(g.edges[e].to);
            for (int e : g.in_edges(ui)) visit(g.edges[e].from);
        }
        if (reached.size() != in_set.size()) fail("branch set not connected in skeleton");
    }
    // Required fan adjacencies: chain l-(l+1) for l=1..k-1 and hub l-W for l=1..k.
    std::set<std::pair<int, int>> needed;
    for (int l = 0; l < w.k - 1; ++l) needed.insert({l, l + 1});
    for (int l = 0; l < w.k; ++l) needed.insert({l, w.k});
    std::set<std::pair<int, int>> witnessed;
    for (const auto& adj : w.connecting_edges) {
        if (adj.edge < 0 || adj.edge >= g.edge_count()) fail("bad witness edge index");
        const Edge& e = g.edges[adj.edge];
        auto in_a = [&](const std::string& id) {
            const auto& bs = w.branch_sets[adj.set_a];
            return std::find(bs.begin(), bs.end(), id) != bs.end();
        };
        auto in_b = [&](const std::string& id) {
            const auto& bs = w.branch_sets[adj.set_b];
            return std::find(bs.begin(), bs.end(), id) != bs.end();
        };
        bool ok = (in_a(e.from) && in_b(e.to)) || (in_a(e.to) && in_b(e.from));
        if (!ok) fail("witness edge does not join its branch sets");
        int a = std::min(adj.set_a, adj.set_b), b = std::max(adj.set_a, adj.set_b);
        witnessed.insert({a, b});
    }
    for (const auto& req : needed)
        if (!witnessed.count(req))
            fail("missing fan adjacency " + std::to_string(req.first + 1) + "-" +
                 (req.second == w.k ? std::string("W") : std::to_string(req.second + 1)));
}

std::string render_certificate(const ShortcutCertificate& cert) {
    std::ostringstream os;
    const int n = cert.n();
    for (int i = 0; i < n; ++i) {
        const Shortcut& sc = cert.shortcuts[i];
        os << "shortcut " << sc.u << " via " << sc.v << " merge " << sc.w << " t="
           << to_string(sc.t_value) << "\n";
    }
    for (int i = 1; i <= n + 1; ++i) {
        os << "S_" << i << " {";
        for (size_t j = 0; j < cert.s_sets[i - 1].size(); ++j)
            os << (j ? "," : "") << cert.s_sets[i - 1][j];
        os << "}\n";
    }
    for (int i = 1; i <= n + 1; ++i) os << "a_" << i << " " << to_string(cert.a[i - 1]) << "\n";
    for (int i = 1; i <= n; ++i) os << "b_" << i << " " << to_string(cert.b[i - 1]) << "\n";
    os << "bound " << to_string(pow_int(cert.beta, -cert.max_s_size())) << "\n";
    return os.str();
}

}  // namespace tip
