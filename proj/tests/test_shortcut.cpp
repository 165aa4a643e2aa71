#include <algorithm>

#include "doctest.h"
#include "tip/shortcut.hpp"

using namespace tip;

namespace {

AgentConfig cfg(long num, long den, TieBreak tie = TieBreak::Lexicographic) {
    AgentConfig c;
    c.beta = rat(num, den);
    c.tie_break = tie;
    return c;
}

// s -> a -> t walked by the biased agent while the direct edge is optimal.
TaskGraph detour_graph() {
    return parse_graph(
        "graph detour\nnode s\nnode a\nnode t\n"
        "edge s t 1/1\nedge s a 0/1\nedge a t 3/2\nstart s\ntarget t\n");
}

}  // namespace

TEST_CASE("no shortcuts when the agent follows a min-cost path") {
    TaskGraph g = parse_graph("graph g\nnode s\nnode t\nedge s t 5/1\nstart s\ntarget t\n");
    ShortcutCertificate cert = analyze(g, cfg(1, 2));
    CHECK(cert.n() == 0);
    CHECK(cert.max_s_size() == 0);
    CHECK(ratio_bound(cert, rat(1, 2)) == rat(1));
    CHECK(certified_lower_bound(cert, g) == rat(5));
    CHECK_NOTHROW(check_certificate(cert));
}

TEST_CASE("akerlof k=3: single shortcut, bound equals dist") {
    TaskGraph g = gen_akerlof(3, rat(1, 2), rat(1));
    ShortcutCertificate cert = analyze(g, cfg(1, 2, TieBreak::Procrastinate));
    REQUIRE(cert.n() == 1);
    CHECK(cert.shortcuts[0].u == "v1");
    CHECK(cert.shortcuts[0].v == "t");
    CHECK(cert.max_s_size() == 1);
    CHECK(certified_lower_bound(cert, g) == rat(1));
    CHECK(ratio_bound(cert, rat(1, 2)) == rat(2));
    CHECK_NOTHROW(check_certificate(cert));
}

TEST_CASE("akerlof family: simulated ratio equals the certificate bound exactly") {
    for (long k = 2; k <= 7; ++k) {
        for (auto [bn, bd] : {std::pair<long, long>{1, 2}, {9, 10}}) {
            TaskGraph g = gen_akerlof(k, rat(bn, bd), rat(1));
            AgentConfig c = cfg(bn, bd, TieBreak::Procrastinate);
            Rational r = cost_ratio(g, c);
            CHECK(r == pow_int(rat(bn, bd), 2 - k));
            ShortcutCertificate cert = analyze(g, c);
            CHECK(ratio_bound(cert, rat(bn, bd)) == r);
        }
    }
}

TEST_CASE("random graphs: certificate inequalities and identities hold") {
    RandomDagParams p;
    p.n = 9;
    for (std::uint64_t seed = 0; seed < 250; ++seed) {
        p.seed = seed;
        TaskGraph g = gen_random_dag(p);
        for (auto [bn, bd] : {std::pair<long, long>{1, 3}, {1, 2}, {3, 4}}) {
            AgentConfig c = cfg(bn, bd);
            ShortcutCertificate cert = analyze(g, c);
            CHECK_NOTHROW(check_certificate(cert));
            Rational d = *dist(g, g.start, g.target);
            Rational lower = certified_lower_bound(cert, g);
            CHECK(d >= lower);
            Trajectory walk = simulate_plain(g, c);
            CHECK(lower >= pow_int(rat(bn, bd), cert.max_s_size()) * walk.total_cost);
            if (d > 0) CHECK(walk.total_cost / d <= ratio_bound(cert, rat(bn, bd)));
        }
    }
}

TEST_CASE("fan witness from the smallest qualifying instance") {
    TaskGraph g = detour_graph();
    ShortcutCertificate cert = analyze(g, cfg(1, 2));
    REQUIRE(cert.n() == 1);
    CHECK(cert.path == std::vector<std::string>{"s", "a", "t"});
    CHECK(cert.shortcuts[0].min_path == std::vector<std::string>{"s", "t"});

    MinorWitness w = build_minor_witness(g, cert.path, {"s"}, "a", {{"s", "t"}});
    CHECK(w.k == 2);
    CHECK(w.branch_sets[0] == std::vector<std::string>{"s"});
    CHECK(w.branch_sets[1] == std::vector<std::string>{"a"});
    CHECK(w.branch_sets[2] == std::vector<std::string>{"t"});
    CHECK_NOTHROW(validate_minor_witness(g, w));

    auto from_cert = minor_witness_from_certificate(g, cert);
    REQUIRE(from_cert.has_value());
    CHECK(from_cert->k == 2);
}

TEST_CASE("witness construction rejects merge points at or before u'") {
    TaskGraph g = parse_graph(
        "graph early\nnode s\nnode a\nnode b\nnode t\n"
        "edge s a 0/1\nedge a b 0/1\nedge b t 1/1\nedge s b 2/1\nstart s\ntarget t\n");
    std::vector<std::string> path{"s", "a", "b", "t"};
    // escape s->a re-crosses at a = u' itself
    CHECK_THROWS_AS(build_minor_witness(g, path, {"s"}, "a", {{"s", "a"}}), Error);
    // escape a->b re-crosses at b = u' itself
    CHECK_THROWS_AS(build_minor_witness(g, path, {"a"}, "b", {{"a", "b"}}), Error);
}

TEST_CASE("witness validation catches overlapping sets and missing adjacencies") {
    TaskGraph g = detour_graph();
    MinorWitness w;
    w.k = 2;
    w.branch_sets = {{"s"}, {"a"}, {"t"}};
    w.connecting_edges = {
        {0, 1, static_cast<int>(*g.edge_between(g.index_of("s"), g.index_of("a")))},
        {0, 2, static_cast<int>(*g.edge_between(g.index_of("s"), g.index_of("t")))},
        {1, 2, static_cast<int>(*g.edge_between(g.index_of("a"), g.index_of("t")))},
    };
    CHECK_NOTHROW(validate_minor_witness(g, w));

    MinorWitness overlap = w;
    overlap.branch_sets[0] = {"s", "a"};
    CHECK_THROWS_AS(validate_minor_witness(g, overlap), Error);

    MinorWitness missing = w;
    missing.connecting_edges.pop_back();
    CHECK_THROWS_AS(validate_minor_witness(g, missing), Error);

    MinorWitness wrong_edge = w;
    wrong_edge.connecting_edges[2].edge =
        static_cast<int>(*g.edge_between(g.index_of("s"), g.index_of("t")));
    CHECK_THROWS_AS(validate_minor_witness(g, wrong_edge), Error);
}

TEST_CASE("random graphs: a maximal S set always yields a verified fan witness") {
    RandomDagParams p;
    p.n = 10;
    int witnesses = 0;
    for (std::uint64_t seed = 0; seed < 400; ++seed) {
        p.seed = seed;
        TaskGraph g = gen_random_dag(p);
        ShortcutCertificate cert = analyze(g, cfg(1, 2));
        if (cert.max_s_size() < 1) continue;
        auto w = minor_witness_from_certificate(g, cert);
        REQUIRE_MESSAGE(w.has_value(), "seed ", seed);
        CHECK(w->k == cert.max_s_size() + 1);
        CHECK_NOTHROW(validate_minor_witness(g, *w));
        ++witnesses;
    }
    CHECK(witnesses > 50);  // the family actually exercises the construction
}

TEST_CASE("certificate rendering is stable") {
    TaskGraph g = gen_akerlof(4, rat(1, 2), rat(1));
    ShortcutCertificate cert = analyze(g, cfg(1, 2, TieBreak::Procrastinate));
    std::string r1 = render_certificate(cert);
    CHECK(r1.find("shortcut v1 via t") != std::string::npos);
    CHECK(r1.find("bound 4/1") != std::string::npos);
}
