#include "tip/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "tip/agent.hpp"
#include "tip/cnf.hpp"
#include "tip/motivating.hpp"
#include "tip/reductions.hpp"
#include "tip/rewards_opt.hpp"
#include "tip/shortcut.hpp"
#include "tip/task_graph.hpp"

namespace tip::cli {

namespace {

Rational need_rational(const std::string& text, const std::string& flag) {
    auto q = parse_rational(text);
    if (!q) throw CLI::ValidationError(flag, "expected a rational like 3/4, got '" + text + "'");
    return *q;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Err::ParseError, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw Error(Err::ParseError, "cannot write " + path);
    f << text;
}

TieBreak parse_tie(const std::string& s) {
    if (s == "lex") return TieBreak::Lexicographic;
    if (s == "procrastinate") return TieBreak::Procrastinate;
    throw CLI::ValidationError("--tie", "expected lex or procrastinate");
}

struct GenAkerlofOpts {
    long k = 2;
    std::string beta, base = "1", out;
};
struct GenRandomOpts {
    long n = 2;
    std::uint64_t seed = 0;
    std::string edge_prob = "1/2", out;
    long max_num = 6, max_den = 3;
};
struct GenGadgetOpts {
    std::string cnf, beta, out;
    int pad_n = 0;
};
struct SimulateOpts {
    std::string graph, beta, reward, rewards_file, tie = "lex";
};
struct MotivateOpts {
    std::string graph, beta, reward;
    bool minimal = false;
    long long budget = 1000000;
};
struct RewardsOpts {
    std::string graph, beta, bound;
    int variant = 1;
    long long budget = 100000;
};
struct VerifyReductionOpts {
    std::string cnf, beta, which;
};
struct VerifyBoundOpts {
    std::string graph, beta, tie = "lex";
};

int do_simulate(const SimulateOpts& o, std::ostream& out) {
    TaskGraph g = parse_graph(read_file(o.graph));
    AgentConfig cfg;
    cfg.beta = need_rational(o.beta, "--beta");
    cfg.tie_break = parse_tie(o.tie);
    Trajectory t;
    if (!o.rewards_file.empty()) {
        RewardConfig rw = parse_rewards(read_file(o.rewards_file));
        t = simulate_with_rewards(g, cfg, rw);
    } else if (!o.reward.empty() || g.goal_reward) {
        cfg.goal_reward = o.reward.empty() ? *g.goal_reward : need_rational(o.reward, "--reward");
        t = simulate_with_goal_reward(g, cfg);
    } else {
        t = simulate_plain(g, cfg);
    }
    out << render_trajectory(g, t);
    return 0;
}

int do_ratio(const VerifyBoundOpts& o, std::ostream& out) {
    TaskGraph g = parse_graph(read_file(o.graph));
    AgentConfig cfg;
    cfg.beta = need_rational(o.beta, "--beta");
    cfg.tie_break = parse_tie(o.tie);
    Rational r = cost_ratio(g, cfg);
    out << "ratio " << to_string(r) << "\n";
    ShortcutCertificate cert = analyze(g, cfg);
    out << render_certificate(cert);
    return 0;
}

int do_motivate(const MotivateOpts& o, std::ostream& out) {
    TaskGraph g = parse_graph(read_file(o.graph));
    AgentConfig cfg;
    cfg.beta = need_rational(o.beta, "--beta");
    if (!o.reward.empty())
        cfg.goal_reward = need_rational(o.reward, "--reward");
    else if (g.goal_reward)
        cfg.goal_reward = g.goal_reward;
    else
        throw CLI::ValidationError("--reward", "no goal reward given and none in the graph file");
    MotivatingSearchResult res = o.minimal ? find_minimal_motivating_subgraph(g, cfg, o.budget)
                                           : find_motivating_subgraph(g, cfg, o.budget);
    out << "explored " << res.stats.subsets_explored << " oracle " << res.stats.oracle_calls
        << "\n";
    if (!res.found()) {
        out << "NONE\n";
        return 1;
    }
    out << render_subgraph(res.subgraph);
    return 0;
}

int do_rewards(const RewardsOpts& o, std::ostream& out) {
    MtrInstance inst;
    inst.graph = parse_graph(read_file(o.graph));
    inst.beta = need_rational(o.beta, "--beta");
    if (!o.bound.empty()) inst.bound = need_rational(o.bound, "--bound");
    switch (o.variant) {
        case 1: inst.variant = MtrVariant::I; break;
        case 2: inst.variant = MtrVariant::II; break;
        case 3: inst.variant = MtrVariant::III; break;
        default: throw CLI::ValidationError("--variant", "expected 1, 2 or 3");
    }
    SolveBudget budget;
    budget.max_lp_solves = o.budget;
    auto sol = solve_exact(inst, budget);
    if (!sol) {
        out << "NONE\n";
        return 1;
    }
    out << render_solution(*sol);
    if (inst.bound) {
        bool within = sol->objective <= *inst.bound;
        out << "within-bound " << (within ? "true" : "false") << "\n";
        if (!within) return 1;
    }
    return 0;
}

int do_verify_bound(const VerifyBoundOpts& o, std::ostream& out) {
    TaskGraph g = parse_graph(read_file(o.graph));
    AgentConfig cfg;
    cfg.beta = need_rational(o.beta, "--beta");
    cfg.tie_break = parse_tie(o.tie);
    ShortcutCertificate cert = analyze(g, cfg);
    check_certificate(cert);
    Rational d = *dist(g, g.start, g.target);
    Rational lower = certified_lower_bound(cert, g);
    Rational bound = ratio_bound(cert, cfg.beta);
    Trajectory walk = simulate_plain(g, cfg);
    out << render_certificate(cert);
    out << "dist " << to_string(d) << "\n";
    out << "lowerbound " << to_string(lower) << "\n";
    bool ok = d >= lower;
    if (d > 0) {
        Rational r = walk.total_cost / d;
        out << "ratio " << to_string(r) << "\n";
        ok = ok && r <= bound;
    }
    if (cert.max_s_size() >= 1) {
        auto w = minor_witness_from_certificate(g, cert);
        if (w) {
            validate_minor_witness(g, *w);
            out << "minor-witness F" << w->k << " verified\n";
        } else {
            out << "minor-witness unavailable\n";
            ok = false;
        }
    }
    out << (ok ? "bound ok\n" : "bound VIOLATED\n");
    return ok ? 0 : 1;
}

int do_verify_reduction(const VerifyReductionOpts& o, std::ostream& out) {
    Formula3CNF f = parse_dimacs(read_file(o.cnf));
    Rational beta = need_rational(o.beta, "--beta");
    auto asg = sat_oracle(f);
    out << "sat " << (asg ? "yes" : "no") << "\n";
    if (o.which == "mms") {
        MmsGadget g = build_mms_gadget(f, beta);
        MotivatingSearchResult res = find_motivating_subgraph(g.graph, g.agent());
        out << "motivating-subgraph " << (res.found() ? "found" : "none") << "\n";
        bool ok = res.found() == asg.has_value();
        if (asg) {
            Subgraph sub = assignment_to_mms(g, *asg);
            bool motivating = is_motivating(sub, g.agent());
            bool minimal = motivating && check_minimality(sub, g.agent());
            MmsAudit audit = audit_mms_structure(g, sub);
            std::vector<bool> back = mms_to_assignment(g, sub);
            bool back_ok = eval_formula(f, back);
            out << "construction motivating " << (motivating ? "yes" : "no") << " minimal "
                << (minimal ? "yes" : "no") << " audit " << (audit.ok ? "ok" : "FAIL")
                << " roundtrip " << (back_ok ? "ok" : "FAIL") << "\n";
            for (const auto& msg : audit.failures) out << "  audit: " << msg << "\n";
            ok = ok && motivating && minimal && audit.ok && back_ok;
        }
        out << (ok ? "reduction ok\n" : "reduction FAILED\n");
        return ok ? 0 : 1;
    }
    if (o.which == "mtr") {
        MtrGadget g = [&] {
            try {
                return build_mtr_gadget(f, beta);
            } catch (const Error& e) {
                if (e.code() != Err::NTooSmall) throw;
                std::string msg = e.what();
                int n = std::stoi(msg.substr(msg.rfind(' ') + 1));
                return build_mtr_gadget(f, beta, n);
            }
        }();
        out << "gadget n " << g.n << " l " << g.l << "\n";
        ConstantsReport rep = verify_constants(g);
        out << "constants " << (rep.all_ok ? "ok" : "FAIL") << "\n";
        bool ok = rep.all_ok;
        if (asg) {
            MtrForwardCheck fc = verify_mtr_forward(g, *asg);
            out << "forward " << (fc.ok ? "ok" : "FAIL") << " objective "
                << to_string(fc.objective) << "\n";
            for (const auto& msg : fc.failures) out << "  forward: " << msg << "\n";
            RewardConfig rw = assignment_to_rewards(g, *asg);
            std::vector<bool> back = rewards_to_assignment(g, rw);
            bool round = back == *asg;
            out << "roundtrip " << (round ? "ok" : "FAIL") << "\n";
            ok = ok && fc.ok && round;
        }
        out << (ok ? "reduction ok\n" : "reduction FAILED\n");
        return ok ? 0 : 1;
    }
    throw CLI::ValidationError("--which", "expected mms or mtr");
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"time-inconsistent planning toolkit"};
    app.require_subcommand(1);

    GenAkerlofOpts ga;
    GenRandomOpts grnd;
    GenGadgetOpts gmms, gmtr;
    SimulateOpts sim;
    MotivateOpts mot;
    RewardsOpts rws;
    VerifyReductionOpts vred;
    VerifyBoundOpts vbound, ratio;

    auto* gen = app.add_subcommand("gen", "generate graphs");
    gen->require_subcommand(1);
    auto* akerlof = gen->add_subcommand("akerlof", "weighted fan chain with ratio beta^(2-k)");
    akerlof->add_option("--k", ga.k)->required();
    akerlof->add_option("--beta", ga.beta)->required();
    akerlof->add_option("--base", ga.base);
    akerlof->add_option("--out", ga.out);
    auto* random = gen->add_subcommand("random", "seeded random DAG with an s->t backbone");
    random->add_option("--n", grnd.n)->required();
    random->add_option("--seed", grnd.seed)->required();
    random->add_option("--edge-prob", grnd.edge_prob);
    random->add_option("--max-num", grnd.max_num);
    random->add_option("--max-den", grnd.max_den);
    random->add_option("--out", grnd.out);
    auto* genmms = gen->add_subcommand("mms", "motivating-subgraph hardness gadget from a CNF");
    genmms->add_option("--cnf", gmms.cnf)->required();
    genmms->add_option("--beta", gmms.beta)->required();
    genmms->add_option("--out", gmms.out);
    auto* genmtr = gen->add_subcommand("mtr", "reward-placement hardness gadget from a CNF");
    genmtr->add_option("--cnf", gmtr.cnf)->required();
    genmtr->add_option("--beta", gmtr.beta)->required();
    genmtr->add_option("--pad-n", gmtr.pad_n);
    genmtr->add_option("--out", gmtr.out);

    auto* simulate = app.add_subcommand("simulate", "walk the biased agent");
    simulate->add_option("--graph", sim.graph)->required();
    simulate->add_option("--beta", sim.beta)->required();
    simulate->add_option("--reward", sim.reward);
    simulate->add_option("--rewards", sim.rewards_file);
    simulate->add_option("--tie", sim.tie);

    auto* ratio_cmd = app.add_subcommand("ratio", "cost ratio plus shortcut certificate");
    ratio_cmd->add_option("--graph", ratio.graph)->required();
    ratio_cmd->add_option("--beta", ratio.beta)->required();
    ratio_cmd->add_option("--tie", ratio.tie);

    auto* motivate = app.add_subcommand("motivate", "search for a motivating subgraph");
    motivate->add_option("--graph", mot.graph)->required();
    motivate->add_option("--beta", mot.beta)->required();
    motivate->add_option("--reward", mot.reward);
    motivate->add_flag("--minimal", mot.minimal);
    motivate->add_option("--budget", mot.budget);

    auto* rewards = app.add_subcommand("rewards", "minimum-total-reward solver");
    rewards->add_option("--graph", rws.graph)->required();
    rewards->add_option("--beta", rws.beta)->required();
    rewards->add_option("--variant", rws.variant)->required();
    rewards->add_option("--bound", rws.bound);
    rewards->add_option("--budget", rws.budget);

    auto* verify = app.add_subcommand("verify", "end-to-end checks");
    verify->require_subcommand(1);
    auto* vr = verify->add_subcommand("reduction", "gadget vs SAT oracle");
    vr->add_option("--cnf", vred.cnf)->required();
    vr->add_option("--beta", vred.beta)->required();
    vr->add_option("--which", vred.which)->required();
    auto* vb = verify->add_subcommand("bound", "certificate inequality checks");
    vb->add_option("--graph", vbound.graph)->required();
    vb->add_option("--beta", vbound.beta)->required();
    vb->add_option("--tie", vbound.tie);

    std::vector<const char*> argv;
    argv.push_back("tip");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            out << app.help();
            return 0;
        }
        err << e.what() << "\n";
        return 2;
    }

    try {
        if (akerlof->parsed()) {
            TaskGraph g = gen_akerlof(ga.k, need_rational(ga.beta, "--beta"),
                                      need_rational(ga.base, "--base"));
            write_output(ga.out, render_graph(g), out);
            return 0;
        }
        if (random->parsed()) {
            RandomDagParams p;
            p.n = grnd.n;
            p.seed = grnd.seed;
            p.edge_prob = need_rational(grnd.edge_prob, "--edge-prob");
            p.max_cost_num = grnd.max_num;
            p.max_cost_den = grnd.max_den;
            write_output(grnd.out, render_graph(gen_random_dag(p)), out);
            return 0;
        }
        if (genmms->parsed()) {
            MmsGadget g = build_mms_gadget(parse_dimacs(read_file(gmms.cnf)),
                                           need_rational(gmms.beta, "--beta"));
            std::ostringstream rep;
            rep << "# f " << to_string(g.f) << " z " << to_string(g.z) << " ell " << g.ell
                << " reward " << to_string(g.reward) << "\n";
            for (const auto& note : g.dedup_notes) rep << "# dedup: " << note << "\n";
            write_output(gmms.out, rep.str() + render_graph(g.graph), out);
            return 0;
        }
        if (genmtr->parsed()) {
            MtrGadget g = build_mtr_gadget(parse_dimacs(read_file(gmtr.cnf)),
                                           need_rational(gmtr.beta, "--beta"), gmtr.pad_n);
            std::ostringstream rep;
            rep << "# n " << g.n << " l " << g.l << " x " << to_string(g.x) << " r_t "
                << to_string(g.r_t) << " target " << to_string(g.target_objective()) << "\n";
            write_output(gmtr.out, rep.str() + render_graph(g.graph), out);
            out << render_constants_report(verify_constants(g));
            return 0;
        }
        if (simulate->parsed()) return do_simulate(sim, out);
        if (ratio_cmd->parsed()) return do_ratio(ratio, out);
        if (motivate->parsed()) return do_motivate(mot, out);
        if (rewards->parsed()) return do_rewards(rws, out);
        if (vr->parsed()) return do_verify_reduction(vred, out);
        if (vb->parsed()) return do_verify_bound(vbound, out);
    } catch (const CLI::ValidationError& e) {
        err << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << e.what() << "\n";
        switch (e.code()) {
            case Err::BudgetExceeded: return 3;
            case Err::ParseError:
            case Err::SyntaxError:
            case Err::NotThreeCnf:
            case Err::BadParameter:
            case Err::NTooSmall: return 2;
            default: return 1;
        }
    }
    err << "no subcommand\n";
    return 2;
}

}  // namespace tip::cli
