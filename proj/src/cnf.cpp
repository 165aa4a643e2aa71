#include "tip/cnf.hpp"

#include <cstdlib>
#include <sstream>

namespace tip {

Formula3CNF parse_dimacs(const std::string& text) {
    Formula3CNF f;
    std::istringstream is(text);
    std::string line;
    bool saw_header = false;
    int declared_clauses = -1;
    std::vector<int> pending;
    std::vector<std::vector<int>> raw;
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok == "c" || tok[0] == 'c') continue;  // comment
        if (tok == "p") {
            std::string fmt;
            if (!(ls >> fmt >> f.num_vars >> declared_clauses) || fmt != "cnf")
                throw Error(Err::SyntaxError, "bad problem line");
            if (f.num_vars < 1) throw Error(Err::SyntaxError, "need at least one variable");
            saw_header = true;
            continue;
        }
        if (!saw_header) throw Error(Err::SyntaxError, "clause before problem line");
        ls.clear();
        ls.str(line);
        int lit;
        while (ls >> lit) {
            if (lit == 0) {
                raw.push_back(pending);
                pending.clear();
            } else {
                pending.push_back(lit);
            }
        }
        if (!ls.eof()) throw Error(Err::SyntaxError, "non-integer token in clause");
    }
    if (!saw_header) throw Error(Err::SyntaxError, "missing problem line");
    if (!pending.empty()) raw.push_back(pending);  // tolerate a missing final 0
    for (const auto& cl : raw) {
        if (cl.size() != 3)
            throw Error(Err::NotThreeCnf,
                        "clause with " + std::to_string(cl.size()) + " literals");
        std::array<Literal, 3> c;
        for (int j = 0; j < 3; ++j) {
            int v = std::abs(cl[j]);
            if (v < 1 || v > f.num_vars)
                throw Error(Err::SyntaxError, "literal out of range: " + std::to_string(cl[j]));
            c[j] = {v, cl[j] > 0};
        }
        f.clauses.push_back(c);
    }
    if (declared_clauses >= 0 && declared_clauses != f.num_clauses())
        throw Error(Err::SyntaxError, "clause count does not match header");
    return f;
}

std::string render_dimacs(const Formula3CNF& f) {
    std::ostringstream os;
    os << "p cnf " << f.num_vars << " " << f.num_clauses() << "\n";
    for (const auto& c : f.clauses) {
        for (const auto& l : c) os << (l.positive ? l.var : -l.var) << " ";
        os << "0\n";
    }
    return os.str();
}

bool eval_formula(const Formula3CNF& f, const std::vector<bool>& assignment) {
    for (const auto& c : f.clauses) {
        bool sat = false;
        for (const auto& l : c) {
            bool v = assignment.at(l.var - 1);
            if (v == l.positive) {
                sat = true;
                break;
            }
        }
        if (!sat) return false;
    }
    return true;
}

std::optional<std::vector<bool>> sat_oracle(const Formula3CNF& f) {
    if (f.num_vars > 24)
        throw Error(Err::BadParameter, "brute-force oracle limited to 24 variables");
    for (std::uint64_t m = 0; m < (1ull << f.num_vars); ++m) {
        std::vector<bool> asg(f.num_vars);
        for (int i = 0; i < f.num_vars; ++i) asg[i] = (m >> i) & 1;
        if (eval_formula(f, asg)) return asg;
    }
    return std::nullopt;
}

}  // namespace tip
