#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "tip/error.hpp"

namespace tip {

struct Literal {
    int var = 0;  // 1-based
    bool positive = true;
};

// Exactly-3-literal clauses; duplicate literals inside a clause are allowed.
struct Formula3CNF {
    int num_vars = 0;
    std::vector<std::array<Literal, 3>> clauses;

    int num_clauses() const { return static_cast<int>(clauses.size()); }
};

// Standard DIMACS CNF; every clause must have exactly three literals.
// Throws SyntaxError / NotThreeCnf.
Formula3CNF parse_dimacs(const std::string& text);
std::string render_dimacs(const Formula3CNF& f);

bool eval_formula(const Formula3CNF& f, const std::vector<bool>& assignment);

// Brute force over all 2^n assignments (n <= 24 guard); first satisfying
// assignment in counting order, or nullopt when unsatisfiable.
std::optional<std::vector<bool>> sat_oracle(const Formula3CNF& f);

}  // namespace tip
