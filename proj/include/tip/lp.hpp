#pragma once

#include <vector>

#include "tip/rational.hpp"

namespace tip {

// Exact-rational linear program in the form
//   minimize c.x  subject to  A x <= b,  x >= 0.
struct LinearProgram {
    int num_vars = 0;
    std::vector<Rational> objective;            // size num_vars
    std::vector<std::vector<Rational>> rows;    // each size num_vars
    std::vector<Rational> rhs;                  // one per row

    void add_row(std::vector<Rational> coeffs, Rational bound) {
        rows.push_back(std::move(coeffs));
        rhs.push_back(std::move(bound));
    }
};

struct LpResult {
    enum class Status { Optimal, Infeasible, Unbounded } status = Status::Infeasible;
    Rational objective;
    std::vector<Rational> x;
};

// Two-phase primal simplex with Bland's rule; every pivot is exact, so the
// result is the true rational optimum.
LpResult solve_lp(const LinearProgram& lp);

}  // namespace tip
