#include "tip/lp.hpp"

#include <stdexcept>

namespace tip {

namespace {

class Simplex {
  public:
    // Columns: structural | slack (one per row) | artificial (rows with b<0) | rhs.
    Simplex(const LinearProgram& lp) : m_(static_cast<int>(lp.rows.size())), n_(lp.num_vars) {
        n_slack_ = m_;
        art_col_.assign(m_, -1);
        int n_art = 0;
        for (int i = 0; i < m_; ++i)
            if (lp.rhs[i] < 0) art_col_.at(i) = n_ + n_slack_ + n_art++;
        cols_ = n_ + n_slack_ + n_art;
        T_.assign(m_, std::vector<Rational>(cols_ + 1, rat(0)));
        basis_.assign(m_, -1);
        for (int i = 0; i < m_; ++i) {
            bool neg = lp.rhs[i] < 0;
            Rational sign = neg ? rat(-1) : rat(1);
            for (int j = 0; j < n_; ++j) T_[i][j] = sign * lp.rows[i][j];
            T_[i][n_ + i] = sign;  // slack
            T_[i][cols_] = sign * lp.rhs[i];
            if (neg) {
                T_[i][art_col_[i]] = rat(1);
                basis_[i] = art_col_[i];
            } else {
                basis_[i] = n_ + i;
            }
        }
        has_art_ = n_art > 0;
    }

    LpResult solve(const LinearProgram& lp) {
        LpResult res;
        if (has_art_) {
            // Phase 1: minimize the sum of artificials.
            obj_.assign(cols_ + 1, rat(0));
            for (int i = 0; i < m_; ++i)
                if (art_col_[i] >= 0) obj_[art_col_[i]] = rat(1);
            for (int i = 0; i < m_; ++i)
                if (basis_[i] >= 0 && obj_[basis_[i]] != 0) reduce_row(i);
            std::vector<char> allowed(cols_, 1);
            if (!iterate(allowed)) throw std::logic_error("phase-1 LP unbounded");
            if (-obj_[cols_] != 0) {
                res.status = LpResult::Status::Infeasible;
                return res;
            }
            // Pivot any artificial still basic (at value 0) out if possible.
            for (int i = 0; i < m_; ++i) {
                if (basis_[i] < n_ + n_slack_) continue;
                for (int j = 0; j < n_ + n_slack_; ++j) {
                    if (T_[i][j] != 0) {
                        pivot(i, j);
                        break;
                    }
                }
            }
        }
        // Phase 2.
        obj_.assign(cols_ + 1, rat(0));
        for (int j = 0; j < n_; ++j) obj_[j] = lp.objective[j];
        for (int i = 0; i < m_; ++i)
            if (obj_[basis_[i]] != 0) reduce_row(i);
        std::vector<char> allowed(cols_, 1);
        for (int i = 0; i < m_; ++i)
            if (art_col_[i] >= 0) allowed[art_col_[i]] = 0;
        if (!iterate(allowed)) {
            res.status = LpResult::Status::Unbounded;
            return res;
        }
        res.status = LpResult::Status::Optimal;
        res.x.assign(n_, rat(0));
        for (int i = 0; i < m_; ++i)
            if (basis_[i] < n_) res.x[basis_[i]] = T_[i][cols_];
        res.objective = -obj_[cols_];
        return res;
    }

  private:
    void reduce_row(int row) {
        Rational f = obj_[basis_[row]];
        for (int j = 0; j <= cols_; ++j) obj_[j] -= f * T_[row][j];
    }

    void pivot(int row, int col) {
        Rational piv = T_[row][col];
        for (int j = 0; j <= cols_; ++j) T_[row][j] /= piv;
        for (int i = 0; i < m_; ++i) {
            if (i == row || T_[i][col] == 0) continue;
            Rational f = T_[i][col];
            for (int j = 0; j <= cols_; ++j) T_[i][j] -= f * T_[row][j];
        }
        if (obj_[col] != 0) {
            Rational f = obj_[col];
            for (int j = 0; j <= cols_; ++j) obj_[j] -= f * T_[row][j];
        }
        basis_[row] = col;
    }

    // Bland's rule: smallest eligible entering column, smallest basic index on
    // ratio ties. Returns false on unboundedness.
    bool iterate(const std::vector<char>& allowed) {
        while (true) {
            int col = -1;
            for (int j = 0; j < cols_; ++j)
                if (allowed[j] && obj_[j] < 0) {
                    col = j;
                    break;
                }
            if (col < 0) return true;
            int row = -1;
            for (int i = 0; i < m_; ++i) {
                if (T_[i][col] <= 0) continue;
                if (row < 0) {
                    row = i;
                    continue;
                }
                Rational cur = T_[i][cols_] / T_[i][col];
                Rational best = T_[row][cols_] / T_[row][col];
                if (cur < best || (cur == best && basis_[i] < basis_[row])) row = i;
            }
            if (row < 0) return false;
            pivot(row, col);
        }
    }

    int m_, n_, n_slack_ = 0, cols_ = 0;
    bool has_art_ = false;
    std::vector<int> art_col_;
    std::vector<std::vector<Rational>> T_;
    std::vector<Rational> obj_;
    std::vector<int> basis_;
};

}  // namespace

LpResult solve_lp(const LinearProgram& lp) {
    for (const auto& row : lp.rows)
        if (static_cast<int>(row.size()) != lp.num_vars)
            throw std::invalid_argument("LP row width mismatch");
    if (static_cast<int>(lp.objective.size()) != lp.num_vars)
        throw std::invalid_argument("LP objective width mismatch");
    Simplex s(lp);
    return s.solve(lp);
}

}  // namespace tip
