#include "crnldp/rational_lp.hpp"

#include <limits>
#include <stdexcept>

namespace crnldp {

namespace {

struct Tableau {
    // rows x (num_vars + 1); last column is the rhs
    std::vector<std::vector<Rational>> rows;
    std::vector<std::size_t> basis;  // variable basic in each row
    std::size_t num_vars = 0;

    Rational& at(std::size_t i, std::size_t j) { return rows[i][j]; }
    Rational& rhs(std::size_t i) { return rows[i][num_vars]; }

    void pivot(std::size_t pr, std::size_t pc) {
        Rational p = rows[pr][pc];
        for (auto& v : rows[pr]) v /= p;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == pr) continue;
            Rational f = rows[i][pc];
            if (f == 0) continue;
            for (std::size_t j = 0; j <= num_vars; ++j) rows[i][j] -= f * rows[pr][j];
        }
        basis[pr] = pc;
    }
};

enum class SimplexOutcome { Optimal, Unbounded };

// Maximize cost . x over the tableau with Bland's rule. `allowed` masks the
// columns eligible to enter. On Unbounded, fills entering/ray info.
SimplexOutcome run_simplex(Tableau& t, const std::vector<Rational>& cost,
                           const std::vector<bool>& allowed, std::size_t* unbounded_col) {
    const std::size_t m = t.rows.size();
    while (true) {
        // reduced costs: rc_j = c_j - c_B . column_j
        std::size_t entering = std::numeric_limits<std::size_t>::max();
        for (std::size_t j = 0; j < t.num_vars; ++j) {
            if (!allowed[j]) continue;
            Rational rc = cost[j];
            for (std::size_t i = 0; i < m; ++i) {
                const Rational& cb = cost[t.basis[i]];
                if (cb != 0 && t.rows[i][j] != 0) rc -= cb * t.rows[i][j];
            }
            if (rc > 0) {
                entering = j;
                break;  // Bland: smallest improving index
            }
        }
        if (entering == std::numeric_limits<std::size_t>::max()) return SimplexOutcome::Optimal;

        std::size_t leaving = std::numeric_limits<std::size_t>::max();
        Rational best_ratio = 0;
        for (std::size_t i = 0; i < m; ++i) {
            if (t.rows[i][entering] <= 0) continue;
            Rational ratio = t.rhs(i) / t.rows[i][entering];
            if (leaving == std::numeric_limits<std::size_t>::max() || ratio < best_ratio ||
                (ratio == best_ratio && t.basis[i] < t.basis[leaving])) {
                leaving = i;
                best_ratio = ratio;
            }
        }
        if (leaving == std::numeric_limits<std::size_t>::max()) {
            if (unbounded_col) *unbounded_col = entering;
            return SimplexOutcome::Unbounded;
        }
        t.pivot(leaving, entering);
    }
}

}  // namespace

LpSolution lp_solve(const LinearProgram& lp) {
    const std::size_t d = lp.objective.size();
    for (const auto& c : lp.constraints)
        if (c.coeffs.size() != d)
            throw std::invalid_argument("lp_solve: constraint dimension mismatch");

    const std::size_t m = lp.constraints.size();
    // free variables split x_k = p_k - n_k
    const std::size_t n_split = 2 * d;

    // layout: [p/n pairs | slack/surplus | artificials]
    std::size_t n_slack = 0;
    for (const auto& c : lp.constraints)
        if (c.rel != Relation::Equal) ++n_slack;

    std::vector<std::vector<Rational>> eq_rows;   // coefficients over split+slack vars
    std::vector<Rational> eq_rhs;
    eq_rows.reserve(m);
    std::size_t slack_cursor = 0;
    std::vector<std::ptrdiff_t> slack_of_row(m, -1);
    std::vector<int> slack_sign(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
        const auto& c = lp.constraints[i];
        std::vector<Rational> row(n_split + n_slack, 0);
        for (std::size_t k = 0; k < d; ++k) {
            row[2 * k] = c.coeffs[k];
            row[2 * k + 1] = -c.coeffs[k];
        }
        Rational b = c.bound;
        int sign = 0;
        if (c.rel == Relation::LessEq) sign = 1;
        if (c.rel == Relation::GreaterEq) sign = -1;
        if (sign != 0) {
            row[n_split + slack_cursor] = sign;
            slack_of_row[i] = static_cast<std::ptrdiff_t>(n_split + slack_cursor);
            slack_sign[i] = sign;
            ++slack_cursor;
        }
        // normalize to nonnegative rhs
        if (b < 0) {
            for (auto& v : row) v = -v;
            b = -b;
        }
        eq_rows.push_back(std::move(row));
        eq_rhs.push_back(b);
    }

    // Artificials: a <=-row whose slack kept coefficient +1 after normalization
    // starts feasible with the slack basic; everything else needs an artificial.
    Tableau t;
    std::size_t n_core = n_split + n_slack;
    std::vector<std::size_t> artificial_rows;
    for (std::size_t i = 0; i < m; ++i) {
        bool slack_basic = slack_of_row[i] >= 0 &&
                           eq_rows[i][static_cast<std::size_t>(slack_of_row[i])] == 1;
        if (!slack_basic) artificial_rows.push_back(i);
    }
    std::size_t n_art = artificial_rows.size();
    t.num_vars = n_core + n_art;
    t.rows.assign(m, std::vector<Rational>(t.num_vars + 1, 0));
    t.basis.assign(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n_core; ++j) t.rows[i][j] = eq_rows[i][j];
        t.rows[i][t.num_vars] = eq_rhs[i];
    }
    {
        std::size_t a = 0;
        std::vector<bool> has_art(m, false);
        for (std::size_t i : artificial_rows) {
            t.rows[i][n_core + a] = 1;
            t.basis[i] = n_core + a;
            has_art[i] = true;
            ++a;
        }
        for (std::size_t i = 0; i < m; ++i)
            if (!has_art[i]) t.basis[i] = static_cast<std::size_t>(slack_of_row[i]);
    }

    std::vector<bool> allowed(t.num_vars, true);

    if (n_art > 0) {
        // phase 1: maximize -(sum of artificials)
        std::vector<Rational> cost1(t.num_vars, 0);
        for (std::size_t a = 0; a < n_art; ++a) cost1[n_core + a] = -1;
        run_simplex(t, cost1, allowed, nullptr);
        Rational art_sum = 0;
        for (std::size_t i = 0; i < m; ++i)
            if (t.basis[i] >= n_core) art_sum += t.rhs(i);
        if (art_sum != 0) return {LpStatus::Infeasible, 0, {}, {}};
        // pivot out artificials sitting at zero level
        for (std::size_t i = 0; i < m; ++i) {
            if (t.basis[i] < n_core) continue;
            bool pivoted = false;
            for (std::size_t j = 0; j < n_core && !pivoted; ++j) {
                if (t.rows[i][j] != 0) {
                    t.pivot(i, j);
                    pivoted = true;
                }
            }
            // a fully zero row is redundant; leave the artificial basic at 0
        }
        for (std::size_t a = 0; a < n_art; ++a) allowed[n_core + a] = false;
    }

    // phase 2
    std::vector<Rational> cost(t.num_vars, 0);
    for (std::size_t k = 0; k < d; ++k) {
        cost[2 * k] = lp.objective[k];
        cost[2 * k + 1] = -lp.objective[k];
    }
    std::size_t unb_col = 0;
    SimplexOutcome out = run_simplex(t, cost, allowed, &unb_col);

    if (out == SimplexOutcome::Unbounded) {
        // recession direction: entering variable grows, basic variables adjust
        std::vector<Rational> dir(t.num_vars, 0);
        dir[unb_col] = 1;
        for (std::size_t i = 0; i < m; ++i) dir[t.basis[i]] = -t.rows[i][unb_col];
        std::vector<Rational> ray(d, 0);
        for (std::size_t k = 0; k < d; ++k) ray[k] = dir[2 * k] - dir[2 * k + 1];
        return {LpStatus::Unbounded, 0, {}, std::move(ray)};
    }

    std::vector<Rational> full(t.num_vars, 0);
    for (std::size_t i = 0; i < m; ++i) full[t.basis[i]] = t.rhs(i);
    std::vector<Rational> point(d, 0);
    Rational value = 0;
    for (std::size_t k = 0; k < d; ++k) {
        point[k] = full[2 * k] - full[2 * k + 1];
        value += lp.objective[k] * point[k];
    }
    return {LpStatus::Optimal, std::move(value), std::move(point), {}};
}

}  // namespace crnldp
