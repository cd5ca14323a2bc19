#include "crnldp/faces.hpp"

#include <algorithm>

namespace crnldp {

namespace {

// Exact kernel vector of the span of {p - p0}: nonzero w orthogonal to every
// difference, or empty when the points affinely span R^d.
std::vector<Rational> affine_hull_normal(const std::vector<std::vector<std::int64_t>>& points) {
    const std::size_t d = points[0].size();
    std::vector<std::vector<Rational>> rows;
    for (std::size_t i = 1; i < points.size(); ++i) {
        std::vector<Rational> r(d);
        for (std::size_t j = 0; j < d; ++j) r[j] = Rational(points[i][j] - points[0][j]);
        rows.push_back(std::move(r));
    }
    // Gaussian elimination to row echelon form
    std::vector<std::size_t> pivot_cols;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < d && rank < rows.size(); ++col) {
        std::size_t pr = rank;
        while (pr < rows.size() && rows[pr][col] == 0) ++pr;
        if (pr == rows.size()) continue;
        std::swap(rows[rank], rows[pr]);
        Rational p = rows[rank][col];
        for (auto& v : rows[rank]) v /= p;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == rank || rows[i][col] == 0) continue;
            Rational f = rows[i][col];
            for (std::size_t j = 0; j < d; ++j) rows[i][j] -= f * rows[rank][j];
        }
        pivot_cols.push_back(col);
        ++rank;
    }
    if (rank == d) return {};
    // free column -> kernel vector
    std::vector<bool> is_pivot(d, false);
    for (auto c : pivot_cols) is_pivot[c] = true;
    std::size_t free_col = 0;
    while (is_pivot[free_col]) ++free_col;
    std::vector<Rational> w(d, 0);
    w[free_col] = 1;
    for (std::size_t i = 0; i < rank; ++i) w[pivot_cols[i]] = -rows[i][free_col];
    return w;
}

}  // namespace

std::vector<std::size_t> w_maximal_subset(const std::vector<std::vector<std::int64_t>>& points,
                                          const std::vector<Rational>& w) {
    const std::size_t d = w.size();
    std::vector<Rational> vals(points.size(), 0);
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = 0; j < d; ++j) vals[i] += w[j] * Rational(points[i][j]);
    Rational best = vals[0];
    for (const auto& v : vals) best = std::max(best, v);
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < points.size(); ++i)
        if (vals[i] == best) out.push_back(i);
    return out;
}

std::vector<Face> maximal_subsets(const std::vector<std::vector<std::int64_t>>& points,
                                  const FaceOptions& opts) {
    if (points.empty()) throw std::invalid_argument("maximal_subsets: empty point set");
    if (points.size() > opts.max_points)
        throw TooManyPoints("maximal_subsets: point count exceeds the configured cap");
    const std::size_t n = points.size();
    const std::size_t d = points[0].size();
    for (const auto& p : points)
        if (p.size() != d) throw std::invalid_argument("maximal_subsets: dimension mismatch");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (points[i] == points[j])
                throw std::invalid_argument("maximal_subsets: points must be distinct");

    std::vector<Face> faces;

    // the whole set is a face iff the points do not affinely span R^d
    if (auto w = affine_hull_normal(points); !w.empty()) {
        Face f;
        f.member_indices.resize(n);
        for (std::size_t i = 0; i < n; ++i) f.member_indices[i] = i;
        f.witness_w = std::move(w);
        faces.push_back(std::move(f));
    }

    // proper subsets: exact feasibility LP per candidate
    for (std::uint64_t mask = 1; mask + 1 < (1ull << n); ++mask) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1ull << i)) members.push_back(i);

        LinearProgram lp;
        lp.objective.assign(d, 0);
        const auto& p0 = points[members[0]];
        for (std::size_t k = 1; k < members.size(); ++k) {
            LpConstraint c;
            c.coeffs.resize(d);
            for (std::size_t j = 0; j < d; ++j)
                c.coeffs[j] = Rational(points[members[k]][j] - p0[j]);
            c.rel = Relation::Equal;
            c.bound = 0;
            lp.constraints.push_back(std::move(c));
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (1ull << i)) continue;
            LpConstraint c;
            c.coeffs.resize(d);
            for (std::size_t j = 0; j < d; ++j) c.coeffs[j] = Rational(p0[j] - points[i][j]);
            c.rel = Relation::GreaterEq;
            c.bound = 1;
            lp.constraints.push_back(std::move(c));
        }
        LpSolution sol = lp_solve(lp);
        if (sol.status == LpStatus::Infeasible) continue;
        if (sol.status != LpStatus::Optimal)
            throw std::logic_error("maximal_subsets: feasibility LP cannot be unbounded with zero objective");
        faces.push_back({std::move(members), std::move(sol.point)});
    }

    std::sort(faces.begin(), faces.end(),
              [](const Face& a, const Face& b) { return a.member_indices < b.member_indices; });
    return faces;
}

}  // namespace crnldp
