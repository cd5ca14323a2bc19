#include "crnldp/lagrangian.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>

#include "crnldp/rates.hpp"
#include "crnldp/rational_lp.hpp"

namespace crnldp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::MatrixXd jump_matrix(const Network& net) {
    const std::size_t d = net.num_species();
    const std::size_t m = net.num_reactions();
    Eigen::MatrixXd C(d, m);
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t i = 0; i < d; ++i)
            C(i, r) = static_cast<double>(net.reaction_vec(r).delta[i]);
    return C;
}

}  // namespace

double hamiltonian(const Network& net, const std::vector<double>& lambda,
                   const std::vector<double>& theta) {
    const std::size_t m = net.num_reactions();
    if (lambda.size() != m) throw std::invalid_argument("lambda size mismatch");
    double h = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
        if (lambda[r] == 0.0) continue;
        double dot = 0.0;
        const auto& delta = net.reaction_vec(r).delta;
        for (std::size_t i = 0; i < theta.size(); ++i)
            dot += theta[i] * static_cast<double>(delta[i]);
        h += lambda[r] * (std::exp(dot) - 1.0);
    }
    return h;
}

LagrangianResult lagrangian_dual(const Network& net, const std::vector<double>& lambda,
                                 const std::vector<double>& xi) {
    const std::size_t d = net.num_species();
    const std::size_t m = net.num_reactions();
    Eigen::MatrixXd C = jump_matrix(net);
    Eigen::VectorXd target(d);
    for (std::size_t i = 0; i < d; ++i) target(i) = xi[i];

    Eigen::VectorXd theta = Eigen::VectorXd::Zero(d);
    double obj = 0.0;  // objective at theta = 0 since H(.,0) = 0

    auto objective = [&](const Eigen::VectorXd& th) {
        double h = 0.0;
        for (std::size_t r = 0; r < m; ++r) {
            if (lambda[r] == 0.0) continue;
            h += lambda[r] * (std::exp(th.dot(C.col(r))) - 1.0);
        }
        return th.dot(target) - h;
    };

    const double grad_tol = 1e-10;
    for (int iter = 0; iter < 200; ++iter) {
        Eigen::VectorXd grad = target;
        Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(d, d);
        for (std::size_t r = 0; r < m; ++r) {
            if (lambda[r] == 0.0) continue;
            double w = lambda[r] * std::exp(theta.dot(C.col(r)));
            grad -= w * C.col(r);
            hess += w * C.col(r) * C.col(r).transpose();
        }
        double gn = grad.norm();
        if (gn < grad_tol) break;

        // ridge keeps the ascent direction defined on flat directions
        double ridge = 1e-10 * (hess.trace() + 1.0);
        Eigen::MatrixXd H = hess + ridge * Eigen::MatrixXd::Identity(d, d);
        Eigen::VectorXd step = H.ldlt().solve(grad);
        if (!step.allFinite()) step = grad;

        double t = 1.0;
        double armijo = 1e-4 * grad.dot(step);
        bool moved = false;
        for (int bt = 0; bt < 60; ++bt) {
            double cand = objective(theta + t * step);
            if (std::isfinite(cand) && cand >= obj + t * armijo) {
                obj = cand;
                theta += t * step;
                moved = true;
                break;
            }
            t *= 0.5;
        }
        // sup attained only at infinity: xi on the boundary of the flux cone.
        // Detected by theta divergence or a hard line-search failure while the
        // gradient is still large; small stalls near the optimum stay Finite.
        if (theta.norm() > 1e4 || (!moved && gn > 1e-4)) {
            LagrangianResult res;
            res.value = obj;
            res.status = LagrangianStatus::BoundaryAttainedAtInfinity;
            return res;
        }
        if (!moved) break;
    }

    LagrangianResult res;
    res.value = std::max(0.0, obj);
    res.theta_star = std::vector<double>(theta.data(), theta.data() + d);
    res.status = LagrangianStatus::Finite;
    return res;
}

namespace {

// Exact feasibility layer over the flux polytope
// {q >= 0, sum_r q_r c^r = xi, q_r = 0 where lambda_r = 0}.
struct FluxPolytope {
    bool feasible = false;
    std::vector<std::size_t> support;   // reactions allowed to be positive
    std::vector<double> interior;       // strictly positive feasible point on support
};

Rational to_rational(double x) {
    // exact dyadic conversion
    return Rational(x);
}

FluxPolytope analyze_flux_polytope(const Network& net, const std::vector<double>& lambda,
                                   const std::vector<double>& xi) {
    const std::size_t d = net.num_species();
    const std::size_t m = net.num_reactions();
    FluxPolytope out;

    // Feasibility with an l1 slack: xi computed in floating point can sit a
    // few ulps off the exact span of the reaction vectors, so find the
    // nearest exactly-representable polytope point and accept it when the
    // slack is within floating tolerance. Variables: q (m), s+ (d), s- (d).
    std::vector<Rational> xi_star(d);
    {
        LinearProgram lp;
        lp.objective.assign(m + 2 * d, 0);
        for (std::size_t i = 0; i < 2 * d; ++i) lp.objective[m + i] = -1;  // max -sum s
        for (std::size_t i = 0; i < d; ++i) {
            LpConstraint c;
            c.coeffs.assign(m + 2 * d, 0);
            for (std::size_t r = 0; r < m; ++r)
                c.coeffs[r] = Rational(net.reaction_vec(r).delta[i]);
            c.coeffs[m + i] = 1;
            c.coeffs[m + d + i] = -1;
            c.rel = Relation::Equal;
            c.bound = to_rational(xi[i]);
            lp.constraints.push_back(std::move(c));
        }
        for (std::size_t k = 0; k < m + 2 * d; ++k) {
            LpConstraint c;
            c.coeffs.assign(m + 2 * d, 0);
            c.coeffs[k] = 1;
            c.rel = (k < m && lambda[k] == 0.0) ? Relation::Equal : Relation::GreaterEq;
            c.bound = 0;
            lp.constraints.push_back(std::move(c));
        }
        LpSolution sol = lp_solve(lp);
        if (sol.status != LpStatus::Optimal) return out;
        double scale = 1.0;
        for (double v : xi) scale = std::max(scale, std::abs(v));
        if (-sol.value > to_rational(1e-9 * scale)) return out;
        for (std::size_t i = 0; i < d; ++i)
            xi_star[i] = to_rational(xi[i]) - sol.point[m + i] + sol.point[m + d + i];
    }
    out.feasible = true;

    auto base_lp = [&](void) {
        LinearProgram lp;
        lp.objective.assign(m, 0);
        for (std::size_t i = 0; i < d; ++i) {
            LpConstraint c;
            c.coeffs.resize(m);
            for (std::size_t r = 0; r < m; ++r)
                c.coeffs[r] = Rational(net.reaction_vec(r).delta[i]);
            c.rel = Relation::Equal;
            c.bound = xi_star[i];
            lp.constraints.push_back(std::move(c));
        }
        for (std::size_t r = 0; r < m; ++r) {
            LpConstraint c;
            c.coeffs.assign(m, 0);
            c.coeffs[r] = 1;
            c.rel = lambda[r] == 0.0 ? Relation::Equal : Relation::GreaterEq;
            c.bound = 0;
            lp.constraints.push_back(std::move(c));
        }
        return lp;
    };

    // components forced to zero across the whole polytope
    for (std::size_t r = 0; r < m; ++r) {
        if (lambda[r] == 0.0) continue;
        LinearProgram lp = base_lp();
        lp.objective[r] = 1;
        LpSolution sol = lp_solve(lp);
        if (sol.status == LpStatus::Unbounded ||
            (sol.status == LpStatus::Optimal && sol.value > 0))
            out.support.push_back(r);
    }

    if (out.support.empty()) {
        out.interior.assign(m, 0.0);
        return out;
    }

    // strictly positive point on the support: maximize the common floor t
    {
        LinearProgram lp;
        lp.objective.assign(m + 1, 0);
        lp.objective[m] = 1;  // t
        for (std::size_t i = 0; i < d; ++i) {
            LpConstraint c;
            c.coeffs.assign(m + 1, 0);
            for (std::size_t r = 0; r < m; ++r)
                c.coeffs[r] = Rational(net.reaction_vec(r).delta[i]);
            c.rel = Relation::Equal;
            c.bound = xi_star[i];
            lp.constraints.push_back(std::move(c));
        }
        std::vector<bool> in_support(m, false);
        for (auto r : out.support) in_support[r] = true;
        for (std::size_t r = 0; r < m; ++r) {
            LpConstraint c;
            c.coeffs.assign(m + 1, 0);
            c.coeffs[r] = 1;
            if (in_support[r]) {
                c.coeffs[m] = -1;
                c.rel = Relation::GreaterEq;  // q_r >= t
            } else {
                c.rel = Relation::Equal;
            }
            c.bound = 0;
            lp.constraints.push_back(std::move(c));
        }
        LpConstraint tcap;  // keep the LP bounded
        tcap.coeffs.assign(m + 1, 0);
        tcap.coeffs[m] = 1;
        tcap.rel = Relation::LessEq;
        tcap.bound = 1;
        lp.constraints.push_back(std::move(tcap));

        LpSolution sol = lp_solve(lp);
        if (sol.status != LpStatus::Optimal || sol.value <= 0)
            throw std::logic_error("flux polytope: interior point expected on the support");
        out.interior.resize(m, 0.0);
        for (std::size_t r = 0; r < m; ++r)
            out.interior[r] = static_cast<double>(sol.point[r]);
    }
    return out;
}

double entropy_cost(const std::vector<double>& lambda, const Eigen::VectorXd& q,
                    const std::vector<std::size_t>& support, double fixed_zero_cost) {
    double f = fixed_zero_cost;
    for (std::size_t k = 0; k < support.size(); ++k) {
        double lam = lambda[support[k]];
        double qk = q(k);
        if (qk <= 0.0) {
            f += lam;  // q log q -> 0
        } else {
            f += lam - qk + qk * std::log(qk / lam);
        }
    }
    return f;
}

// Damped Newton on q = q0 + N u with q kept strictly positive; f's gradient
// diverges at the boundary, so the minimizer over the support is interior.
double reduced_newton(const std::vector<double>& lambda,
                      const std::vector<std::size_t>& support, const Eigen::MatrixXd& N,
                      Eigen::VectorXd& q, double fixed_cost) {
    const std::size_t n = support.size();
    double f = entropy_cost(lambda, q, support, fixed_cost);
    if (N.cols() == 0 || N.norm() == 0.0) return f;
    for (int iter = 0; iter < 300; ++iter) {
        Eigen::VectorXd gq(n);
        Eigen::VectorXd hq(n);
        for (std::size_t k = 0; k < n; ++k) {
            gq(k) = std::log(q(k) / lambda[support[k]]);
            hq(k) = 1.0 / q(k);
        }
        Eigen::VectorXd gu = N.transpose() * gq;
        if (gu.norm() < 1e-12) break;
        Eigen::MatrixXd Hu = N.transpose() * hq.asDiagonal() * N;
        Eigen::VectorXd du = Hu.ldlt().solve(-gu);
        if (!du.allFinite()) du = -gu;

        Eigen::VectorXd dq = N * du;
        double t = 1.0;
        for (std::size_t k = 0; k < n; ++k)
            if (dq(k) < 0.0) t = std::min(t, -0.95 * q(k) / dq(k));
        double armijo = 1e-4 * gu.dot(du);
        bool moved = false;
        for (int bt = 0; bt < 60; ++bt) {
            Eigen::VectorXd qn = q + t * dq;
            double fn = entropy_cost(lambda, qn, support, fixed_cost);
            if (fn <= f + t * armijo) {
                q = qn;
                f = fn;
                moved = true;
                break;
            }
            t *= 0.5;
        }
        if (!moved) break;
    }
    return f;
}

}  // namespace

LagrangianResult lagrangian_primal(const Network& net, const std::vector<double>& lambda,
                                   const std::vector<double>& xi) {
    const std::size_t d = net.num_species();
    const std::size_t m = net.num_reactions();
    if (lambda.size() != m || xi.size() != d)
        throw std::invalid_argument("lagrangian_primal: dimension mismatch");

    FluxPolytope poly = analyze_flux_polytope(net, lambda, xi);
    if (!poly.feasible) {
        LagrangianResult res;
        res.value = kInf;
        res.status = LagrangianStatus::Infeasible;
        return res;
    }

    // cost of reactions pinned at zero: lambda_r - 0 + 0
    double fixed_cost = 0.0;
    std::vector<bool> in_support(m, false);
    for (auto r : poly.support) in_support[r] = true;
    for (std::size_t r = 0; r < m; ++r)
        if (!in_support[r]) fixed_cost += lambda[r];

    LagrangianResult res;
    res.status = LagrangianStatus::Finite;
    if (poly.support.empty()) {
        res.value = fixed_cost;
        res.q_star = std::vector<double>(m, 0.0);
        return res;
    }

    const std::size_t n = poly.support.size();
    Eigen::MatrixXd A(d, n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < d; ++i)
            A(i, k) = static_cast<double>(net.reaction_vec(poly.support[k]).delta[i]);

    Eigen::VectorXd q(n);
    for (std::size_t k = 0; k < n; ++k) q(k) = poly.interior[poly.support[k]];

    // reduce to the null space of A: q = q0 + N u stays feasible
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    Eigen::MatrixXd N = lu.kernel();
    double f = reduced_newton(lambda, poly.support, N, q, fixed_cost);

    res.value = std::max(0.0, f);
    std::vector<double> qfull(m, 0.0);
    for (std::size_t k = 0; k < n; ++k) qfull[poly.support[k]] = q(k);
    res.q_star = std::move(qfull);
    return res;
}

LagrangianResult lagrangian(const Network& net, const std::vector<double>& lambda,
                            const std::vector<double>& xi, double tol) {
    (void)tol;
    LagrangianResult primal = lagrangian_primal(net, lambda, xi);
    if (primal.status == LagrangianStatus::Infeasible) return primal;

    LagrangianResult dual = lagrangian_dual(net, lambda, xi);
    if (dual.status == LagrangianStatus::Finite) {
        primal.theta_star = dual.theta_star;
        primal.duality_gap = std::abs(primal.value - dual.value);
    } else {
        primal.duality_gap = std::abs(primal.value - dual.value);
    }
    return primal;
}

LagrangianEvaluator::LagrangianEvaluator(const Network& net) : net_(net) {
    const std::size_t d = net.num_species();
    const std::size_t m = net.num_reactions();

    // strictly positive kernel flux via one exact LP: maximize the common
    // floor t of {q : sum q_r c^r = 0, q >= t, t <= 1}; cone = R^d iff t* > 0
    LinearProgram lp;
    lp.objective.assign(m + 1, 0);
    lp.objective[m] = 1;
    for (std::size_t i = 0; i < d; ++i) {
        LpConstraint c;
        c.coeffs.assign(m + 1, 0);
        for (std::size_t r = 0; r < m; ++r)
            c.coeffs[r] = Rational(net.reaction_vec(r).delta[i]);
        c.rel = Relation::Equal;
        c.bound = 0;
        lp.constraints.push_back(std::move(c));
    }
    for (std::size_t r = 0; r < m; ++r) {
        LpConstraint c;
        c.coeffs.assign(m + 1, 0);
        c.coeffs[r] = 1;
        c.coeffs[m] = -1;
        c.rel = Relation::GreaterEq;
        c.bound = 0;
        lp.constraints.push_back(std::move(c));
    }
    LpConstraint cap;
    cap.coeffs.assign(m + 1, 0);
    cap.coeffs[m] = 1;
    cap.rel = Relation::LessEq;
    cap.bound = 1;
    lp.constraints.push_back(std::move(cap));

    LpSolution sol = lp_solve(lp);
    if (sol.status == LpStatus::Optimal && sol.value > 0) {
        cone_full_ = true;
        positive_kernel_.resize(m);
        for (std::size_t r = 0; r < m; ++r)
            positive_kernel_[r] = static_cast<double>(sol.point[r]);

        Eigen::MatrixXd C = jump_matrix(net);
        Eigen::MatrixXd N = Eigen::FullPivLU<Eigen::MatrixXd>(C).kernel();
        kernel_.assign(N.cols(), std::vector<double>(m));
        for (Eigen::Index j = 0; j < N.cols(); ++j)
            for (std::size_t r = 0; r < m; ++r) kernel_[j][r] = N(r, j);

        Eigen::MatrixXd P = C.completeOrthogonalDecomposition().pseudoInverse();
        pinv_.assign(m, std::vector<double>(d));
        for (std::size_t r = 0; r < m; ++r)
            for (std::size_t i = 0; i < d; ++i) pinv_[r][i] = P(r, i);
    }
}

LagrangianResult LagrangianEvaluator::operator()(const std::vector<double>& lambda,
                                                 const std::vector<double>& xi,
                                                 double tol) const {
    const std::size_t d = net_.num_species();
    const std::size_t m = net_.num_reactions();
    bool all_positive = true;
    for (double l : lambda)
        if (!(l > 0.0)) all_positive = false;
    if (!cone_full_ || !all_positive) return lagrangian(net_, lambda, xi, tol);

    // feasible start q0 = pinv xi + t * positive_kernel, pushed interior
    Eigen::VectorXd q(m);
    for (std::size_t r = 0; r < m; ++r) {
        double v = 0.0;
        for (std::size_t i = 0; i < d; ++i) v += pinv_[r][i] * xi[i];
        q(r) = v;
    }
    double scale = 1.0;
    for (std::size_t r = 0; r < m; ++r) scale = std::max(scale, std::abs(q(r)));
    double floor = 1e-3 * scale;
    double t = 0.0;
    for (std::size_t r = 0; r < m; ++r)
        t = std::max(t, (floor - q(r)) / positive_kernel_[r]);
    for (std::size_t r = 0; r < m; ++r) q(r) += t * positive_kernel_[r];

    std::vector<std::size_t> support(m);
    for (std::size_t r = 0; r < m; ++r) support[r] = r;
    Eigen::MatrixXd N(m, kernel_.size());
    for (std::size_t j = 0; j < kernel_.size(); ++j)
        for (std::size_t r = 0; r < m; ++r) N(r, j) = kernel_[j][r];

    LagrangianResult res;
    res.status = LagrangianStatus::Finite;
    res.value = std::max(0.0, reduced_newton(lambda, support, N, q, 0.0));
    res.q_star = std::vector<double>(q.data(), q.data() + m);

    LagrangianResult dual = lagrangian_dual(net_, lambda, xi);
    if (dual.status == LagrangianStatus::Finite) res.theta_star = dual.theta_star;
    res.duality_gap = std::abs(res.value - dual.value);
    return res;
}

void validate_path(const DiscretePath& path) {
    if (path.nodes.size() < 2 || path.durations.size() + 1 != path.nodes.size())
        throw std::invalid_argument("path needs N+1 nodes and N durations");
    for (const auto& node : path.nodes)
        for (double v : node.values)
            if (v < 0.0) throw std::invalid_argument("path node leaves the positive orthant");
    for (double s : path.durations)
        if (s <= 0.0) throw std::invalid_argument("path durations must be positive");
}

namespace {

template <typename Eval>
double path_rate_impl(const Network& net, const Eval& eval, const DiscretePath& path) {
    validate_path(path);
    const std::size_t d = net.num_species();
    const std::size_t m = net.num_reactions();
    double total = 0.0;
    for (std::size_t seg = 0; seg < path.durations.size(); ++seg) {
        const auto& a = path.nodes[seg].values;
        const auto& b = path.nodes[seg + 1].values;
        double s = path.durations[seg];
        Concentration mid;
        mid.values.resize(d);
        std::vector<double> xi(d);
        for (std::size_t i = 0; i < d; ++i) {
            mid.values[i] = 0.5 * (a[i] + b[i]);
            xi[i] = (b[i] - a[i]) / s;
        }
        std::vector<double> lam(m);
        for (std::size_t r = 0; r < m; ++r) lam[r] = asymptotic_rate(net, r, mid);
        LagrangianResult lr = eval(lam, xi);
        if (lr.status == LagrangianStatus::Infeasible) return kInf;
        total += s * lr.value;
    }
    return total;
}

}  // namespace

double path_rate(const Network& net, const DiscretePath& path) {
    auto eval = [&](const std::vector<double>& lam, const std::vector<double>& xi) {
        return lagrangian(net, lam, xi);
    };
    return path_rate_impl(net, eval, path);
}

double path_rate(const LagrangianEvaluator& eval, const DiscretePath& path) {
    auto f = [&](const std::vector<double>& lam, const std::vector<double>& xi) {
        return eval(lam, xi);
    };
    return path_rate_impl(eval.network(), f, path);
}

}  // namespace crnldp
