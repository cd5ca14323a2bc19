#pragma once

#include <optional>
#include <vector>

#include "crnldp/network.hpp"

namespace crnldp {

enum class LagrangianStatus { Finite, Infeasible, BoundaryAttainedAtInfinity };

struct LagrangianResult {
    double value = 0.0;  // +infinity when Infeasible
    std::optional<std::vector<double>> theta_star;
    std::optional<std::vector<double>> q_star;
    double duality_gap = 0.0;
    LagrangianStatus status = LagrangianStatus::Finite;
};

/// H(lambda, theta) = sum_r lambda_r (exp<theta, c^r> - 1).
double hamiltonian(const Network& net, const std::vector<double>& lambda,
                   const std::vector<double>& theta);

/// Legendre route: Newton ascent of theta -> <theta, xi> - H(lambda, theta).
LagrangianResult lagrangian_dual(const Network& net, const std::vector<double>& lambda,
                                 const std::vector<double>& xi);

/// Entropy-minimization route: exact-LP feasibility pre-check on the flux
/// polytope, then Newton on the reduced fluxes. The primal value is always an
/// upper bound for L.
LagrangianResult lagrangian_primal(const Network& net, const std::vector<double>& lambda,
                                   const std::vector<double>& xi);

/// Both routes with the duality gap recorded; the returned value is the
/// primal one.
LagrangianResult lagrangian(const Network& net, const std::vector<double>& lambda,
                            const std::vector<double>& xi, double tol = 1e-8);

/// Caches the flux-cone geometry of a network so repeated Lagrangian
/// evaluations (as in path optimization) skip the exact-LP feasibility layer
/// whenever the cone is known to be all of R^d and every rate is positive.
class LagrangianEvaluator {
public:
    explicit LagrangianEvaluator(const Network& net);

    LagrangianResult operator()(const std::vector<double>& lambda,
                                const std::vector<double>& xi, double tol = 1e-8) const;

    const Network& network() const { return net_; }

private:
    const Network& net_;
    bool cone_full_ = false;
    std::vector<double> positive_kernel_;        // q > 0 with sum q_r c^r = 0
    std::vector<std::vector<double>> kernel_;    // null-space basis of the jump matrix
    std::vector<std::vector<double>> pinv_;      // min-norm right inverse of the jump matrix
};

/// Piecewise-linear approximation of an absolutely continuous path.
struct DiscretePath {
    std::vector<Concentration> nodes;  // N+1 entries, componentwise >= 0
    std::vector<double> durations;     // N entries, > 0
};

void validate_path(const DiscretePath& path);

/// Midpoint-rule evaluation of the action integral along the path;
/// +infinity when some segment velocity is outside the flux cone.
double path_rate(const Network& net, const DiscretePath& path);
double path_rate(const LagrangianEvaluator& eval, const DiscretePath& path);

}  // namespace crnldp
