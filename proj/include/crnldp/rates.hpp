#pragma once

#include <vector>

#include "crnldp/network.hpp"

namespace crnldp {

/// Mass-action rate k_r * prod_i x_i^{(c_in)_i}, with 0^0 = 1.
double asymptotic_rate(const Network& net, std::size_t r, const Concentration& x);

/// Volume-normalized jump rate k_r v^{-|c_in|_1} prod_i binom(N_i, c_i) c_i!.
/// Zero whenever some N_i < (c_in)_i.
double volume_rate(const Network& net, std::size_t r, const CountState& s);

/// Right-hand side of the mass-action ODE: sum_r lambda_r(x) c^r.
std::vector<double> drift_field(const Network& net, const Concentration& x);

/// Analytic Jacobian of drift_field at x.
std::vector<std::vector<double>> jacobian(const Network& net, const Concentration& x);

/// Chemical Lyapunov function U(x) = d + 1 + sum_i x_i (log x_i - 1),
/// with x log x -> 0 at the boundary. Always >= 1.
double lyapunov_U(const Concentration& x);

/// Drift of U^v under the jump generator, in units of U^v:
/// a^(v)(x) = sum_r Lambda_r^(v)(x) U(x) (Q_r - 1), Q_r = [U(x + c^r/v)/U(x)]^v.
/// Q is evaluated in log domain; reactions leaving R_+^d contribute nothing.
double generator_drift(const Network& net, const CountState& s);

}  // namespace crnldp
