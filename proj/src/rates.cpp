#include "crnldp/rates.hpp"

#include <cmath>

namespace crnldp {

double asymptotic_rate(const Network& net, std::size_t r, const Concentration& x) {
    const Reaction& rx = net.reaction(r);
    double rate = rx.rate_constant;
    for (const auto& [i, c] : rx.input.coeffs()) {
        double xi = x.values.at(i);
        for (std::int64_t p = 0; p < c; ++p) rate *= xi;
    }
    return rate;
}

double volume_rate(const Network& net, std::size_t r, const CountState& s) {
    const Reaction& rx = net.reaction(r);
    const double v = s.volume;
    double rate = rx.rate_constant;
    for (const auto& [i, c] : rx.input.coeffs()) {
        std::int64_t n = s.counts.at(i);
        if (n < c) return 0.0;
        // binom(n, c) * c! = n (n-1) ... (n-c+1), one factor of 1/v each
        for (std::int64_t p = 0; p < c; ++p) rate *= static_cast<double>(n - p) / v;
    }
    return rate;
}

std::vector<double> drift_field(const Network& net, const Concentration& x) {
    const std::size_t d = net.num_species();
    std::vector<double> f(d, 0.0);
    for (std::size_t r = 0; r < net.num_reactions(); ++r) {
        double lam = asymptotic_rate(net, r, x);
        if (lam == 0.0) continue;
        const auto& delta = net.reaction_vec(r).delta;
        for (std::size_t i = 0; i < d; ++i) f[i] += lam * static_cast<double>(delta[i]);
    }
    return f;
}

std::vector<std::vector<double>> jacobian(const Network& net, const Concentration& x) {
    const std::size_t d = net.num_species();
    std::vector<std::vector<double>> J(d, std::vector<double>(d, 0.0));
    for (std::size_t r = 0; r < net.num_reactions(); ++r) {
        const Reaction& rx = net.reaction(r);
        const auto& delta = net.reaction_vec(r).delta;
        for (const auto& [j, cj] : rx.input.coeffs()) {
            // d lambda_r / d x_j = k cj x_j^{cj-1} prod_{l != j} x_l^{cl}
            double dldx = rx.rate_constant * static_cast<double>(cj);
            for (std::int64_t p = 0; p < cj - 1; ++p) dldx *= x.values[j];
            for (const auto& [l, cl] : rx.input.coeffs()) {
                if (l == j) continue;
                for (std::int64_t p = 0; p < cl; ++p) dldx *= x.values[l];
            }
            for (std::size_t i = 0; i < d; ++i)
                J[i][j] += dldx * static_cast<double>(delta[i]);
        }
    }
    return J;
}

double lyapunov_U(const Concentration& x) {
    const std::size_t d = x.values.size();
    double u = static_cast<double>(d) + 1.0;
    for (double xi : x.values) {
        if (xi > 0.0) u += xi * (std::log(xi) - 1.0);
    }
    return u;
}

double generator_drift(const Network& net, const CountState& s) {
    const double v = s.volume;
    const std::size_t d = net.num_species();
    Concentration x = s.concentration();
    const double ux = lyapunov_U(x);
    const double log_ux = std::log(ux);

    double a = 0.0;
    for (std::size_t r = 0; r < net.num_reactions(); ++r) {
        double lam = volume_rate(net, r, s);
        if (lam == 0.0) continue;
        const auto& delta = net.reaction_vec(r).delta;
        Concentration y = x;
        bool outside = false;
        for (std::size_t i = 0; i < d; ++i) {
            y.values[i] += static_cast<double>(delta[i]) / v;
            if (y.values[i] < 0.0) outside = true;
        }
        if (outside) continue;  // Lambda is zero off the lattice
        double q = std::exp(v * (std::log(lyapunov_U(y)) - log_ux));
        a += lam * ux * (q - 1.0);
    }
    return a;
}

}  // namespace crnldp
