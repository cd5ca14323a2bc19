#include "crnldp/ode.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

#include "crnldp/rates.hpp"
#include "crnldp/rng.hpp"

namespace crnldp {

namespace {

double l1_norm(const std::vector<double>& x) {
    double s = 0.0;
    for (double xi : x) s += std::abs(xi);
    return s;
}

// Dormand-Prince 5(4) coefficients.
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                 A64 = 49.0 / 176, A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784,
                 B6 = 11.0 / 84;
constexpr double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920,
                 E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40;

}  // namespace

OdeTrajectory integrate_ode(const Network& net, const Concentration& x0, double t_end,
                            const OdeOptions& opts) {
    if (t_end <= 0.0) throw std::invalid_argument("t_end must be positive");
    const std::size_t d = net.num_species();

    OdeTrajectory traj;
    std::vector<double> x = x0.values;
    x.resize(d, 0.0);
    double t = 0.0;
    traj.times.push_back(t);
    traj.states.push_back({x});

    std::vector<double> k1 = drift_field(net, {x});
    double h = std::min({0.01, t_end, opts.max_step});
    std::vector<double> tmp(d), k2(d), k3(d), k4(d), k5(d), k6(d), k7(d), x5(d);

    auto stage = [&](const std::vector<double>& base, std::vector<double>& out) {
        out = drift_field(net, {base});
    };

    std::size_t steps = 0;
    while (t < t_end) {
        if (++steps > opts.max_steps)
            throw std::runtime_error("integrate_ode: step budget exhausted");
        h = std::min(h, t_end - t);

        for (std::size_t i = 0; i < d; ++i) tmp[i] = x[i] + h * A21 * k1[i];
        stage(tmp, k2);
        for (std::size_t i = 0; i < d; ++i) tmp[i] = x[i] + h * (A31 * k1[i] + A32 * k2[i]);
        stage(tmp, k3);
        for (std::size_t i = 0; i < d; ++i)
            tmp[i] = x[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        stage(tmp, k4);
        for (std::size_t i = 0; i < d; ++i)
            tmp[i] = x[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        stage(tmp, k5);
        for (std::size_t i = 0; i < d; ++i)
            tmp[i] = x[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] +
                                 A65 * k5[i]);
        stage(tmp, k6);
        for (std::size_t i = 0; i < d; ++i)
            x5[i] = x[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
        stage(x5, k7);

        bool negative = false;
        double err = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            if (x5[i] < 0.0) negative = true;
            double e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] +
                            E7 * k7[i]);
            double sc = opts.tol * (1.0 + std::max(std::abs(x[i]), std::abs(x5[i])));
            err = std::max(err, std::abs(e) / sc);
        }

        if (negative || err > 1.0 || !std::isfinite(err)) {
            double shrink = negative || !std::isfinite(err)
                                ? 0.25
                                : std::max(0.2, 0.9 * std::pow(err, -0.2));
            h *= shrink;
            if (h < 1e-15 * std::max(1.0, t)) {
                // pin tiny negative components from roundoff and accept
                for (std::size_t i = 0; i < d; ++i) x5[i] = std::max(x5[i], 0.0);
            } else {
                continue;
            }
        }

        t += h;
        x = x5;
        for (std::size_t i = 0; i < d; ++i) x[i] = std::max(x[i], 0.0);
        k1 = k7;  // FSAL
        traj.times.push_back(t);
        traj.states.push_back({x});

        if (l1_norm(x) > opts.blowup_cap) throw BlowupDetected(t);

        double grow = err > 0.0 ? std::min(5.0, 0.9 * std::pow(err, -0.2)) : 5.0;
        h = std::min(h * grow, opts.max_step);
    }
    return traj;
}

namespace {

bool newton_polish(const Network& net, std::vector<double>& x) {
    const std::size_t d = net.num_species();
    for (int it = 0; it < 60; ++it) {
        std::vector<double> f = drift_field(net, {x});
        if (l1_norm(f) < 1e-13) return true;
        auto J = jacobian(net, {x});
        Eigen::MatrixXd A(d, d);
        Eigen::VectorXd b(d);
        for (std::size_t i = 0; i < d; ++i) {
            b(i) = -f[i];
            for (std::size_t j = 0; j < d; ++j) A(i, j) = J[i][j];
        }
        Eigen::VectorXd dx = A.fullPivLu().solve(b);
        if (!dx.allFinite()) return false;
        double step = 1.0;
        for (std::size_t i = 0; i < d; ++i) {
            // keep the iterate nonnegative
            if (x[i] + dx(i) < 0.0 && dx(i) < 0.0)
                step = std::min(step, 0.9 * x[i] / -dx(i));
        }
        for (std::size_t i = 0; i < d; ++i) x[i] = std::max(0.0, x[i] + step * dx(i));
    }
    return l1_norm(drift_field(net, {x})) < 1e-10;
}

}  // namespace

std::vector<Attractor> find_attractors(const Network& net, const Box& box,
                                       std::size_t n_starts, std::uint64_t seed) {
    const std::size_t d = net.num_species();
    if (box.lo.size() != d || box.hi.size() != d)
        throw std::invalid_argument("box dimension mismatch");
    CounterRng rng(seed, 0);
    std::vector<Attractor> found;

    auto admit = [&](std::vector<double> x) {
        if (l1_norm(drift_field(net, {x})) > 1e-8) return;
        for (double xi : x)
            if (!std::isfinite(xi) || xi < -1e-12) return;
        for (const auto& a : found) {
            double dist = 0.0;
            for (std::size_t i = 0; i < d; ++i) dist += std::abs(a.point.values[i] - x[i]);
            if (dist < 1e-6) return;
        }
        auto J = jacobian(net, {x});
        Eigen::MatrixXd A(d, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) A(i, j) = J[i][j];
        Eigen::EigenSolver<Eigen::MatrixXd> es(A);
        bool stable = true;
        for (std::size_t i = 0; i < d; ++i)
            if (es.eigenvalues()(i).real() >= -1e-9) stable = false;
        found.push_back({Concentration{x}, stable});
    };

    for (std::size_t s = 0; s < n_starts; ++s) {
        std::vector<double> start(d);
        for (std::size_t i = 0; i < d; ++i) start[i] = rng.next_uniform(box.lo[i], box.hi[i]);

        // Direct Newton from the raw start can land on saddles, which forward
        // flow never reaches.
        std::vector<double> x = start;
        if (newton_polish(net, x)) admit(x);

        x = start;
        try {
            for (int leg = 0; leg < 200; ++leg) {
                auto traj = integrate_ode(net, {x}, 1.0, {1e-9});
                x = traj.states.back().values;
                if (l1_norm(drift_field(net, {x})) < 1e-10) break;
            }
        } catch (const std::exception&) {
            continue;  // blowup or budget: drop this start
        }
        if (newton_polish(net, x)) admit(x);
    }

    std::sort(found.begin(), found.end(), [](const Attractor& a, const Attractor& b) {
        return a.point.values < b.point.values;
    });
    return found;
}

}  // namespace crnldp
