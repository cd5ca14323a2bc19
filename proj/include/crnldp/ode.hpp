#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "crnldp/network.hpp"

namespace crnldp {

struct BlowupDetected : std::runtime_error {
    explicit BlowupDetected(double t)
        : std::runtime_error("ODE solution exceeded the blowup cap at t = " + std::to_string(t)),
          time(t) {}
    double time;
};

struct OdeTrajectory {
    std::vector<double> times;
    std::vector<Concentration> states;
};

struct OdeOptions {
    double tol = 1e-8;
    double blowup_cap = 1e9;       // on ||x||_1
    double max_step = 1e18;
    std::size_t max_steps = 50'000'000;
};

/// Adaptive RK45 (Dormand-Prince) integration of the mass-action ODE.
/// Steps producing a negative component are rejected and retried smaller.
OdeTrajectory integrate_ode(const Network& net, const Concentration& x0, double t_end,
                            const OdeOptions& opts = {});

struct Attractor {
    Concentration point;
    bool stable = false;
};

struct Box {
    std::vector<double> lo;
    std::vector<double> hi;
};

/// Multi-start search for hyperbolic fixed points of the mass-action ODE:
/// forward integration to near-stationarity, Newton polish, dedup, and
/// classification by Jacobian eigenvalues.
std::vector<Attractor> find_attractors(const Network& net, const Box& box,
                                       std::size_t n_starts, std::uint64_t seed);

}  // namespace crnldp
