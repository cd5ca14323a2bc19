#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "crnldp/lagrangian.hpp"
#include "crnldp/network.hpp"
#include "crnldp/ode.hpp"
#include "crnldp/ssa.hpp"

namespace crnldp {

struct TooManyAttractors : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct NoStableAttractor : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct QPotResult {
    double value = 0.0;
    DiscretePath path;
    std::size_t restarts_used = 0;
    bool converged = false;
};

struct QPotOptions {
    std::size_t segments = 64;
    std::size_t restarts = 4;
    std::uint64_t seed = 0;
    double tol = 1e-6;
    std::size_t max_sweeps = 400;
    std::size_t boundary_samples_per_face = 32;
};

/// Minimal path rate from x to y inside `domain`, by alternating exact
/// per-segment duration minimization with projected descent on the interior
/// nodes (gradients via the dual maximizer).
QPotResult quasipotential(const Network& net, const Concentration& x, const Concentration& y,
                          const DomainSpec& domain, const QPotOptions& opts = {});

struct AttractorGraph {
    std::vector<Concentration> nodes;
    std::vector<std::vector<double>> costs;  // costs[i][j] = V_D(K_i, K_j)
    std::vector<double> boundary_costs;      // V_D(K_i, dD)
};

AttractorGraph attractor_graph(const Network& net, const DomainSpec& domain,
                               const std::vector<Concentration>& attractors,
                               const QPotOptions& opts = {});

/// Whether escaping an l1 delta-shell around attractor i has positive cost.
bool stability_check(const Network& net, const AttractorGraph& graph, std::size_t i,
                     double delta, const QPotOptions& opts = {});

/// Freidlin-Wentzell graph minimization: minimum over functional graphs on
/// nodes \ {root} whose iteration reaches root, of the summed edge costs.
/// The matrix is square over all nodes (boundary included as a node).
struct WGraphResult {
    double value = 0.0;
    std::vector<std::size_t> assignment;  // assignment[n] = g(n); root maps to itself
};

WGraphResult w_graph_min(const std::vector<std::vector<double>>& costs, std::size_t root);

/// Exit-time exponent for the given domain: the quasi-potential from the
/// starting stable attractor to the boundary (single-attractor case), or the
/// W-graph reduction for up to three attractors.
double exit_exponent(const Network& net, const DomainSpec& domain,
                     const std::optional<Concentration>& x0 = std::nullopt,
                     const QPotOptions& opts = {});

/// Boundary target points of a box-like domain, sampled per face.
std::vector<Concentration> sample_boundary(const DomainSpec& domain, std::size_t per_face);

}  // namespace crnldp
