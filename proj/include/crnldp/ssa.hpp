#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "crnldp/network.hpp"

namespace crnldp {

struct EventCap : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct JumpEvent {
    double time;
    std::size_t reaction;
};

/// Piecewise-constant record of one sample path of the jump process.
struct JumpTrajectory {
    double volume = 1.0;
    CountState initial;
    std::vector<JumpEvent> events;
    double final_time = 0.0;
    bool absorbed = false;

    /// State after replaying the first n_events events.
    CountState state_after(const Network& net, std::size_t n_events) const;
};

struct HalfSpace {
    std::vector<double> normal;
    double bound = 0.0;  // <normal, x> <= bound
};

/// Intersection of an axis-aligned box and half-spaces over concentrations.
struct DomainSpec {
    std::vector<double> lower;  // may be empty meaning 0
    std::vector<double> upper;  // may be empty meaning +inf
    std::vector<HalfSpace> half_spaces;

    bool contains(const std::vector<double>& x) const;
    bool contains_counts(const CountState& s) const;

    static DomainSpec whole_orthant() { return {}; }
    static DomainSpec box(std::vector<double> lo, std::vector<double> hi) {
        return {std::move(lo), std::move(hi), {}};
    }
    /// l1 ball of radius delta around a point, intersected with the orthant.
    static DomainSpec l1_ball(const std::vector<double>& center, double delta);
};

struct ExitRecord {
    double tau = 0.0;
    CountState exit_state;
    bool censored = false;
};

struct SimOptions {
    std::size_t event_cap = 100'000'000;
};

/// Gillespie direct method at volume v, stopping at t_end or absorption.
JumpTrajectory simulate(const Network& net, double v, const CountState& x0, double t_end,
                        std::uint64_t seed, const SimOptions& opts = {});

/// First exit from `domain` (or censoring at t_max, or absorption inside).
ExitRecord exit_time(const Network& net, double v, const CountState& x0,
                     const DomainSpec& domain, double t_max, std::uint64_t seed,
                     const SimOptions& opts = {});

/// First entry into `target`.
ExitRecord hitting_time(const Network& net, double v, const CountState& x0,
                        const DomainSpec& target, double t_max, std::uint64_t seed,
                        const SimOptions& opts = {});

/// Round a concentration onto the volume-v lattice.
CountState to_lattice(const Concentration& x, double v);

struct ExitSummary {
    double volume = 0.0;
    std::size_t replicas = 0;
    std::size_t censored = 0;
    double mean_tau = 0.0;
    double log_mean_over_v = 0.0;  // (1/v) log(mean tau)
    double ci_lo = 0.0, ci_hi = 0.0;  // 95% bootstrap interval of log_mean_over_v
    bool all_censored = false;
    bool censoring_flagged = false;  // censoring fraction above 1%
};

struct EnsembleExitResult {
    std::vector<ExitSummary> per_volume;
    std::optional<double> slope;  // least-squares slope of log(mean tau) vs v
    bool fit_refused = false;
};

/// Replica ensembles of exit times over a grid of volumes. Replica r of seed
/// s draws from stream (s, r); results are independent of thread count.
EnsembleExitResult ensemble_exit(const Network& net, const std::vector<double>& v_grid,
                                 const Concentration& x0, const DomainSpec& domain,
                                 std::size_t replicas, double t_max, std::uint64_t seed,
                                 const SimOptions& opts = {});

}  // namespace crnldp
