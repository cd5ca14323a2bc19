#include "crnldp/ssa.hpp"

#include <algorithm>
#include <cmath>

#include "crnldp/parallel.hpp"
#include "crnldp/rates.hpp"
#include "crnldp/rng.hpp"

namespace crnldp {

CountState JumpTrajectory::state_after(const Network& net, std::size_t n_events) const {
    CountState s = initial;
    for (std::size_t k = 0; k < n_events && k < events.size(); ++k) {
        const auto& delta = net.reaction_vec(events[k].reaction).delta;
        for (std::size_t i = 0; i < s.counts.size(); ++i) s.counts[i] += delta[i];
    }
    return s;
}

bool DomainSpec::contains(const std::vector<double>& x) const {
    for (std::size_t i = 0; i < lower.size() && i < x.size(); ++i)
        if (x[i] < lower[i]) return false;
    for (std::size_t i = 0; i < upper.size() && i < x.size(); ++i)
        if (x[i] > upper[i]) return false;
    for (const auto& hs : half_spaces) {
        double dot = 0.0;
        for (std::size_t i = 0; i < hs.normal.size() && i < x.size(); ++i)
            dot += hs.normal[i] * x[i];
        if (dot > hs.bound) return false;
    }
    return true;
}

bool DomainSpec::contains_counts(const CountState& s) const {
    return contains(s.concentration().values);
}

DomainSpec DomainSpec::l1_ball(const std::vector<double>& center, double delta) {
    // |x - c|_1 <= delta as 2^d half-spaces would blow up; use the standard
    // cross-polytope representation over sign patterns only for small d
    DomainSpec spec;
    const std::size_t d = center.size();
    if (d > 16) throw std::invalid_argument("l1_ball: dimension too large");
    for (std::uint32_t signs = 0; signs < (1u << d); ++signs) {
        HalfSpace hs;
        hs.normal.resize(d);
        hs.bound = delta;
        for (std::size_t i = 0; i < d; ++i) {
            double s = (signs & (1u << i)) ? 1.0 : -1.0;
            hs.normal[i] = s;
            hs.bound += s * center[i];
        }
        spec.half_spaces.push_back(std::move(hs));
    }
    return spec;
}

CountState to_lattice(const Concentration& x, double v) {
    CountState s;
    s.volume = v;
    s.counts.reserve(x.values.size());
    for (double xi : x.values)
        s.counts.push_back(static_cast<std::int64_t>(std::llround(xi * v)));
    return s;
}

namespace {

// Core Gillespie loop. `on_event` sees each accepted jump after the state
// update and may stop the run by returning false.
template <typename OnEvent>
void gillespie_run(const Network& net, CountState& s, double& t, double t_end,
                   CounterRng& rng, const SimOptions& opts, bool& absorbed,
                   OnEvent on_event) {
    const std::size_t m = net.num_reactions();
    std::vector<double> props(m);
    std::size_t events = 0;
    const double v = s.volume;

    while (t < t_end) {
        double total = 0.0;
        for (std::size_t r = 0; r < m; ++r) {
            props[r] = v * volume_rate(net, r, s);
            total += props[r];
        }
        if (total <= 0.0) {
            absorbed = true;
            return;
        }
        double wait = rng.next_exponential(total);
        if (t + wait >= t_end) {
            t = t_end;
            return;
        }
        t += wait;
        double u = rng.next_double() * total;
        std::size_t chosen = m - 1;
        double acc = 0.0;
        for (std::size_t r = 0; r < m; ++r) {
            acc += props[r];
            if (u < acc) {
                chosen = r;
                break;
            }
        }
        const auto& delta = net.reaction_vec(chosen).delta;
        for (std::size_t i = 0; i < s.counts.size(); ++i) s.counts[i] += delta[i];
        if (++events > opts.event_cap)
            throw EventCap("simulate: event cap exceeded, likely runaway growth");
        if (!on_event(chosen)) return;
    }
}

void check_lattice(const Network& net, const CountState& x0) {
    if (x0.volume < 1.0) throw std::invalid_argument("volume must be >= 1");
    if (x0.counts.size() != net.num_species())
        throw std::invalid_argument("state dimension mismatch");
    for (auto n : x0.counts)
        if (n < 0) throw std::invalid_argument("counts must be nonnegative");
}

}  // namespace

JumpTrajectory simulate(const Network& net, double v, const CountState& x0, double t_end,
                        std::uint64_t seed, const SimOptions& opts) {
    check_lattice(net, x0);
    JumpTrajectory traj;
    traj.volume = v;
    traj.initial = x0;
    traj.initial.volume = v;

    CountState s = traj.initial;
    double t = 0.0;
    CounterRng rng(seed, 0);
    gillespie_run(net, s, t, t_end, rng, opts, traj.absorbed, [&](std::size_t r) {
        traj.events.push_back({t, r});
        return true;
    });
    traj.final_time = t_end;
    return traj;
}

ExitRecord exit_time(const Network& net, double v, const CountState& x0,
                     const DomainSpec& domain, double t_max, std::uint64_t seed,
                     const SimOptions& opts) {
    check_lattice(net, x0);
    CountState s = x0;
    s.volume = v;
    if (!domain.contains_counts(s))
        throw std::invalid_argument("exit_time: initial state outside the domain");
    double t = 0.0;
    bool absorbed = false;
    bool exited = false;
    CounterRng rng(seed, 0);
    gillespie_run(net, s, t, t_max, rng, opts, absorbed, [&](std::size_t) {
        if (!domain.contains_counts(s)) {
            exited = true;
            return false;
        }
        return true;
    });
    ExitRecord rec;
    rec.exit_state = s;
    if (exited) {
        rec.tau = t;
    } else {
        rec.tau = t_max;
        rec.censored = true;
    }
    return rec;
}

ExitRecord hitting_time(const Network& net, double v, const CountState& x0,
                        const DomainSpec& target, double t_max, std::uint64_t seed,
                        const SimOptions& opts) {
    check_lattice(net, x0);
    CountState s = x0;
    s.volume = v;
    ExitRecord rec;
    if (target.contains_counts(s)) {
        rec.tau = 0.0;
        rec.exit_state = s;
        return rec;
    }
    double t = 0.0;
    bool absorbed = false;
    bool hit = false;
    CounterRng rng(seed, 0);
    gillespie_run(net, s, t, t_max, rng, opts, absorbed, [&](std::size_t) {
        if (target.contains_counts(s)) {
            hit = true;
            return false;
        }
        return true;
    });
    rec.exit_state = s;
    if (hit) {
        rec.tau = t;
    } else {
        rec.tau = t_max;
        rec.censored = true;
    }
    return rec;
}

EnsembleExitResult ensemble_exit(const Network& net, const std::vector<double>& v_grid,
                                 const Concentration& x0, const DomainSpec& domain,
                                 std::size_t replicas, double t_max, std::uint64_t seed,
                                 const SimOptions& opts) {
    if (replicas < 2) throw std::invalid_argument("ensemble_exit: need at least 2 replicas");
    EnsembleExitResult out;

    for (double v : v_grid) {
        CountState start = to_lattice(x0, v);
        std::vector<double> taus(replicas);
        std::vector<char> censored(replicas, 0);
        parallel_for(replicas, [&](std::size_t rep) {
            // per-replica stream: seed mixed with the replica index
            CounterRng stream_rng(seed, rep + 1);
            std::uint64_t rep_seed = stream_rng.next_u64();
            ExitRecord rec = exit_time(net, v, start, domain, t_max, rep_seed, opts);
            taus[rep] = rec.tau;
            censored[rep] = rec.censored ? 1 : 0;
        });

        ExitSummary sum;
        sum.volume = v;
        sum.replicas = replicas;
        for (std::size_t r = 0; r < replicas; ++r) sum.censored += censored[r];
        sum.all_censored = sum.censored == replicas;
        double mean = 0.0;
        for (double tau : taus) mean += tau;
        mean /= static_cast<double>(replicas);
        sum.mean_tau = mean;
        sum.log_mean_over_v = std::log(mean) / v;
        sum.censoring_flagged =
            static_cast<double>(sum.censored) > 0.01 * static_cast<double>(replicas);

        // bootstrap CI over replica resamples
        CounterRng boot(seed ^ 0x626f6f74ull, static_cast<std::uint64_t>(v));
        std::vector<double> stats;
        stats.reserve(200);
        for (int b = 0; b < 200; ++b) {
            double s = 0.0;
            for (std::size_t r = 0; r < replicas; ++r)
                s += taus[boot.next_below(replicas)];
            stats.push_back(std::log(s / static_cast<double>(replicas)) / v);
        }
        std::sort(stats.begin(), stats.end());
        sum.ci_lo = stats[static_cast<std::size_t>(0.025 * 200)];
        sum.ci_hi = stats[static_cast<std::size_t>(0.975 * 200)];
        out.per_volume.push_back(std::move(sum));
    }

    // slope of log(mean tau) against v; refuse when censoring contaminates
    std::vector<double> xs, ys;
    bool flagged = false;
    for (const auto& s : out.per_volume) {
        if (s.all_censored) continue;
        if (s.censoring_flagged) flagged = true;
        xs.push_back(s.volume);
        ys.push_back(std::log(s.mean_tau));
    }
    if (flagged || xs.size() < 2) {
        out.fit_refused = true;
    } else {
        double n = static_cast<double>(xs.size());
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sx += xs[i];
            sy += ys[i];
            sxx += xs[i] * xs[i];
            sxy += xs[i] * ys[i];
        }
        out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
    return out;
}

}  // namespace crnldp
