#include "crnldp/quasipotential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "crnldp/parallel.hpp"
#include "crnldp/rates.hpp"
#include "crnldp/rng.hpp"

namespace crnldp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> project_domain(const DomainSpec& domain, std::vector<double> x) {
    for (auto& v : x) v = std::max(v, 0.0);
    for (int pass = 0; pass < 8; ++pass) {
        for (std::size_t i = 0; i < domain.lower.size() && i < x.size(); ++i)
            x[i] = std::max(x[i], domain.lower[i]);
        for (std::size_t i = 0; i < domain.upper.size() && i < x.size(); ++i)
            x[i] = std::min(x[i], domain.upper[i]);
        bool ok = true;
        for (const auto& hs : domain.half_spaces) {
            double dot = 0.0, nn = 0.0;
            for (std::size_t i = 0; i < hs.normal.size() && i < x.size(); ++i) {
                dot += hs.normal[i] * x[i];
                nn += hs.normal[i] * hs.normal[i];
            }
            if (dot > hs.bound && nn > 0.0) {
                ok = false;
                double shift = (dot - hs.bound) / nn;
                for (std::size_t i = 0; i < hs.normal.size() && i < x.size(); ++i)
                    x[i] -= shift * hs.normal[i];
            }
        }
        for (auto& v : x) v = std::max(v, 0.0);
        if (ok) break;
    }
    return x;
}

// d lambda_r / d x_j for all r, j.
std::vector<std::vector<double>> rate_jacobian(const Network& net, const Concentration& x) {
    const std::size_t m = net.num_reactions();
    const std::size_t d = net.num_species();
    std::vector<std::vector<double>> J(m, std::vector<double>(d, 0.0));
    for (std::size_t r = 0; r < m; ++r) {
        const Reaction& rx = net.reaction(r);
        for (const auto& [j, cj] : rx.input.coeffs()) {
            double g = rx.rate_constant * static_cast<double>(cj);
            for (std::int64_t p = 0; p < cj - 1; ++p) g *= x.values[j];
            for (const auto& [l, cl] : rx.input.coeffs()) {
                if (l == j) continue;
                for (std::int64_t p = 0; p < cl; ++p) g *= x.values[l];
            }
            J[r][j] = g;
        }
    }
    return J;
}

struct SegmentEval {
    double value = 0.0;
    std::vector<double> theta;   // dual maximizer (may be empty)
    std::vector<double> q;       // primal minimizer
    std::vector<double> lambda;
    bool feasible = true;
};

SegmentEval eval_segment(const LagrangianEvaluator& eval, const std::vector<double>& a,
                         const std::vector<double>& b, double s) {
    const Network& net = eval.network();
    const std::size_t d = net.num_species();
    const std::size_t m = net.num_reactions();
    Concentration mid;
    mid.values.resize(d);
    std::vector<double> xi(d);
    for (std::size_t i = 0; i < d; ++i) {
        mid.values[i] = 0.5 * (a[i] + b[i]);
        xi[i] = (b[i] - a[i]) / s;
    }
    SegmentEval out;
    out.lambda.resize(m);
    for (std::size_t r = 0; r < m; ++r) out.lambda[r] = asymptotic_rate(net, r, mid);
    LagrangianResult lr = eval(out.lambda, xi);
    if (lr.status == LagrangianStatus::Infeasible) {
        out.feasible = false;
        out.value = kInf;
        return out;
    }
    out.value = lr.value;
    if (lr.theta_star) out.theta = *lr.theta_star;
    if (lr.q_star) out.q = *lr.q_star;
    return out;
}

// Minimize s -> s * L(lambda(mid), disp/s); convex, derivative -H(theta*(s)).
// Only the dual maximizer is needed for the derivative, so the probes skip
// the primal entropy solve entirely.
double optimize_duration(const LagrangianEvaluator& eval, const std::vector<double>& a,
                         const std::vector<double>& b, double s_init) {
    const Network& net = eval.network();
    const std::size_t d = a.size();
    double disp = 0.0;
    for (std::size_t i = 0; i < d; ++i) disp += std::abs(b[i] - a[i]);
    if (disp < 1e-14) return std::max(1e-9, std::min(s_init, 1e-6));

    Concentration mid;
    mid.values.resize(d);
    for (std::size_t i = 0; i < d; ++i) mid.values[i] = 0.5 * (a[i] + b[i]);
    std::vector<double> lambda(net.num_reactions());
    for (std::size_t r = 0; r < lambda.size(); ++r)
        lambda[r] = asymptotic_rate(net, r, mid);

    auto deriv = [&](double s) -> double {
        std::vector<double> xi(d);
        for (std::size_t i = 0; i < d; ++i) xi[i] = (b[i] - a[i]) / s;
        LagrangianResult dual = lagrangian_dual(net, lambda, xi);
        if (dual.status != LagrangianStatus::Finite || !dual.theta_star) return -1.0;
        return -hamiltonian(net, lambda, *dual.theta_star);
    };

    double lo = std::max(1e-9, s_init / 4.0);
    double hi = std::max(lo, s_init * 4.0);
    for (int it = 0; it < 60 && deriv(lo) > 0.0; ++it) lo *= 0.5;
    for (int it = 0; it < 60 && deriv(hi) < 0.0 && hi < 1e9; ++it) hi *= 2.0;
    for (int it = 0; it < 40; ++it) {
        if (hi / lo < 1.0 + 1e-5) break;
        double s = std::sqrt(lo * hi);
        if (deriv(s) < 0.0)
            lo = s;
        else
            hi = s;
    }
    return std::sqrt(lo * hi);
}

struct PathState {
    std::vector<std::vector<double>> nodes;  // N+1 positions
    std::vector<double> durations;           // N
};

double total_rate(const LagrangianEvaluator& eval, const PathState& p) {
    double total = 0.0;
    for (std::size_t i = 0; i < p.durations.size(); ++i) {
        SegmentEval se = eval_segment(eval, p.nodes[i], p.nodes[i + 1], p.durations[i]);
        if (!se.feasible) return kInf;
        total += p.durations[i] * se.value;
    }
    return total;
}

// Gradient of the total rate with respect to interior node positions, via the
// envelope theorem: dL/dxi = theta*, dL/dlambda_r = 1 - q_r/lambda_r.
std::vector<std::vector<double>> node_gradient(const LagrangianEvaluator& eval,
                                               const PathState& p) {
    const Network& net = eval.network();
    const std::size_t d = net.num_species();
    const std::size_t m = net.num_reactions();
    const std::size_t N = p.durations.size();
    std::vector<std::vector<double>> grad(N + 1, std::vector<double>(d, 0.0));

    for (std::size_t i = 0; i < N; ++i) {
        SegmentEval se = eval_segment(eval, p.nodes[i], p.nodes[i + 1], p.durations[i]);
        if (!se.feasible) continue;
        Concentration mid;
        mid.values.resize(d);
        for (std::size_t k = 0; k < d; ++k)
            mid.values[k] = 0.5 * (p.nodes[i][k] + p.nodes[i + 1][k]);
        auto J = rate_jacobian(net, mid);

        std::vector<double> glam(m, 0.0);
        for (std::size_t r = 0; r < m; ++r) {
            if (se.lambda[r] > 0.0 && !se.q.empty())
                glam[r] = 1.0 - se.q[r] / se.lambda[r];
        }
        std::vector<double> jl(d, 0.0);  // J^T glam
        for (std::size_t r = 0; r < m; ++r)
            for (std::size_t k = 0; k < d; ++k) jl[k] += J[r][k] * glam[r];

        double s = p.durations[i];
        for (std::size_t k = 0; k < d; ++k) {
            double th = se.theta.empty() ? 0.0 : se.theta[k];
            grad[i][k] += 0.5 * s * jl[k] - th;
            grad[i + 1][k] += 0.5 * s * jl[k] + th;
        }
    }
    return grad;
}

struct OptimizeOutcome {
    double value = kInf;
    PathState path;
    bool converged = false;
};

OptimizeOutcome optimize_path(const LagrangianEvaluator& eval, const DomainSpec& domain,
                              PathState p, const QPotOptions& opts) {
    const std::size_t d = p.nodes.front().size();
    const std::size_t N = p.durations.size();

    for (auto& node : p.nodes) node = project_domain(domain, node);

    auto optimize_durations = [&]() {
        for (std::size_t i = 0; i < N; ++i)
            p.durations[i] = optimize_duration(eval, p.nodes[i], p.nodes[i + 1],
                                               p.durations[i]);
    };

    optimize_durations();
    double value = total_rate(eval, p);
    double step = 1e-2;
    std::vector<double> window;
    bool converged = false;

    for (std::size_t sweep = 0; sweep < opts.max_sweeps; ++sweep) {
        auto grad = node_gradient(eval, p);
        double gnorm2 = 0.0;
        for (std::size_t i = 1; i < N; ++i)
            for (std::size_t k = 0; k < d; ++k) gnorm2 += grad[i][k] * grad[i][k];
        if (gnorm2 < 1e-20) {
            converged = true;
            break;
        }

        bool moved = false;
        for (int bt = 0; bt < 30; ++bt) {
            PathState trial = p;
            for (std::size_t i = 1; i < N; ++i) {
                for (std::size_t k = 0; k < d; ++k)
                    trial.nodes[i][k] -= step * grad[i][k];
                trial.nodes[i] = project_domain(domain, trial.nodes[i]);
            }
            double trial_value = total_rate(eval, trial);
            if (trial_value < value - 1e-15) {
                p = std::move(trial);
                value = trial_value;
                step *= 1.6;
                moved = true;
                break;
            }
            step *= 0.5;
        }

        optimize_durations();
        double new_value = total_rate(eval, p);
        if (new_value < value) value = new_value;

        window.push_back(value);
        if (window.size() > 10) {
            double old = window[window.size() - 11];
            double rel = (old - value) / std::max(std::abs(old), 1e-12);
            if (rel >= 0.0 && rel < opts.tol) {
                converged = true;
                break;
            }
        }
        if (!moved && sweep > 5) {
            converged = true;
            break;
        }
    }
    return {value, std::move(p), converged};
}

PathState straight_line(const std::vector<double>& x, const std::vector<double>& y,
                        std::size_t N) {
    PathState p;
    p.nodes.resize(N + 1);
    for (std::size_t i = 0; i <= N; ++i) {
        double t = static_cast<double>(i) / static_cast<double>(N);
        std::vector<double> node(x.size());
        for (std::size_t k = 0; k < x.size(); ++k) node[k] = (1 - t) * x[k] + t * y[k];
        p.nodes[i] = std::move(node);
    }
    p.durations.assign(N, 1.0 / static_cast<double>(N));
    return p;
}

// Relaxation orbit of the ODE started just off y; reversed, it is the
// canonical first guess for an escape path from x to y.
PathState heteroclinic_guess(const Network& net, const std::vector<double>& x,
                             const std::vector<double>& y, std::size_t N) {
    const std::size_t d = x.size();
    std::vector<double> z(d);
    for (std::size_t k = 0; k < d; ++k) z[k] = y[k] + 0.02 * (x[k] - y[k]);

    std::vector<std::vector<double>> orbit{std::vector<double>(y.begin(), y.end()), z};
    double dist = kInf;
    try {
        for (int leg = 0; leg < 400; ++leg) {
            auto traj = integrate_ode(net, {z}, 0.25, {1e-8});
            z = traj.states.back().values;
            orbit.push_back(z);
            dist = 0.0;
            for (std::size_t k = 0; k < d; ++k) dist += std::abs(z[k] - x[k]);
            if (dist < 1e-4) break;
        }
    } catch (const std::exception&) {
        return straight_line(x, y, N);
    }
    if (dist > 0.5) return straight_line(x, y, N);
    orbit.push_back(std::vector<double>(x.begin(), x.end()));
    std::reverse(orbit.begin(), orbit.end());  // now runs x -> y

    // resample to N+1 nodes by arc length
    std::vector<double> cum{0.0};
    for (std::size_t i = 1; i < orbit.size(); ++i) {
        double seg = 0.0;
        for (std::size_t k = 0; k < d; ++k) seg += std::abs(orbit[i][k] - orbit[i - 1][k]);
        cum.push_back(cum.back() + seg);
    }
    PathState p;
    p.nodes.resize(N + 1);
    for (std::size_t i = 0; i <= N; ++i) {
        double target = cum.back() * static_cast<double>(i) / static_cast<double>(N);
        auto it = std::lower_bound(cum.begin(), cum.end(), target);
        std::size_t hi = std::min<std::size_t>(it - cum.begin(), orbit.size() - 1);
        std::size_t lo = hi == 0 ? 0 : hi - 1;
        double den = cum[hi] - cum[lo];
        double t = den > 0.0 ? (target - cum[lo]) / den : 0.0;
        std::vector<double> node(d);
        for (std::size_t k = 0; k < d; ++k)
            node[k] = (1 - t) * orbit[lo][k] + t * orbit[hi][k];
        p.nodes[i] = std::move(node);
    }
    p.nodes.front() = std::vector<double>(x.begin(), x.end());
    p.nodes.back() = std::vector<double>(y.begin(), y.end());
    p.durations.assign(N, 1.0 / static_cast<double>(N));
    return p;
}

}  // namespace

QPotResult quasipotential(const Network& net, const Concentration& x, const Concentration& y,
                          const DomainSpec& domain, const QPotOptions& opts) {
    if (opts.segments < 8) throw std::invalid_argument("quasipotential: need >= 8 segments");
    const std::size_t N = opts.segments;
    LagrangianEvaluator eval(net);

    std::size_t restarts = std::max<std::size_t>(opts.restarts, 1);
    std::vector<OptimizeOutcome> outcomes(restarts);
    parallel_for(restarts, [&](std::size_t rs) {
        PathState init;
        if (rs == 0) {
            init = straight_line(x.values, y.values, N);
        } else if (rs == 1) {
            init = heteroclinic_guess(net, x.values, y.values, N);
        } else {
            init = straight_line(x.values, y.values, N);
            CounterRng rng(opts.seed, 100 + rs);
            double span = 0.0;
            for (std::size_t k = 0; k < x.values.size(); ++k)
                span += std::abs(y.values[k] - x.values[k]);
            for (std::size_t i = 1; i < N; ++i)
                for (auto& v : init.nodes[i])
                    v = std::max(0.0, v + 0.05 * span * rng.next_normal());
        }
        outcomes[rs] = optimize_path(eval, domain, std::move(init), opts);
    });

    std::size_t best = 0;
    for (std::size_t rs = 1; rs < restarts; ++rs)
        if (outcomes[rs].value < outcomes[best].value) best = rs;

    QPotResult res;
    res.value = std::max(0.0, outcomes[best].value);
    res.restarts_used = restarts;
    res.converged = outcomes[best].converged && std::isfinite(outcomes[best].value);
    res.path.nodes.reserve(N + 1);
    for (auto& node : outcomes[best].path.nodes) res.path.nodes.push_back({node});
    res.path.durations = outcomes[best].path.durations;
    return res;
}

std::vector<Concentration> sample_boundary(const DomainSpec& domain, std::size_t per_face) {
    std::size_t d = std::max(domain.lower.size(), domain.upper.size());
    for (const auto& hs : domain.half_spaces) d = std::max(d, hs.normal.size());
    if (d == 0) return {};

    auto lo_at = [&](std::size_t i) {
        return i < domain.lower.size() ? domain.lower[i] : 0.0;
    };
    auto hi_at = [&](std::size_t i) {
        return i < domain.upper.size() ? domain.upper[i] : kInf;
    };

    std::vector<Concentration> targets;
    auto sample_face = [&](std::size_t dim, double level, std::uint64_t face_id) {
        CounterRng rng(0xfaceull, face_id);
        std::size_t count = 0;
        for (std::size_t trial = 0; trial < 50 * per_face && count < per_face; ++trial) {
            std::vector<double> pt(d);
            for (std::size_t k = 0; k < d; ++k) {
                if (k == dim) {
                    pt[k] = level;
                } else {
                    double lo = lo_at(k);
                    double hi = std::isfinite(hi_at(k)) ? hi_at(k) : lo + 1.0;
                    pt[k] = (d == 1 || per_face == 1) ? 0.5 * (lo + hi)
                                                      : rng.next_uniform(lo, hi);
                }
            }
            bool ok = true;
            for (const auto& hs : domain.half_spaces) {
                double dot = 0.0;
                for (std::size_t k = 0; k < hs.normal.size() && k < d; ++k)
                    dot += hs.normal[k] * pt[k];
                if (dot > hs.bound + 1e-12) ok = false;
            }
            if (!ok) continue;
            targets.push_back({pt});
            ++count;
            if (d == 1) break;  // a 1-d face is a single point
        }
    };

    std::uint64_t face_id = 0;
    for (std::size_t i = 0; i < d; ++i) {
        double hi = hi_at(i);
        if (std::isfinite(hi)) sample_face(i, hi, face_id++);
        double lo = lo_at(i);
        // faces on the coordinate hyperplanes of R_+^d cannot be exit faces
        if (lo > 0.0) sample_face(i, lo, face_id++);
    }

    // half-space faces: box samples projected onto each bounding hyperplane
    for (const auto& hs : domain.half_spaces) {
        CounterRng rng(0xfaceull, 1000 + face_id++);
        double nn = 0.0;
        for (double v : hs.normal) nn += v * v;
        if (nn == 0.0) continue;
        std::size_t count = 0;
        for (std::size_t trial = 0; trial < 50 * per_face && count < per_face; ++trial) {
            std::vector<double> pt(d);
            for (std::size_t k = 0; k < d; ++k) {
                double lo = lo_at(k);
                double hi = std::isfinite(hi_at(k)) ? hi_at(k) : lo + 1.0;
                pt[k] = per_face == 1 ? 0.5 * (lo + hi) : rng.next_uniform(lo, hi);
            }
            double dot = 0.0;
            for (std::size_t k = 0; k < hs.normal.size() && k < d; ++k)
                dot += hs.normal[k] * pt[k];
            double shift = (dot - hs.bound) / nn;
            bool ok = true;
            for (std::size_t k = 0; k < hs.normal.size() && k < d; ++k) {
                pt[k] -= shift * hs.normal[k];
                if (pt[k] < 0.0) ok = false;
            }
            if (!ok || !domain.contains(pt)) continue;
            targets.push_back({pt});
            ++count;
        }
    }
    return targets;
}

AttractorGraph attractor_graph(const Network& net, const DomainSpec& domain,
                               const std::vector<Concentration>& attractors,
                               const QPotOptions& opts) {
    AttractorGraph g;
    g.nodes = attractors;
    const std::size_t n = attractors.size();
    g.costs.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            g.costs[i][j] =
                quasipotential(net, attractors[i], attractors[j], domain, opts).value;
        }
    }
    auto boundary = sample_boundary(domain, opts.boundary_samples_per_face);
    g.boundary_costs.assign(n, kInf);
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& target : boundary) {
            double v = quasipotential(net, attractors[i], target, domain, opts).value;
            g.boundary_costs[i] = std::min(g.boundary_costs[i], v);
        }
    }
    return g;
}

bool stability_check(const Network& net, const AttractorGraph& graph, std::size_t i,
                     double delta, const QPotOptions& opts) {
    const auto& center = graph.nodes.at(i).values;
    const std::size_t d = center.size();
    // l1 shell targets: +-delta along each axis
    double best = kInf;
    DomainSpec whole = DomainSpec::whole_orthant();
    for (std::size_t k = 0; k < d; ++k) {
        for (int sign : {+1, -1}) {
            std::vector<double> target = center;
            target[k] += sign * delta;
            if (target[k] < 0.0) continue;
            double v = quasipotential(net, graph.nodes[i], {target}, whole, opts).value;
            best = std::min(best, v);
        }
    }
    return best > 1e-6;
}

WGraphResult w_graph_min(const std::vector<std::vector<double>>& costs, std::size_t root) {
    const std::size_t n = costs.size();
    if (n == 0 || root >= n) throw std::invalid_argument("w_graph_min: bad inputs");
    if (n > 7) throw TooManyAttractors("w_graph_min: more than 6 attractors plus boundary");
    for (const auto& row : costs)
        if (row.size() != n) throw std::invalid_argument("w_graph_min: non-square matrix");

    std::vector<std::size_t> non_root;
    for (std::size_t i = 0; i < n; ++i)
        if (i != root) non_root.push_back(i);
    const std::size_t k = non_root.size();

    WGraphResult best;
    best.value = kInf;
    std::vector<std::size_t> choice(k, 0);
    std::size_t total = 1;
    for (std::size_t i = 0; i < k; ++i) total *= (n - 1);

    for (std::size_t code = 0; code < total; ++code) {
        std::size_t c = code;
        std::vector<std::size_t> g(n, root);
        g[root] = root;
        bool self_loop = false;
        for (std::size_t i = 0; i < k; ++i) {
            std::size_t pick = c % (n - 1);
            c /= (n - 1);
            // pick-th node distinct from non_root[i]
            std::size_t t = 0, seen = 0;
            for (; t < n; ++t) {
                if (t == non_root[i]) continue;
                if (seen == pick) break;
                ++seen;
            }
            if (t == non_root[i]) self_loop = true;
            g[non_root[i]] = t;
        }
        if (self_loop) continue;
        // every node must reach the root
        bool ok = true;
        for (std::size_t i = 0; i < k && ok; ++i) {
            std::size_t cur = non_root[i];
            for (std::size_t hop = 0; hop <= n; ++hop) {
                if (cur == root) break;
                cur = g[cur];
                if (hop == n) ok = false;
            }
        }
        if (!ok) continue;
        double value = 0.0;
        for (std::size_t i = 0; i < k; ++i) value += costs[non_root[i]][g[non_root[i]]];
        if (value < best.value) {
            best.value = value;
            best.assignment = g;
        }
    }
    return best;
}

namespace {

// W-graph minimum with a root *set*: nodes outside the set must flow into it.
double w_graph_min_rooted(const std::vector<std::vector<double>>& costs,
                          const std::vector<bool>& is_root) {
    const std::size_t n = costs.size();
    std::vector<std::size_t> free_nodes;
    for (std::size_t i = 0; i < n; ++i)
        if (!is_root[i]) free_nodes.push_back(i);
    const std::size_t k = free_nodes.size();
    if (k == 0) return 0.0;

    double best = kInf;
    std::size_t total = 1;
    for (std::size_t i = 0; i < k; ++i) total *= (n - 1);
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t c = code;
        std::vector<std::size_t> g(n);
        for (std::size_t i = 0; i < n; ++i) g[i] = i;
        bool bad = false;
        for (std::size_t i = 0; i < k; ++i) {
            std::size_t pick = c % (n - 1);
            c /= (n - 1);
            std::size_t t = 0, seen = 0;
            for (; t < n; ++t) {
                if (t == free_nodes[i]) continue;
                if (seen == pick) break;
                ++seen;
            }
            if (t == free_nodes[i]) bad = true;
            g[free_nodes[i]] = t;
        }
        if (bad) continue;
        bool ok = true;
        for (std::size_t i = 0; i < k && ok; ++i) {
            std::size_t cur = free_nodes[i];
            for (std::size_t hop = 0; hop <= n; ++hop) {
                if (is_root[cur]) break;
                cur = g[cur];
                if (hop == n) ok = false;
            }
        }
        if (!ok) continue;
        double value = 0.0;
        for (std::size_t i = 0; i < k; ++i) value += costs[free_nodes[i]][g[free_nodes[i]]];
        best = std::min(best, value);
    }
    return best;
}

}  // namespace

double exit_exponent(const Network& net, const DomainSpec& domain,
                     const std::optional<Concentration>& x0, const QPotOptions& opts) {
    const std::size_t d = net.num_species();
    Box box;
    box.lo.resize(d, 0.0);
    box.hi.resize(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
        box.lo[i] = i < domain.lower.size() ? domain.lower[i] : 0.0;
        double hi = i < domain.upper.size() ? domain.upper[i] : kInf;
        if (!std::isfinite(hi))
            throw std::invalid_argument("exit_exponent: domain needs finite upper bounds");
        box.hi[i] = hi;
    }

    auto attractors = find_attractors(net, box, 64, opts.seed);
    std::vector<Concentration> stable;
    for (const auto& a : attractors) {
        if (!a.stable) continue;
        if (!domain.contains(a.point.values)) continue;
        stable.push_back(a.point);
    }
    if (stable.empty()) throw NoStableAttractor("exit_exponent: no stable attractor in domain");
    if (stable.size() > 3)
        throw TooManyAttractors("exit_exponent: more than 3 stable attractors");

    AttractorGraph graph = attractor_graph(net, domain, stable, opts);

    // starting attractor: relax the ODE from x0 and take the nearest node
    std::size_t start = 0;
    if (x0) {
        std::vector<double> z = x0->values;
        try {
            for (int leg = 0; leg < 100; ++leg) {
                auto traj = integrate_ode(net, {z}, 1.0);
                z = traj.states.back().values;
            }
        } catch (const std::exception&) {
        }
        double best = kInf;
        for (std::size_t i = 0; i < stable.size(); ++i) {
            double dist = 0.0;
            for (std::size_t k = 0; k < d; ++k) dist += std::abs(stable[i].values[k] - z[k]);
            if (dist < best) {
                best = dist;
                start = i;
            }
        }
    }

    if (stable.size() == 1) return graph.boundary_costs[0];

    // full cost matrix over {attractors} + boundary node at index n
    const std::size_t n = stable.size();
    std::vector<std::vector<double>> costs(n + 1, std::vector<double>(n + 1, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) costs[i][j] = graph.costs[i][j];
        costs[i][n] = graph.boundary_costs[i];
        costs[n][i] = kInf;  // nothing returns from the boundary
    }

    std::vector<bool> root_only_boundary(n + 1, false);
    root_only_boundary[n] = true;
    double w_d = w_graph_min_rooted(costs, root_only_boundary);

    std::vector<bool> root_with_start = root_only_boundary;
    root_with_start[start] = true;
    double m_d = w_graph_min_rooted(costs, root_with_start);

    return w_d - m_d;
}

}  // namespace crnldp
