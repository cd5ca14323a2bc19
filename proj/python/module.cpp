#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "crnldp/certificates.hpp"
#include "crnldp/lagrangian.hpp"
#include "crnldp/ode.hpp"
#include "crnldp/parse.hpp"
#include "crnldp/quasipotential.hpp"
#include "crnldp/rates.hpp"
#include "crnldp/report_json.hpp"
#include "crnldp/ssa.hpp"

namespace py = pybind11;
using namespace crnldp;

namespace {

Network parse_or_throw(const std::string& source) {
    ParseResult res = parse_network(source);
    if (!res.ok()) {
        const ParseError& e = *res.error;
        throw py::value_error("line " + std::to_string(e.line) + ", column " +
                              std::to_string(e.column) + ": " + e.message);
    }
    return std::move(*res.network);
}

Concentration as_conc(const std::vector<double>& values) { return {values}; }

}  // namespace

PYBIND11_MODULE(_crnldp, m) {
    m.doc() = "Large-deviation toolkit for mass-action reaction networks";

    py::class_<Network>(m, "Network")
        .def_property_readonly("species", &Network::species)
        .def_property_readonly("num_species", &Network::num_species)
        .def_property_readonly("num_reactions", &Network::num_reactions)
        .def("__repr__", [](const Network& n) {
            return "<Network " + std::to_string(n.num_species()) + " species, " +
                   std::to_string(n.num_reactions()) + " reactions>";
        });

    m.def("parse", &parse_or_throw, py::arg("source"));
    m.def("serialize", &serialize_network, py::arg("network"));

    m.def(
        "certificates",
        [](const Network& net) {
            return report_to_json(net, full_report(net)).dump();
        },
        py::arg("network"), "Certificate report as a JSON string");

    m.def(
        "drift",
        [](const Network& net, const std::vector<double>& x) {
            return drift_field(net, as_conc(x));
        },
        py::arg("network"), py::arg("x"));

    m.def(
        "integrate_ode",
        [](const Network& net, const std::vector<double>& x0, double t_end, double tol) {
            OdeOptions opts;
            opts.tol = tol;
            OdeTrajectory traj = integrate_ode(net, as_conc(x0), t_end, opts);
            std::vector<std::vector<double>> states;
            states.reserve(traj.states.size());
            for (const auto& s : traj.states) states.push_back(s.values);
            return py::make_tuple(traj.times, states);
        },
        py::arg("network"), py::arg("x0"), py::arg("t_end"), py::arg("tol") = 1e-8,
        "Returns (times, states)");

    m.def(
        "find_attractors",
        [](const Network& net, const std::vector<double>& lo, const std::vector<double>& hi,
           std::size_t starts, std::uint64_t seed) {
            std::vector<std::pair<std::vector<double>, bool>> out;
            for (const auto& a : find_attractors(net, {lo, hi}, starts, seed))
                out.emplace_back(a.point.values, a.stable);
            return out;
        },
        py::arg("network"), py::arg("lo"), py::arg("hi"), py::arg("starts") = 64,
        py::arg("seed") = 0, "Returns [(point, stable), ...]");

    m.def(
        "simulate",
        [](const Network& net, double volume, const std::vector<double>& x0, double t_end,
           std::uint64_t seed) {
            JumpTrajectory traj = simulate(net, volume, to_lattice(as_conc(x0), volume),
                                           t_end, seed);
            std::vector<std::pair<double, std::size_t>> events;
            events.reserve(traj.events.size());
            for (const auto& e : traj.events) events.emplace_back(e.time, e.reaction);
            return py::make_tuple(events, traj.state_after(net, traj.events.size()).counts,
                                  traj.absorbed);
        },
        py::arg("network"), py::arg("volume"), py::arg("x0"), py::arg("t_end"),
        py::arg("seed"), "Returns (events, final_counts, absorbed)");

    m.def(
        "lagrangian",
        [](const Network& net, const std::vector<double>& x, const std::vector<double>& xi) {
            std::vector<double> lambda(net.num_reactions());
            for (std::size_t r = 0; r < net.num_reactions(); ++r)
                lambda[r] = asymptotic_rate(net, r, as_conc(x));
            LagrangianResult res = lagrangian(net, lambda, xi);
            py::dict d;
            d["value"] = res.value;
            d["gap"] = res.duality_gap;
            d["feasible"] = res.status != LagrangianStatus::Infeasible;
            if (res.theta_star) d["theta_star"] = *res.theta_star;
            if (res.q_star) d["q_star"] = *res.q_star;
            return d;
        },
        py::arg("network"), py::arg("x"), py::arg("xi"));

    m.def(
        "quasipotential",
        [](const Network& net, const std::vector<double>& x, const std::vector<double>& y,
           const std::vector<double>& lower, const std::vector<double>& upper,
           std::size_t segments, std::size_t restarts, std::uint64_t seed) {
            DomainSpec dom;
            dom.lower = lower;
            dom.upper = upper;
            QPotOptions opts;
            opts.segments = segments;
            opts.restarts = restarts;
            opts.seed = seed;
            QPotResult res = quasipotential(net, as_conc(x), as_conc(y), dom, opts);
            std::vector<std::vector<double>> nodes;
            for (const auto& n : res.path.nodes) nodes.push_back(n.values);
            py::dict d;
            d["value"] = res.value;
            d["converged"] = res.converged;
            d["nodes"] = nodes;
            d["durations"] = res.path.durations;
            return d;
        },
        py::arg("network"), py::arg("x"), py::arg("y"),
        py::arg("lower") = std::vector<double>{}, py::arg("upper") = std::vector<double>{},
        py::arg("segments") = 64, py::arg("restarts") = 4, py::arg("seed") = 0);

    m.def(
        "ensemble_exit",
        [](const Network& net, const std::vector<double>& v_grid,
           const std::vector<double>& x0, const std::vector<double>& upper,
           std::size_t replicas, double t_max, std::uint64_t seed) {
            DomainSpec dom;
            dom.upper = upper;
            EnsembleExitResult res =
                ensemble_exit(net, v_grid, as_conc(x0), dom, replicas, t_max, seed);
            py::list rows;
            for (const auto& s : res.per_volume) {
                py::dict row;
                row["volume"] = s.volume;
                row["mean_tau"] = s.mean_tau;
                row["log_mean_over_v"] = s.log_mean_over_v;
                row["ci"] = py::make_tuple(s.ci_lo, s.ci_hi);
                row["censored"] = s.censored;
                rows.append(row);
            }
            py::dict d;
            d["per_volume"] = rows;
            d["fit_refused"] = res.fit_refused;
            if (res.slope) d["slope"] = *res.slope;
            return d;
        },
        py::arg("network"), py::arg("v_grid"), py::arg("x0"), py::arg("upper"),
        py::arg("replicas") = 100, py::arg("t_max") = 1e6, py::arg("seed") = 0);
}
