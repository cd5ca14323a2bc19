"""Smoke checks for the python bindings: every exported operation runs and
returns sane values on small fixtures."""

import json
import math
import sys

import _crnldp as crnldp

EX1 = "0 -> A + B @ 1.0\nA + B -> 2 B @ 1.0\n2 B -> A @ 1.0\n"
SCHLOGL = "0 -> A @ 6\nA -> 0 @ 11\n2 A -> 3 A @ 6\n3 A -> 2 A @ 1\n"

failures = []


def check(name, ok):
    print(f"{name}: {'ok' if ok else 'FAIL'}")
    if not ok:
        failures.append(name)


net = crnldp.parse(EX1)
check("parse", net.num_species == 2 and net.num_reactions == 3)
check("species", list(net.species) == ["A", "B"])
check("roundtrip", crnldp.serialize(crnldp.parse(crnldp.serialize(net))) == crnldp.serialize(net))

try:
    crnldp.parse("A -> @ 1.0\n")
    check("parse_error", False)
except ValueError as e:
    check("parse_error", "line 1" in str(e))

report = json.loads(crnldp.certificates(net))
check("certificates", report["schema_version"] == 1 and report["ase"] is True)

d = crnldp.drift(net, [1.0, 1.0])
check("drift", abs(d[0] - 1.0) < 1e-12 and abs(d[1]) < 1e-12)

times, states = crnldp.integrate_ode(net, [2.0, 0.5], 40.0, tol=1e-10)
check("ode_times", times[0] == 0.0 and abs(times[-1] - 40.0) < 1e-9)
check(
    "ode_fixed_point",
    abs(states[-1][0] - 3.0 / math.sqrt(2.0)) < 1e-6
    and abs(states[-1][1] - math.sqrt(2.0)) < 1e-6,
)

schlogl = crnldp.parse(SCHLOGL)
attractors = crnldp.find_attractors(schlogl, [0.0], [5.0], starts=64, seed=1)
points = sorted(round(p[0], 6) for p, _ in attractors)
check("attractors", points == [1.0, 2.0, 3.0])
check("attractor_stability", sum(1 for _, s in attractors if s) == 2)

events, final_counts, absorbed = crnldp.simulate(schlogl, 100.0, [1.0], 2.0, seed=7)
events2, final2, _ = crnldp.simulate(schlogl, 100.0, [1.0], 2.0, seed=7)
check("simulate", len(events) > 0 and final_counts[0] >= 0 and not absorbed)
check("simulate_deterministic", events == events2 and final_counts == final2)

lag = crnldp.lagrangian(net, [1.0, 1.0], [1.0, 0.0])
check("lagrangian_at_drift", lag["feasible"] and lag["value"] <= 1e-10 and lag["gap"] <= 1e-8)
lag_off = crnldp.lagrangian(net, [1.0, 1.0], [0.0, 0.0])
check("lagrangian_off_drift", lag_off["value"] > 0.0)

qp = crnldp.quasipotential(
    schlogl, [1.0], [2.0], lower=[0.0], upper=[5.0], segments=24, restarts=1, seed=0
)
check("quasipotential", qp["converged"] and abs(qp["value"] - 0.0134603) < 0.002)
check("quasipotential_path", len(qp["nodes"]) == len(qp["durations"]) + 1)

ens = crnldp.ensemble_exit(schlogl, [20.0, 40.0], [1.0], [2.0], replicas=64, t_max=1e6, seed=3)
check("ensemble_exit", not ens["fit_refused"] and "slope" in ens and len(ens["per_volume"]) == 2)

if failures:
    print("FAILED:", ", ".join(failures))
    sys.exit(1)
print("all smoke checks passed")
