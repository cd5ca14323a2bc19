"""Large-deviation toolkit for mass-action reaction networks."""

from ._crnldp import (
    Network,
    certificates,
    drift,
    ensemble_exit,
    find_attractors,
    integrate_ode,
    lagrangian,
    parse,
    quasipotential,
    serialize,
    simulate,
)

__all__ = [
    "Network",
    "certificates",
    "drift",
    "ensemble_exit",
    "find_attractors",
    "integrate_ode",
    "lagrangian",
    "parse",
    "quasipotential",
    "serialize",
    "simulate",
]
