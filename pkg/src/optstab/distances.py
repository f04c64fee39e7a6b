"""Pseudo-distance functions: named, evaluable d(x, y) -> [-inf, inf].

No axioms are imposed by construction: a pseudo-distance may be negative,
infinite or asymmetric.  Each named instance documents which additional
properties it actually satisfies; those claims are spot-checkable on
sampled triples via :func:`check_documented_properties`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .extreal import INF, check_extended_real
from .gauges import GaugeSet, minkowski_gauge

SYMMETRIC = "symmetric"
NONNEGATIVE = "nonnegative"
TRIANGLE = "triangle"
IDENTITY = "identity"  # d(x, x) = 0


@dataclass(frozen=True)
class PseudoDistance:
    name: str
    fn: Callable = field(repr=False)
    ambient_dim: Optional[int] = None
    properties: frozenset = frozenset()


def eval_distance(d: PseudoDistance, x, y) -> float:
    """d(x, y) as an extended real; raises on dimension mismatch."""
    if d.ambient_dim is not None:
        for p in (x, y):
            p = np.asarray(p, dtype=float)
            n = 1 if p.ndim == 0 else p.shape[-1]
            if n != d.ambient_dim:
                raise ValueError(
                    f"point of dim {n} passed to {d.name!r} with ambient dim {d.ambient_dim}")
    return check_extended_real(d.fn(x, y))


def euclidean(dim: Optional[int] = None) -> PseudoDistance:
    return PseudoDistance(
        name="euclidean",
        fn=lambda x, y: float(np.linalg.norm(np.asarray(y, float) - np.asarray(x, float))),
        ambient_dim=dim,
        properties=frozenset({SYMMETRIC, NONNEGATIVE, TRIANGLE, IDENTITY}),
    )


def absolute() -> PseudoDistance:
    return PseudoDistance(
        name="absolute",
        fn=lambda x, y: abs(float(np.squeeze(np.asarray(y, float)))
                            - float(np.squeeze(np.asarray(x, float)))),
        ambient_dim=1,
        properties=frozenset({SYMMETRIC, NONNEGATIVE, TRIANGLE, IDENTITY}),
    )


def binding_energy(n: int) -> float:
    """Hydrogen-like level energy E(n) = -13.6 / n**2 (eV)."""
    return -13.6 / float(n) ** 2


def energy_ladder() -> PseudoDistance:
    """d(x, y) = E(y) - E(x) on the energy levels N = {1, 2, ...}.

    The energy one invests to move an electron from level x to level y;
    negative values mean energy is gained.  Asymmetric (d(y,x) = -d(x,y))
    and satisfies d(x,x) = 0 and the (degenerate, additive) triangle
    equality, but is not nonnegative.
    """
    return PseudoDistance(
        name="energy-ladder",
        fn=lambda x, y: binding_energy(int(y)) - binding_energy(int(x)),
        ambient_dim=None,
        properties=frozenset({IDENTITY, TRIANGLE}),
    )


def gauge_distance(C: GaugeSet, name: Optional[str] = None) -> PseudoDistance:
    """d(x, y) = M_C(y - x): the (possibly asymmetric) gauge pseudo-distance."""
    props = {NONNEGATIVE, TRIANGLE, IDENTITY}
    return PseudoDistance(
        name=name or f"gauge[{C.kind}]",
        fn=lambda x, y: minkowski_gauge(C, np.asarray(y, float) - np.asarray(x, float)),
        ambient_dim=C.dim,
        properties=frozenset(props),
    )


def constant_infinite(dim: Optional[int] = None) -> PseudoDistance:
    """d = +inf everywhere: the degenerate pseudo-distance from the theory."""
    return PseudoDistance(
        name="constant-inf",
        fn=lambda x, y: INF,
        ambient_dim=dim,
        properties=frozenset({SYMMETRIC, NONNEGATIVE, TRIANGLE}),
    )


def check_documented_properties(d: PseudoDistance, triples, tol: float = 1e-12) -> dict:
    """Spot-check the documented properties of d on sampled (x, y, z) triples.

    Returns a dict property -> bool (True = no violation observed).
    """
    results = {p: True for p in d.properties}
    for (x, y, z) in triples:
        dxy = eval_distance(d, x, y)
        dyx = eval_distance(d, y, x)
        if SYMMETRIC in results and abs(dxy - dyx) > tol and dxy != dyx:
            results[SYMMETRIC] = False
        if NONNEGATIVE in results and dxy < -tol:
            results[NONNEGATIVE] = False
        if IDENTITY in results and abs(eval_distance(d, x, x)) > tol:
            results[IDENTITY] = False
        if TRIANGLE in results:
            dxz = eval_distance(d, x, z)
            dzy = eval_distance(d, z, y)
            if dxz + dzy < dxy - tol:
                results[TRIANGLE] = False
    return results
