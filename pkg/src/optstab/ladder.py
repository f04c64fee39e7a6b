"""Lipschitz ladders: increasing convex sets S_k on which the gradient of a
smooth objective is lambda_k-Lipschitz.

The radii t_k are found by inverting the nondecreasing radial function
phi(t) = sup of the Hessian norm over (ball of radius t around y0) within
the feasible region, via bracket expansion and bisection.  When that radial
function is bounded (the Hessian norm has a finite sup s over the whole
feasible region), the ladder short-circuits to the single constant s.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

import numpy as np

from .extreal import INF
from .gauges import GaugeSet

TOL_LADDER = 1e-6
MAX_BRACKET_DOUBLINGS = 60


@dataclass(frozen=True)
class SmoothProblem:
    """Twice-differentiable objective with feasible region C (a gauge-set
    body) intersected with an open box U, and a base point y0 in both."""
    f: Callable = field(repr=False)
    grad: Callable = field(repr=False)
    hess_norm: Callable = field(repr=False)      # h(x) = ||f''(x)||
    dim: int = 1
    y0: np.ndarray = None
    C: Optional[GaugeSet] = None                 # None = whole space
    U_box: Optional[tuple] = None                # (lo, hi) open box, None = whole space
    hessian_sup_closed_form: Optional[Callable[[float], float]] = field(
        default=None, repr=False)                # t -> sup h over ball(y0,t) cap C cap U
    hessian_sup_bound: Optional[float] = None    # finite s if sup over C cap U is finite

    def __post_init__(self):
        y0 = np.atleast_1d(np.asarray(self.y0, dtype=float))
        object.__setattr__(self, "y0", y0)
        if not self.feasible(y0):
            raise ValueError("base point y0 is not in C intersect U")

    def feasible(self, x) -> bool:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if self.C is not None and not self.C.contains(x):
            return False
        if self.U_box is not None:
            lo, hi = self.U_box
            if not (np.all(x > np.asarray(lo, float))
                    and np.all(x < np.asarray(hi, float))):
                return False
        return True


def check_derivative_consistency(P: SmoothProblem, rng: np.random.Generator,
                                 n_points: int = 100, radius: float = 1.0,
                                 fd_step: float = 1e-6) -> dict:
    """Central-difference consistency of grad with f, and of hess_norm with
    gradient differences along sampled segments."""
    grad_ok, hess_ok = True, True
    pts = []
    while len(pts) < n_points:
        x = P.y0 + rng.uniform(-radius, radius, size=P.dim)
        if P.feasible(x):
            pts.append(x)
    for x in pts:
        g = np.atleast_1d(np.asarray(P.grad(x), dtype=float))
        fd = np.zeros(P.dim)
        for i in range(P.dim):
            e = np.zeros(P.dim)
            e[i] = fd_step
            fd[i] = (P.f(x + e) - P.f(x - e)) / (2 * fd_step)
        scale = max(1.0, float(np.linalg.norm(g)))
        if np.linalg.norm(fd - g) / scale > 1e-5:
            grad_ok = False
    for i in range(0, len(pts) - 1, 2):
        x, y = pts[i], pts[i + 1]
        seg = [x + s * (y - x) for s in np.linspace(0, 1, 16)]
        hmax = max(float(P.hess_norm(z)) for z in seg)
        lhs = float(np.linalg.norm(np.atleast_1d(np.asarray(P.grad(x), float))
                                   - np.atleast_1d(np.asarray(P.grad(y), float))))
        if lhs > hmax * float(np.linalg.norm(x - y)) * (1 + 1e-4) + 1e-12:
            hess_ok = False
    return dict(grad_ok=grad_ok, hess_ok=hess_ok, passed=grad_ok and hess_ok)


def hessian_sup(P: SmoothProblem, t: float,
                rng: Optional[np.random.Generator] = None,
                n_samples: int = 1000, refine_rounds: int = 5) -> tuple:
    """sup of the Hessian norm over (ball of radius t around y0) within the
    feasible region; nondecreasing in t by construction.

    Returns (value, mode).  The sampled fallback yields a lower bound on
    the true sup and is flagged mode='sampled'.
    """
    if t < 0:
        raise ValueError("radius must be nonnegative")
    if P.hessian_sup_closed_form is not None:
        return float(P.hessian_sup_closed_form(t)), "exact"
    if t == 0.0:
        return float(P.hess_norm(P.y0)), "exact"
    rng = rng if rng is not None else np.random.default_rng(0)
    best_x = P.y0.copy()
    best = float(P.hess_norm(P.y0))

    def consider(x):
        nonlocal best, best_x
        if np.linalg.norm(x - P.y0) <= t and P.feasible(x):
            v = float(P.hess_norm(x))
            if v > best:
                best, best_x = v, x

    # boundary then interior samples, then local coordinate refinement
    dirs = rng.standard_normal((n_samples, P.dim))
    dirs /= np.maximum(np.linalg.norm(dirs, axis=1)[:, None], 1e-30)
    for u in dirs:
        consider(P.y0 + t * u)
    radii = t * rng.uniform(0, 1, size=n_samples) ** (1.0 / P.dim)
    dirs = rng.standard_normal((n_samples, P.dim))
    dirs /= np.maximum(np.linalg.norm(dirs, axis=1)[:, None], 1e-30)
    for r, u in zip(radii, dirs):
        consider(P.y0 + r * u)
    step = t / 8.0
    for _ in range(refine_rounds):
        for i in range(P.dim):
            for sgn in (-1.0, 1.0):
                e = np.zeros(P.dim)
                e[i] = sgn * step
                consider(best_x + e)
        step /= 4.0
    return best, "sampled"


def solve_radius(P: SmoothProblem, lam: float, t_hint: float = 1.0,
                 tol: float = TOL_LADDER,
                 rng: Optional[np.random.Generator] = None) -> float:
    """Smallest-bracket t > 0 with |hessian_sup(t) - lam| <= tol, via
    bracket expansion then bisection on the nondecreasing radial sup."""
    s0, _ = hessian_sup(P, 0.0, rng=rng)
    if not lam > s0:
        raise ValueError(f"lambda = {lam} must exceed the base value {s0}")
    hi = max(t_hint, 1.0)
    lo = 0.0
    val_hi, _ = hessian_sup(P, hi, rng=rng)
    doublings = 0
    while val_hi < lam:
        lo, hi = hi, 2.0 * hi
        val_hi, _ = hessian_sup(P, hi, rng=rng)
        doublings += 1
        if doublings > MAX_BRACKET_DOUBLINGS:
            raise ValueError(
                "bracket expansion exhausted: unboundedness certificate violated")
    while True:
        mid = 0.5 * (lo + hi)
        v, _ = hessian_sup(P, mid, rng=rng)
        if abs(v - lam) <= tol or hi - lo < tol * 1e-3:
            if mid <= 0.0:
                raise ValueError("solved radius is not positive")
            return mid
        if v < lam:
            lo = mid
        else:
            hi = mid


@dataclass(frozen=True)
class LadderResult:
    radii: tuple                 # t_k
    constants: tuple             # lambda_k
    short_circuit: Optional[float]   # finite global sup s, if detected
    verification: tuple          # per-level dicts

    @property
    def passed(self) -> bool:
        return all(v["verified"] for v in self.verification)

    def to_table(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("k,lambda_k,t_k,verified,worst_ratio\n")
            for k, v in enumerate(self.verification, start=1):
                fh.write(f"{k},{v['lambda']!r},{v['t']!r},"
                         f"{v['verified']},{v['worst_ratio']!r}\n")


def _verify_level(P: SmoothProblem, t: float, lam: float,
                  rng: np.random.Generator, n_pairs: int,
                  inflation: float) -> dict:
    """Sampled gradient-difference check: ||g(x)-g(y)|| <= lam ||x-y|| for
    x, y in (ball of radius t) within the feasible region."""
    pts: List[np.ndarray] = []
    tries = 0
    while len(pts) < 2 * n_pairs and tries < 40 * n_pairs:
        tries += 1
        u = rng.standard_normal(P.dim)
        u /= max(np.linalg.norm(u), 1e-30)
        r = t * rng.uniform() ** (1.0 / P.dim)
        x = P.y0 + r * u
        if P.feasible(x):
            pts.append(x)
    worst = 0.0
    for i in range(0, len(pts) - 1, 2):
        x, y = pts[i], pts[i + 1]
        dx = float(np.linalg.norm(x - y))
        if dx == 0.0:
            continue
        dg = float(np.linalg.norm(
            np.atleast_1d(np.asarray(P.grad(x), float))
            - np.atleast_1d(np.asarray(P.grad(y), float))))
        worst = max(worst, dg / dx)
    more_than_one = len(pts) >= 2
    return dict(t=t, **{"lambda": lam}, worst_ratio=worst,
                verified=bool(worst <= lam * inflation and more_than_one),
                n_points=len(pts))


def build_ladder(P: SmoothProblem, lam_seq: Sequence[float],
                 rng: Optional[np.random.Generator] = None,
                 n_pairs: int = 10_000, tol: float = TOL_LADDER) -> LadderResult:
    """Radii t_k with hessian_sup(t_k) = lambda_k, plus per-level sampled
    Lipschitz verification of the gradient on the ball of radius t_k."""
    lam_seq = [float(l) for l in lam_seq]
    if any(b <= a for a, b in zip(lam_seq, lam_seq[1:])):
        raise ValueError("lambda sequence must be strictly increasing")
    rng = rng if rng is not None else np.random.default_rng(0)

    s0, mode0 = hessian_sup(P, 0.0, rng=rng)
    inflation = 1 + 1e-6 if mode0 == "exact" and P.hessian_sup_closed_form else 1 + 1e-3

    if P.hessian_sup_bound is not None and math.isfinite(P.hessian_sup_bound):
        s = float(P.hessian_sup_bound)
        big_t = 10.0 * max(1.0, float(np.linalg.norm(P.y0)) + 10.0)
        v = _verify_level(P, big_t, s, rng, n_pairs, 1 + 1e-6)
        return LadderResult(radii=(INF,), constants=(s,), short_circuit=s,
                            verification=(v,))

    radii, verifs = [], []
    t_hint = 1.0
    for lam in lam_seq:
        t = solve_radius(P, lam, t_hint=t_hint, tol=tol, rng=rng)
        t_hint = t
        if radii and t < radii[-1]:
            t = radii[-1]  # radial sup is nondecreasing; keep radii monotone
        radii.append(t)
        verifs.append(_verify_level(P, t, lam, rng, n_pairs, inflation))
    return LadderResult(radii=tuple(radii), constants=tuple(lam_seq),
                        short_circuit=None, verification=tuple(verifs))


def coverage_probe(P: SmoothProblem, result: LadderResult,
                   probes: Sequence[np.ndarray]) -> bool:
    """Every feasible probe within the largest radius lies in some S_k."""
    if result.short_circuit is not None:
        return True
    t_max = result.radii[-1]
    for x in probes:
        x = np.atleast_1d(np.asarray(x, float))
        if not P.feasible(x):
            continue
        r = float(np.linalg.norm(x - P.y0))
        if r <= t_max and not any(r <= t for t in result.radii):
            return False
    return True
