"""SUP/INF operators over set models and the stability verifiers.

``sup_over`` / ``inf_over`` are exact whenever the objective and the set
both carry closed-form structure (piecewise-linear objectives over interval
unions, instance-supplied exact hooks, finite clouds); otherwise they return
a sampled one-sided estimate flagged as such.

``check_finite_stability`` runs the finite-case transfer (uniform modulus or
Lipschitz) over supplied set pairs; ``check_infinite_escape`` runs the
infinite-case witness construction; both emit per-pair verdict tables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

import numpy as np

from .distances import PseudoDistance
from .extreal import INF, NEG_INF
from .sets import (DEFAULT_BUDGET, AxisSegments, DistanceReport, FiniteCloud,
                   Interval, IntervalUnion, SetModel, asym_hausdorff, hausdorff,
                   point_set_distance)

TOL_OPT = 1e-9


# ---------------------------------------------------------------------------
# objective functions and their regularity declarations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Lipschitz:
    lam: float


@dataclass(frozen=True)
class UniformModulus:
    """A modulus eps -> delta(eps): d(x,y) < delta(eps) implies |f(x)-f(y)| < eps."""
    delta: Callable[[float], float] = field(repr=False)


@dataclass(frozen=True)
class ContinuousOnly:
    pass


@dataclass(frozen=True)
class LinearPiece:
    """Linear piece on [lo, hi].  Optional endpoint anchors ``val_lo`` /
    ``val_hi`` pin the exact values at the breakpoints (float evaluation of
    slope*t + intercept can miss a breakpoint value by rounding)."""
    lo: float
    hi: float
    slope: float
    intercept: float
    val_lo: Optional[float] = None
    val_hi: Optional[float] = None

    def value(self, t: float) -> float:
        if self.val_lo is not None and t == self.lo:
            return self.val_lo
        if self.val_hi is not None and t == self.hi:
            return self.val_hi
        return self.slope * t + self.intercept

    @staticmethod
    def from_anchors(lo: float, hi: float, val_lo: float, val_hi: float) -> "LinearPiece":
        slope = 0.0 if hi == lo else (val_hi - val_lo) / (hi - lo)
        return LinearPiece(lo, hi, slope, val_lo - slope * lo, val_lo, val_hi)


def piecewise_eval(pieces: Sequence[LinearPiece], t: float) -> float:
    for p in pieces:
        if p.lo <= t <= p.hi:
            return p.value(t)
    raise ValueError(f"t={t} not covered by the piecewise descriptor")


@dataclass(frozen=True)
class ObjectiveFn:
    fn: Callable = field(repr=False)
    regularity: object = ContinuousOnly()
    pieces: Optional[Sequence[LinearPiece]] = None
    exact_sup: Optional[Callable[[SetModel], Optional[float]]] = field(default=None, repr=False)
    exact_inf: Optional[Callable[[SetModel], Optional[float]]] = field(default=None, repr=False)
    bounded_below: bool = False
    name: str = "f"

    def __call__(self, x) -> float:
        return float(self.fn(x))

    def negated(self) -> "ObjectiveFn":
        pieces = None
        if self.pieces is not None:
            pieces = tuple(
                LinearPiece(p.lo, p.hi, -p.slope, -p.intercept,
                            None if p.val_lo is None else -p.val_lo,
                            None if p.val_hi is None else -p.val_hi)
                for p in self.pieces)
        return ObjectiveFn(
            fn=lambda x: -float(self.fn(x)),
            regularity=self.regularity,
            pieces=pieces,
            exact_sup=(None if self.exact_inf is None
                       else lambda A: _neg_or_none(self.exact_inf(A))),
            exact_inf=(None if self.exact_sup is None
                       else lambda A: _neg_or_none(self.exact_sup(A))),
            name=f"-{self.name}",
        )


def _neg_or_none(v):
    return None if v is None else -v


def piecewise_linear_objective(pieces: Sequence[LinearPiece], regularity=None,
                               name: str = "f") -> ObjectiveFn:
    pieces = tuple(sorted(pieces, key=lambda p: p.lo))
    if regularity is None:
        regularity = Lipschitz(max(abs(p.slope) for p in pieces))
    return ObjectiveFn(fn=lambda t: piecewise_eval(pieces, float(t)),
                       regularity=regularity, pieces=pieces, name=name)


@dataclass(frozen=True)
class OptValue:
    value: float
    witness: Optional[object] = None
    mode: str = "exact"


def _piecewise_extreme(pieces: Sequence[LinearPiece], A: IntervalUnion, want_max: bool):
    best = NEG_INF if want_max else INF
    witness = None
    for iv in A.intervals:
        for p in pieces:
            lo = max(iv.lo, p.lo)
            hi = min(iv.hi, p.hi)
            if lo > hi:
                continue
            for t in (lo, hi):
                v = p.value(t)
                if (want_max and v > best) or (not want_max and v < best):
                    best, witness = v, t
    if witness is None:
        raise ValueError("piecewise descriptor does not cover the interval union")
    return best, witness


def sup_over(f: ObjectiveFn, A, budget: int = DEFAULT_BUDGET,
             rng: Optional[np.random.Generator] = None) -> OptValue:
    """SUP_f(A) with the convention sup over an empty probe list = -inf."""
    if isinstance(A, (list, tuple)) or (isinstance(A, np.ndarray) and not isinstance(A, SetModel)):
        pts = list(A)
        if not pts:
            return OptValue(NEG_INF, None, "exact")
        vals = [f(p) for p in pts]
        i = int(np.argmax(vals))
        return OptValue(vals[i], pts[i], "exact")

    if isinstance(A, FiniteCloud):
        vals = [f(p) for p in A.points]
        i = int(np.argmax(vals))
        return OptValue(vals[i], A.points[i], "exact")

    if f.exact_sup is not None:
        v = f.exact_sup(A)
        if v is not None:
            return OptValue(float(v), None, "exact")

    if f.pieces is not None and isinstance(A, IntervalUnion):
        v, w = _piecewise_extreme(f.pieces, A, want_max=True)
        return OptValue(v, w, "exact")

    rng = rng if rng is not None else np.random.default_rng(0)
    pts = A.sample(budget, rng)
    vals = [f(p) for p in pts]
    i = int(np.argmax(vals))
    return OptValue(vals[i], pts[i], "sampled")


def inf_over(f: ObjectiveFn, A, budget: int = DEFAULT_BUDGET,
             rng: Optional[np.random.Generator] = None) -> OptValue:
    """INF_f(A) with the convention inf over an empty probe list = +inf."""
    if isinstance(A, (list, tuple)) or (isinstance(A, np.ndarray) and not isinstance(A, SetModel)):
        pts = list(A)
        if not pts:
            return OptValue(INF, None, "exact")
        vals = [f(p) for p in pts]
        i = int(np.argmin(vals))
        return OptValue(vals[i], pts[i], "exact")

    if isinstance(A, FiniteCloud):
        vals = [f(p) for p in A.points]
        i = int(np.argmin(vals))
        return OptValue(vals[i], A.points[i], "exact")

    if f.exact_inf is not None:
        v = f.exact_inf(A)
        if v is not None:
            return OptValue(float(v), None, "exact")

    if f.pieces is not None and isinstance(A, IntervalUnion):
        v, w = _piecewise_extreme(f.pieces, A, want_max=False)
        return OptValue(v, w, "exact")

    rng = rng if rng is not None else np.random.default_rng(0)
    pts = A.sample(budget, rng)
    vals = [f(p) for p in pts]
    i = int(np.argmin(vals))
    return OptValue(vals[i], pts[i], "sampled")


# ---------------------------------------------------------------------------
# stability verifiers
# ---------------------------------------------------------------------------

@dataclass
class VerdictReport:
    columns: List[str]
    rows: List[dict]

    @property
    def passed(self) -> bool:
        return all(r.get("verdict") in ("pass", "skipped") for r in self.rows)

    def to_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(",".join(self.columns) + "\n")
            for r in self.rows:
                fh.write(",".join(_fmt(r.get(c)) for c in self.columns) + "\n")


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def check_finite_stability(f: ObjectiveFn, d: PseudoDistance,
                           pairs: Sequence, eps: Optional[float] = None,
                           tol: float = TOL_OPT, diagnostic: bool = False,
                           budget: int = DEFAULT_BUDGET,
                           rng: Optional[np.random.Generator] = None) -> VerdictReport:
    """Finite-case stability transfer over supplied (A, A') pairs.

    Uniform regularity: whenever D_H(A, A') < delta(eps/2), both optimal
    values move by less than eps.  Lipschitz regularity: the optimal values
    move by at most Lambda * D_H(A, A') + tol.  ``diagnostic=True`` allows a
    continuous-only objective and records the violations instead of refusing
    (used to demonstrate the necessity of the hypotheses).
    """
    reg = f.regularity
    if isinstance(reg, ContinuousOnly) and not diagnostic:
        raise ValueError("hypotheses unmet: objective is continuous-only")
    if isinstance(reg, UniformModulus) and eps is None and not diagnostic:
        raise ValueError("uniform regularity requires a target eps")

    columns = ["pair_id", "D_H", "sup_A", "sup_Ap", "inf_A", "inf_Ap",
               "delta_used", "bound", "slack", "verdict"]
    rows = []
    for i, (A, Ap) in enumerate(pairs):
        dh = hausdorff(d, A, Ap, budget=budget, rng=rng).value
        sA = sup_over(f, A, budget=budget, rng=rng).value
        sAp = sup_over(f, Ap, budget=budget, rng=rng).value
        iA = inf_over(f, A, budget=budget, rng=rng).value
        iAp = inf_over(f, Ap, budget=budget, rng=rng).value
        if not (math.isfinite(sA) and math.isfinite(iA)):
            raise ValueError(f"pair {i}: A is outside dom(SUP_f)/dom(INF_f)")
        dsup = abs(sA - sAp)
        dinf = abs(iA - iAp)
        row = dict(pair_id=i, D_H=dh, sup_A=sA, sup_Ap=sAp, inf_A=iA, inf_Ap=iAp)
        if isinstance(reg, Lipschitz):
            if dh == NEG_INF and reg.lam > 0:
                raise ValueError(
                    f"pair {i}: D_H = -inf is inconsistent with a Lipschitz objective")
            bound = reg.lam * dh + tol
            slack = bound - max(dsup, dinf)
            row.update(delta_used="", bound=bound, slack=slack,
                       verdict="pass" if slack >= 0 else "fail")
        elif isinstance(reg, UniformModulus):
            delta = reg.delta(eps / 2.0)
            if dh < delta:
                ok = dsup < eps and dinf < eps
                row.update(delta_used=delta, bound=eps, slack=eps - max(dsup, dinf),
                           verdict="pass" if ok else "fail")
            else:
                row.update(delta_used=delta, bound=eps, slack=INF, verdict="skipped")
        else:  # diagnostic mode on a continuous-only objective
            row.update(delta_used="", bound="", slack=-max(dsup, dinf),
                       verdict="violation" if max(dsup, dinf) > 0 else "pass")
        rows.append(row)
    return VerdictReport(columns, rows)


def check_infinite_escape(f: ObjectiveFn, d: PseudoDistance, A: SetModel,
                          mu: float, candidates: Sequence[SetModel],
                          witness_seq: Callable[[float], object],
                          eps: float = 1.0,
                          delta_at: Optional[Callable[[object, float], float]] = None,
                          mode: str = "sup",
                          budget: int = DEFAULT_BUDGET,
                          rng: Optional[np.random.Generator] = None) -> dict:
    """Infinite-case escape verification for SUP_f(A) = +inf (or INF = -inf).

    ``witness_seq(level)`` must return a point of A with f > level (the
    closed-form unboundedness certificate); sampling is never used to prove
    unboundedness.  Returns the constructed delta and per-candidate verdicts.
    """
    if mode == "inf":
        neg = check_infinite_escape(f.negated(), d, A, -mu, candidates,
                                    witness_seq=lambda lv: witness_seq(-lv),
                                    eps=eps, delta_at=delta_at, mode="sup",
                                    budget=budget, rng=rng)
        neg["mode"] = "inf"
        return neg

    a = witness_seq(mu + eps)
    fa = f(a)
    if not fa > mu + eps:
        raise ValueError("unboundedness certificate failed: f(witness) <= mu + eps")

    reg = f.regularity
    if isinstance(reg, Lipschitz) and reg.lam > 0:
        delta = eps / reg.lam
    elif isinstance(reg, UniformModulus):
        delta = reg.delta(eps)
    elif delta_at is not None:
        delta = delta_at(a, eps)
    else:
        raise ValueError("no continuity information at the witness point")

    rows = []
    for i, Ap in enumerate(candidates):
        dasy = asym_hausdorff(d, A, Ap, budget=budget, rng=rng).value
        if dasy < delta:
            s = sup_over(f, Ap, budget=budget, rng=rng)
            verdict = "pass" if s.value > mu else "fail"
            rows.append(dict(candidate=i, D_asyH=dasy, sup=s.value, verdict=verdict))
        else:
            rows.append(dict(candidate=i, D_asyH=dasy, sup="", verdict="skipped"))
    return dict(mode="sup", mu=mu, eps=eps, witness=a, f_witness=fa,
                delta=delta, rows=rows,
                passed=all(r["verdict"] in ("pass", "skipped") for r in rows))


def domain_transfer_check(f: ObjectiveFn, d: PseudoDistance, A: SetModel,
                          delta: float, Ap: SetModel, eps: float,
                          budget: int = DEFAULT_BUDGET,
                          rng: Optional[np.random.Generator] = None) -> bool:
    """SUP_f(A') <= SUP_f(A) + eps and A' stays in dom(SUP_f) whenever
    D_H(A, A') < delta (with delta associated to eps by f's modulus)."""
    sA = sup_over(f, A, budget=budget, rng=rng).value
    if not math.isfinite(sA):
        raise ValueError("hypotheses unmet: A is outside dom(SUP_f)")
    dh = hausdorff(d, A, Ap, budget=budget, rng=rng).value
    if not dh < delta:
        raise ValueError(f"hypotheses unmet: D_H = {dh} >= delta = {delta}")
    sAp = sup_over(f, Ap, budget=budget, rng=rng).value
    return sAp <= sA + eps and sAp > NEG_INF


def _argmin_abs_sin(lo: float, hi: float) -> list:
    """Exact minimizer set of |sin| over [lo, hi] (closed-form piecewise model)."""
    k_lo = math.ceil(lo / math.pi)
    k_hi = math.floor(hi / math.pi)
    zeros = [k * math.pi for k in range(k_lo, k_hi + 1)]
    if zeros:
        return zeros
    return [lo] if abs(math.sin(lo)) <= abs(math.sin(hi)) else [hi]


def minimizer_set_instability_demo(eps: float = 0.1) -> dict:
    """Fixed instance on X = [-20, 20]: argmin sets of |sin| over [0, pi]
    versus [-eps, pi - eps] are Hausdorff-distance pi apart even though the
    constraint sets are only eps apart; the asymmetric distance is 0."""
    from .distances import absolute
    if not 0 < eps < 0.5:
        raise ValueError("eps must lie in (0, 1/2)")
    d = absolute()
    A = IntervalUnion([Interval(0.0, math.pi)])
    Ape = IntervalUnion([Interval(-eps, math.pi - eps)])
    argmin_A = FiniteCloud(_argmin_abs_sin(0.0, math.pi))
    argmin_Ape = FiniteCloud(_argmin_abs_sin(-eps, math.pi - eps))
    return dict(
        eps=eps,
        argmin_A=sorted(float(v) for v in np.atleast_1d(argmin_A.points)),
        argmin_Ape=sorted(float(v) for v in np.atleast_1d(argmin_Ape.points)),
        d_h_sets=hausdorff(d, Ape, A).value,
        d_h_argmins=hausdorff(d, argmin_Ape, argmin_A).value,
        d_asy_argmins=asym_hausdorff(d, argmin_Ape, argmin_A).value,
    )
