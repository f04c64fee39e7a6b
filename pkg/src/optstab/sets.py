"""Computable set models and the point/set distance notions.

Five set representations are supported:

* :class:`FiniteCloud` -- an explicit point list (exact under any distance);
* :class:`IntervalUnion` -- a sorted disjoint union of 1-D intervals, with
  closed-form distances under the absolute-value metric;
* :class:`AxisSegments` -- a union of segments [0, u_k] (or [0, u_k)) along
  coordinate axes e_k of a truncated sequence space; any two points share at
  most two nonzero coordinates, so Euclidean distances are closed-form;
* :class:`ImplicitSampled` -- a membership oracle plus a sampler;
* :class:`AffineSlab` -- a particular point plus an orthonormal kernel basis
  with a box truncation (an affine solution set {x : Lx = t}).

Suprema over half-open pieces are computed through the closure: the point-set
distance functions involved are continuous, so infima and suprema over a set
and over its closure coincide, and no sampling near an unattained endpoint
is ever needed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .distances import PseudoDistance, eval_distance
from .extreal import INF, NEG_INF

DEFAULT_BUDGET = 2048


@dataclass(frozen=True)
class DistanceReport:
    """A distance value plus the honesty metadata of how it was computed."""
    value: float
    mode: str  # "exact" | "sampled"
    sample_budget: int = 0
    certified_error: float = 0.0

    def __post_init__(self):
        if self.mode == "exact" and self.certified_error != 0.0:
            raise ValueError("exact reports must carry certified_error 0")


class SetModel:
    """Base class; every concrete model certifies at least one member point."""

    dim: int

    def witness(self) -> np.ndarray:
        raise NotImplementedError

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        raise NotImplementedError


@dataclass(frozen=True)
class FiniteCloud(SetModel):
    points: np.ndarray  # shape (n,) for scalars or (n, d)

    def __init__(self, points):
        pts = np.asarray(points, dtype=float)
        if pts.size == 0:
            raise ValueError("a SetModel must be nonempty")
        object.__setattr__(self, "points", pts)

    @property
    def dim(self) -> int:
        return 1 if self.points.ndim == 1 else self.points.shape[1]

    def __len__(self) -> int:
        return self.points.shape[0]

    def witness(self):
        return self.points[0]

    def sample(self, n, rng):
        if n >= len(self):
            return self.points
        idx = rng.choice(len(self), size=n, replace=False)
        return self.points[idx]

    def to_dict(self) -> dict:
        return {"kind": "finite_cloud", "points": self.points.tolist()}

    @staticmethod
    def from_dict(doc: dict) -> "FiniteCloud":
        return FiniteCloud(doc["points"])


def save_cloud_txt(cloud: FiniteCloud, path, delimiter: str = ",") -> None:
    """One point per line, coordinates delimited."""
    pts = np.atleast_2d(cloud.points)
    with open(path, "w") as fh:
        for row in pts:
            fh.write(delimiter.join(repr(float(v)) for v in row) + "\n")


def load_cloud_txt(path, delimiter: str = ",") -> FiniteCloud:
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                rows.append([float(v) for v in line.split(delimiter)])
    pts = np.asarray(rows)
    if pts.shape[1] == 1:
        pts = pts.ravel()
    return FiniteCloud(pts)


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float
    closed_lo: bool = True
    closed_hi: bool = True

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise ValueError(f"interval [{self.lo}, {self.hi}] is empty")


@dataclass(frozen=True)
class IntervalUnion(SetModel):
    intervals: Tuple[Interval, ...]

    def __init__(self, intervals: Sequence):
        ivs = []
        for iv in intervals:
            if isinstance(iv, Interval):
                ivs.append(iv)
            else:
                ivs.append(Interval(*iv))
        if not ivs:
            raise ValueError("a SetModel must be nonempty")
        ivs.sort(key=lambda iv: (iv.lo, iv.hi))
        for a, b in zip(ivs, ivs[1:]):
            if b.lo < a.hi:
                raise ValueError("intervals must be pairwise disjoint")
        object.__setattr__(self, "intervals", tuple(ivs))

    dim = 1

    def witness(self):
        return np.float64(self.intervals[0].lo)

    def contains(self, x: float) -> bool:
        for iv in self.intervals:
            lo_ok = x >= iv.lo if iv.closed_lo else x > iv.lo
            hi_ok = x <= iv.hi if iv.closed_hi else x < iv.hi
            if lo_ok and hi_ok:
                return True
        return False

    def sample(self, n, rng):
        lengths = np.array([iv.hi - iv.lo for iv in self.intervals])
        total = lengths.sum()
        pts = [iv.lo for iv in self.intervals] + [iv.hi for iv in self.intervals]
        m = max(0, n - len(pts))
        if total > 0 and m > 0:
            weights = lengths / total
            ks = rng.choice(len(self.intervals), size=m, p=weights)
            us = rng.uniform(size=m)
            for k, u in zip(ks, us):
                iv = self.intervals[k]
                pts.append(iv.lo + u * (iv.hi - iv.lo))
        return np.asarray(pts[: max(n, len(self.intervals) * 2)])

    def to_dict(self) -> dict:
        return {"kind": "interval_union",
                "intervals": [[iv.lo, iv.hi, iv.closed_lo, iv.closed_hi]
                              for iv in self.intervals]}

    @staticmethod
    def from_dict(doc: dict) -> "IntervalUnion":
        return IntervalUnion([Interval(lo, hi, bool(cl), bool(ch))
                              for lo, hi, cl, ch in doc["intervals"]])


@dataclass(frozen=True)
class AxisSegments(SetModel):
    """Union over k of the segment {t e_k : 0 <= t <= u_k} (or < u_k if open).

    ``extents`` maps the axis index k to (u_k, closed_end).  The origin
    belongs to every segment, so the model is always nonempty.
    """
    extents: Dict[int, Tuple[float, bool]]
    dim: int

    def __init__(self, extents: Dict[int, Tuple[float, bool]], dim: Optional[int] = None):
        ext = {int(k): (float(u), bool(c)) for k, (u, c) in extents.items()}
        if not ext:
            raise ValueError("a SetModel must be nonempty")
        for k, (u, _) in ext.items():
            if k < 0 or u < 0:
                raise ValueError("axis indices and extents must be nonnegative")
        object.__setattr__(self, "extents", ext)
        object.__setattr__(self, "dim", dim if dim is not None else max(ext) + 1)

    def witness(self):
        return np.zeros(self.dim)

    def extent_of(self, k: int) -> float:
        return self.extents.get(k, (0.0, True))[0]

    def point(self, k: int, t: float) -> np.ndarray:
        p = np.zeros(self.dim)
        p[k] = t
        return p

    def contains(self, x, tol: float = 1e-12) -> bool:
        x = np.asarray(x, dtype=float).ravel()
        nz = np.flatnonzero(np.abs(x) > tol)
        if nz.size == 0:
            return True
        if nz.size > 1:
            return False
        k = int(nz[0])
        t = x[k]
        if k not in self.extents or t < -tol:
            return False
        u, closed = self.extents[k]
        return t <= u + tol if closed else t < u - tol

    def sample(self, n, rng):
        axes = sorted(self.extents)
        pts = [self.witness()]
        for k in axes:
            u, _ = self.extents[k]
            pts.append(self.point(k, u))
        m = max(0, n - len(pts))
        if m > 0:
            ks = rng.choice(axes, size=m)
            us = rng.uniform(size=m)
            for k, u01 in zip(ks, us):
                pts.append(self.point(int(k), u01 * self.extents[int(k)][0]))
        return np.asarray(pts[: max(n, len(axes) + 1)])

    def to_dict(self) -> dict:
        return {"kind": "axis_segments", "dim": self.dim,
                "extents": {str(k): [u, c] for k, (u, c) in sorted(self.extents.items())}}

    @staticmethod
    def from_dict(doc: dict) -> "AxisSegments":
        return AxisSegments({int(k): (u, bool(c)) for k, (u, c) in doc["extents"].items()},
                            dim=doc["dim"])


@dataclass(frozen=True)
class ImplicitSampled(SetModel):
    member: Callable[[np.ndarray], bool] = field(repr=False)
    sampler: Callable[[int, np.random.Generator], np.ndarray] = field(repr=False)
    dim: int = 1
    budget: int = DEFAULT_BUDGET
    dispersion: float = INF  # bound on sup over members of distance to a sample
    _witness: Optional[np.ndarray] = None

    def __init__(self, member, sampler, dim, witness, budget=DEFAULT_BUDGET,
                 dispersion=INF):
        witness = np.asarray(witness, dtype=float)
        if not member(witness):
            raise ValueError("witness point fails the membership oracle")
        object.__setattr__(self, "member", member)
        object.__setattr__(self, "sampler", sampler)
        object.__setattr__(self, "dim", int(dim))
        object.__setattr__(self, "budget", int(budget))
        object.__setattr__(self, "dispersion", float(dispersion))
        object.__setattr__(self, "_witness", witness)

    def witness(self):
        return self._witness

    def sample(self, n, rng):
        pts = np.atleast_2d(np.asarray(self.sampler(n, rng), dtype=float))
        keep = [p for p in pts if self.member(p)]
        keep.append(self._witness)
        return np.asarray(keep)


@dataclass(frozen=True)
class AffineSlab(SetModel):
    """{particular + K u : u in R^k}, box-truncated for sampling.

    ``kernel_basis`` columns are orthonormalized at construction.  The box
    truncation only affects sampling; closed-form distances treat the slab
    as the full affine subspace (generous truncation changes nothing for
    parallel-slab distances, which are realized at every point).
    """
    particular: np.ndarray
    kernel_basis: np.ndarray  # (d, k), orthonormal columns; k may be 0
    box_halfwidth: float = 1e3

    def __init__(self, particular, kernel_basis, box_halfwidth=1e3):
        particular = np.asarray(particular, dtype=float).ravel()
        K = np.asarray(kernel_basis, dtype=float)
        if K.size == 0:
            K = np.zeros((particular.shape[0], 0))
        if K.ndim == 1:
            K = K[:, None]
        if K.shape[1] > 0:
            q, _ = np.linalg.qr(K)
            K = q[:, : K.shape[1]]
        object.__setattr__(self, "particular", particular)
        object.__setattr__(self, "kernel_basis", K)
        object.__setattr__(self, "box_halfwidth", float(box_halfwidth))

    @property
    def dim(self) -> int:
        return self.particular.shape[0]

    def witness(self):
        return self.particular

    def project(self, x) -> np.ndarray:
        """Orthogonal projection of x onto the (untruncated) slab."""
        x = np.asarray(x, dtype=float).ravel()
        K = self.kernel_basis
        delta = x - self.particular
        return self.particular + K @ (K.T @ delta)

    def sample(self, n, rng):
        K = self.kernel_basis
        pts = [self.particular]
        if K.shape[1] > 0 and n > 1:
            coeffs = rng.uniform(-self.box_halfwidth, self.box_halfwidth,
                                 size=(n - 1, K.shape[1]))
            pts.extend(self.particular + coeffs @ K.T)
        return np.asarray(pts)

    def to_dict(self) -> dict:
        return {"kind": "affine_slab", "particular": self.particular.tolist(),
                "kernel_basis": self.kernel_basis.tolist(),
                "box_halfwidth": self.box_halfwidth}

    @staticmethod
    def from_dict(doc: dict) -> "AffineSlab":
        return AffineSlab(doc["particular"], doc["kernel_basis"], doc["box_halfwidth"])


_SERIALIZABLE = {"finite_cloud": FiniteCloud, "interval_union": IntervalUnion,
                 "axis_segments": AxisSegments, "affine_slab": AffineSlab}


def set_from_dict(doc: dict) -> SetModel:
    kind = doc.get("kind")
    if kind not in _SERIALIZABLE:
        raise ValueError(f"unknown set model kind {kind!r}")
    return _SERIALIZABLE[kind].from_dict(doc)


def save_set(model: SetModel, path) -> None:
    with open(path, "w") as fh:
        json.dump(model.to_dict(), fh, indent=2, sort_keys=True)


def load_set(path) -> SetModel:
    with open(path) as fh:
        return set_from_dict(json.load(fh))


# ---------------------------------------------------------------------------
# closed-form pieces
# ---------------------------------------------------------------------------

def _abs_dist_to_union(x: float, A: IntervalUnion) -> float:
    best = INF
    for iv in A.intervals:
        if iv.lo <= x <= iv.hi:
            return 0.0
        best = min(best, abs(x - iv.lo), abs(x - iv.hi))
    return best


def _euclid_dist_to_axis_segments(x: np.ndarray, A: AxisSegments) -> float:
    x = np.asarray(x, dtype=float).ravel()
    sq = float(x @ x)
    best = INF
    for m, (u, _) in A.extents.items():
        s = min(max(x[m], 0.0), u) if m < x.shape[0] else 0.0
        xm = x[m] if m < x.shape[0] else 0.0
        best = min(best, np.sqrt(sq - xm * xm + (xm - s) ** 2))
    return best


def _slabs_parallel(A: AffineSlab, B: AffineSlab, tol: float = 1e-9) -> bool:
    Ka, Kb = A.kernel_basis, B.kernel_basis
    if Ka.shape != Kb.shape:
        return False
    if Ka.shape[1] == 0:
        return True
    ra = Ka - Kb @ (Kb.T @ Ka)
    rb = Kb - Ka @ (Ka.T @ Kb)
    return float(np.abs(ra).max()) < tol and float(np.abs(rb).max()) < tol


def _slab_offset_distance(A: AffineSlab, B: AffineSlab) -> float:
    # distance between parallel affine subspaces: the normal component of
    # the particular-point difference; the same value from every point.
    delta = A.particular - B.particular
    K = B.kernel_basis
    if K.shape[1] > 0:
        delta = delta - K @ (K.T @ delta)
    return float(np.linalg.norm(delta))


# ---------------------------------------------------------------------------
# the four distance notions
# ---------------------------------------------------------------------------

def point_set_distance(d: PseudoDistance, x, A: SetModel,
                       budget: int = DEFAULT_BUDGET,
                       rng: Optional[np.random.Generator] = None,
                       orientation: str = "from_point") -> DistanceReport:
    """d(x, A) = inf { d(x, a) : a in A }.

    ``orientation`` selects the argument order for asymmetric d:
    "from_point" evaluates d(x, a) (the default convention) and
    "to_point" evaluates d(a, x).
    """
    if orientation not in ("from_point", "to_point"):
        raise ValueError(f"unknown orientation {orientation!r}")

    def dd(p, a):
        return eval_distance(d, p, a) if orientation == "from_point" else eval_distance(d, a, p)

    if isinstance(A, FiniteCloud):
        value = min(dd(x, a) for a in A.points)
        return DistanceReport(value, "exact")

    if isinstance(A, IntervalUnion) and d.name == "absolute":
        return DistanceReport(_abs_dist_to_union(float(x), A), "exact")

    if isinstance(A, AxisSegments) and d.name == "euclidean":
        return DistanceReport(_euclid_dist_to_axis_segments(x, A), "exact")

    if isinstance(A, AffineSlab) and d.name == "euclidean":
        value = float(np.linalg.norm(np.asarray(x, float).ravel() - A.project(x)))
        return DistanceReport(value, "exact")

    rng = rng if rng is not None else np.random.default_rng(0)
    pts = A.sample(budget, rng)
    value = min(dd(x, a) for a in pts)
    err = A.dispersion if isinstance(A, ImplicitSampled) else INF
    return DistanceReport(value, "sampled", sample_budget=budget, certified_error=err)


def set_set_distance(d: PseudoDistance, A: SetModel, B: SetModel,
                     budget: int = DEFAULT_BUDGET,
                     rng: Optional[np.random.Generator] = None) -> DistanceReport:
    """d(A, B) = inf { d(a, b) : a in A, b in B }."""
    if isinstance(A, FiniteCloud):
        reports = [point_set_distance(d, a, B, budget=budget, rng=rng) for a in A.points]
        value = min(r.value for r in reports)
        if all(r.mode == "exact" for r in reports):
            return DistanceReport(value, "exact")
        return DistanceReport(value, "sampled", sample_budget=budget, certified_error=INF)

    if isinstance(A, IntervalUnion) and isinstance(B, IntervalUnion) and d.name == "absolute":
        best = INF
        for ia in A.intervals:
            for ib in B.intervals:
                if ia.lo <= ib.hi and ib.lo <= ia.hi:
                    return DistanceReport(0.0, "exact")
                best = min(best, abs(ia.lo - ib.hi), abs(ib.lo - ia.hi))
        return DistanceReport(best, "exact")

    rng = rng if rng is not None else np.random.default_rng(0)
    pts = A.sample(budget, rng)
    if _has_exact_point_distance(d, B):
        value = min(point_set_distance(d, a, B, budget=budget, rng=rng).value
                    for a in pts)
    else:
        pts_b = np.atleast_2d(np.asarray(B.sample(budget, rng), dtype=float))
        pa = np.atleast_2d(np.asarray(pts, dtype=float))
        if d.name == "euclidean":
            from scipy.spatial.distance import cdist
            value = float(cdist(pa, pts_b).min())
        else:
            value = min(eval_distance(d, a, b) for a in pts for b in pts_b)
    return DistanceReport(value, "sampled", sample_budget=budget, certified_error=INF)


def _asym_interval_union(d, A: IntervalUnion, B: IntervalUnion) -> float:
    # sup over a in A of dist(a, B): the distance profile is piecewise linear
    # with local maxima only at the endpoints of A's intervals and at the
    # midpoints of B's gaps; suprema over half-open pieces go through the
    # closure (the profile is continuous).
    candidates: List[float] = []
    for iv in A.intervals:
        candidates.extend([iv.lo, iv.hi])
    bs = B.intervals
    for prev, nxt in zip(bs, bs[1:]):
        mid = 0.5 * (prev.hi + nxt.lo)
        for iv in A.intervals:
            if iv.lo <= mid <= iv.hi:
                candidates.append(mid)
                break
    return max(_abs_dist_to_union(c, B) for c in candidates)


def _asym_axis_segments(A: AxisSegments, B: AxisSegments) -> float:
    # The origin is in every axis-segments set, so the distance from t*e_k
    # to B is max(0, t - v_k) with v_k the extent of axis k in B; the sup
    # over the segment is attained at t = u_k (closure of half-open ends).
    best = 0.0
    for k, (u, _) in A.extents.items():
        best = max(best, max(0.0, u - B.extent_of(k)))
    return best


def _has_exact_point_distance(d: PseudoDistance, B: SetModel) -> bool:
    return (isinstance(B, FiniteCloud)
            or (isinstance(B, IntervalUnion) and d.name == "absolute")
            or (isinstance(B, AxisSegments) and d.name == "euclidean")
            or (isinstance(B, AffineSlab) and d.name == "euclidean"))


def _sampled_sup_of_point_distances(d: PseudoDistance, A: SetModel,
                                    B: SetModel, budget: int,
                                    rng: np.random.Generator,
                                    orientation: str) -> float:
    """sup over samples of A of d(a, B), sampling B at most once."""
    pts_a = A.sample(budget, rng)
    if _has_exact_point_distance(d, B):
        return max(point_set_distance(d, a, B, budget=budget, rng=rng,
                                      orientation=orientation).value
                   for a in pts_a)
    pts_b = np.atleast_2d(np.asarray(B.sample(budget, rng), dtype=float))
    pa = np.atleast_2d(np.asarray(pts_a, dtype=float))
    if d.name == "euclidean":
        from scipy.spatial.distance import cdist
        D = cdist(pa, pts_b)
        return float(D.min(axis=1).max())
    best = NEG_INF
    for a in pts_a:
        if orientation == "from_point":
            v = min(eval_distance(d, a, b) for b in pts_b)
        else:
            v = min(eval_distance(d, b, a) for b in pts_b)
        best = max(best, v)
    return best


def asym_hausdorff(d: PseudoDistance, A: SetModel, B: SetModel,
                   budget: int = DEFAULT_BUDGET,
                   rng: Optional[np.random.Generator] = None,
                   orientation: str = "from_point") -> DistanceReport:
    """D_asyH(A, B) = sup { d(a, B) : a in A }."""
    if isinstance(A, FiniteCloud):
        reports = [point_set_distance(d, a, B, budget=budget, rng=rng,
                                      orientation=orientation) for a in A.points]
        value = max(r.value for r in reports) if len(reports) else NEG_INF
        if all(r.mode == "exact" for r in reports):
            return DistanceReport(value, "exact")
        return DistanceReport(value, "sampled", sample_budget=budget, certified_error=INF)

    if isinstance(A, IntervalUnion) and isinstance(B, IntervalUnion) and d.name == "absolute":
        return DistanceReport(_asym_interval_union(d, A, B), "exact")

    if isinstance(A, AxisSegments) and isinstance(B, AxisSegments) and d.name == "euclidean":
        return DistanceReport(_asym_axis_segments(A, B), "exact")

    if (isinstance(A, AffineSlab) and isinstance(B, AffineSlab)
            and d.name == "euclidean" and _slabs_parallel(A, B)):
        return DistanceReport(_slab_offset_distance(A, B), "exact")

    rng = rng if rng is not None else np.random.default_rng(0)
    value = _sampled_sup_of_point_distances(d, A, B, budget, rng, orientation)
    return DistanceReport(value, "sampled", sample_budget=budget, certified_error=INF)


def hausdorff(d: PseudoDistance, A: SetModel, B: SetModel,
              budget: int = DEFAULT_BUDGET,
              rng: Optional[np.random.Generator] = None) -> DistanceReport:
    """D_H(A, B) = max(D_asyH(A, B), D_asyH(B, A))."""
    r1 = asym_hausdorff(d, A, B, budget=budget, rng=rng)
    r2 = asym_hausdorff(d, B, A, budget=budget, rng=rng)
    value = max(r1.value, r2.value)
    if r1.mode == "exact" and r2.mode == "exact":
        return DistanceReport(value, "exact")
    return DistanceReport(value, "sampled", sample_budget=budget, certified_error=INF)


def ball_around_set(d: PseudoDistance, A: SetModel, r: float, probe,
                    budget: int = DEFAULT_BUDGET,
                    rng: Optional[np.random.Generator] = None) -> list:
    """Members of ``probe`` lying in B[A, r] = {x : d(x, A) <= r}; may be empty."""
    if r <= 0:
        raise ValueError("radius must be positive")
    pts = probe.points if isinstance(probe, FiniteCloud) else list(probe)
    return [p for p in pts
            if point_set_distance(d, p, A, budget=budget, rng=rng).value <= r]
