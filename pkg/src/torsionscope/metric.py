"""Metric specifications and distance evaluation.

Coordinate metrics (``euclidean``, ``lq``, ``randers``) are Minkowski norms
evaluated on the displacement ``y - x`` from the base point, so distances may
be asymmetric.  Quotient metrics (circle, projective plane, Klein bottle) are
computed by minimizing over the finitely many relevant deck translates.
``distance_table`` carries an explicit, possibly asymmetric, matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

COORDINATE_KINDS = ("euclidean", "lq", "randers")
QUOTIENT_KINDS = ("circle_geodesic", "rp2_quotient", "klein_quotient")
KINDS = COORDINATE_KINDS + QUOTIENT_KINDS + ("distance_table",)


class MetricError(ValueError):
    """Raised for malformed metric specifications or point clouds."""


@dataclass(frozen=True)
class MetricSpec:
    kind: str
    q: float | None = None
    b: tuple[float, ...] | None = None
    circumference: float | None = None
    table: tuple[tuple[float, ...], ...] | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise MetricError(f"unknown metric kind {self.kind!r}")
        if self.kind == "lq":
            if self.q is None or not self.q >= 1:
                raise MetricError("lq metric needs q >= 1")
        elif self.kind == "randers":
            if self.b is None:
                raise MetricError("randers metric needs a drift vector b")
            object.__setattr__(self, "b", tuple(float(x) for x in self.b))
            if not math.hypot(*self.b) < 1:
                raise MetricError("randers drift must satisfy |b| < 1")
        elif self.kind == "circle_geodesic":
            if self.circumference is None or not self.circumference > 0:
                raise MetricError("circle_geodesic needs circumference > 0")
        elif self.kind == "distance_table":
            if self.table is None:
                raise MetricError("distance_table metric needs a table")
            tab = tuple(tuple(float(x) for x in row) for row in self.table)
            n = len(tab)
            for i, row in enumerate(tab):
                if len(row) != n:
                    raise MetricError("distance table must be square")
                if row[i] != 0:
                    raise MetricError("distance table must have zero diagonal")
                if any(not x >= 0 for x in row):
                    raise MetricError("distance table entries must be >= 0")
            object.__setattr__(self, "table", tab)

    @property
    def is_coordinate(self) -> bool:
        return self.kind in COORDINATE_KINDS

    @property
    def is_symmetric(self) -> bool:
        if self.kind == "randers":
            return not any(self.b)
        if self.kind == "distance_table":
            t = np.asarray(self.table)
            return bool(np.array_equal(t, t.T))
        return True

    @classmethod
    def euclidean(cls) -> MetricSpec:
        return cls("euclidean")

    @classmethod
    def lq_norm(cls, q: float) -> MetricSpec:
        return cls("lq", q=float(q))

    @classmethod
    def randers(cls, b: Sequence[float]) -> MetricSpec:
        return cls("randers", b=tuple(b))

    @classmethod
    def circle(cls, circumference: float = 1.0) -> MetricSpec:
        return cls("circle_geodesic", circumference=float(circumference))

    @classmethod
    def distance_matrix(cls, table: Sequence[Sequence[float]]) -> MetricSpec:
        return cls("distance_table", table=tuple(tuple(r) for r in table))

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"kind": self.kind}
        if self.q is not None:
            out["q"] = self.q
        if self.b is not None:
            out["b"] = list(self.b)
        if self.circumference is not None:
            out["circumference"] = self.circumference
        if self.table is not None:
            out["table"] = [list(r) for r in self.table]
        return out

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> MetricSpec:
        try:
            kind = obj["kind"]
        except (KeyError, TypeError):
            raise MetricError("metric object needs a 'kind'") from None
        return cls(
            kind,
            q=obj.get("q"),
            b=tuple(obj["b"]) if obj.get("b") is not None else None,
            circumference=obj.get("circumference"),
            table=tuple(tuple(r) for r in obj["table"]) if obj.get("table") is not None else None,
        )


def eval_norm(metric: MetricSpec, base: Sequence[float] | None, v: Sequence[float]) -> float:
    """Length of the tangent vector ``v`` at ``base``.

    The coordinate metrics are translation invariant, so ``base`` only
    participates in the dimension check.
    """
    if not metric.is_coordinate:
        raise MetricError(f"eval_norm needs a coordinate metric, got {metric.kind}")
    v = np.asarray(v, dtype=float)
    if base is not None and np.shape(base) != v.shape:
        raise MetricError("base point and vector dimensions differ")
    if metric.kind == "randers" and len(metric.b) != v.size:
        raise MetricError("randers drift and vector dimensions differ")
    return float(norm_rows(metric, v.reshape(1, -1))[0])


def norm_rows(metric: MetricSpec, V: np.ndarray) -> np.ndarray:
    """Vectorized :func:`eval_norm` over the rows of ``V``.

    Rows are scaled by their largest entry first (F(v) = s F(v/s)), so tiny
    or huge vectors neither underflow to a zero length nor overflow.
    """
    V = np.asarray(V, dtype=float)
    if V.shape[-1] == 0:
        return np.zeros(V.shape[:-1])
    s = np.max(np.abs(V), axis=-1)
    W = V / np.where(s > 0, s, 1.0)[..., None]
    if metric.kind == "euclidean":
        out = np.linalg.norm(W, axis=-1)
    elif metric.kind == "lq":
        out = np.linalg.norm(W, ord=metric.q, axis=-1)
    elif metric.kind == "randers":
        out = np.linalg.norm(W, axis=-1) + W @ np.asarray(metric.b)
    else:
        raise MetricError(f"no norm for metric kind {metric.kind}")
    return s * out


def _circle_distance(a: float, b: float, circumference: float) -> float:
    frac = ((b - a) / (2 * math.pi)) % 1.0
    return circumference * min(frac, 1.0 - frac)


def _rp2_distance(x: np.ndarray, y: np.ndarray) -> float:
    # min of the angles to y and -y; both share |x cross y|
    return math.atan2(float(np.linalg.norm(np.cross(x, y))), abs(float(x @ y)))


def klein_translates(q: Sequence[float]) -> list[tuple[float, float]]:
    """Images of ``q`` under the deck transformations one ring around the square."""
    x, y = float(q[0]), float(q[1])
    out = []
    for n in (-1, 0, 1):
        yy = 1.0 - y if n % 2 else y
        for m in (-1, 0, 1):
            out.append((x + n, yy + m))
    return out


def _klein_distance(p: Sequence[float], q: Sequence[float]) -> float:
    px, py = float(p[0]), float(p[1])
    return min(math.hypot(px - qx, py - qy) for qx, qy in klein_translates(q))


@dataclass(frozen=True)
class PointCloud:
    """Finite sample with a metric.

    ``points`` is an ``(N, n)`` float array for coordinate and quotient
    metrics; for ``circle_geodesic`` each point is a single angle in radians.
    For ``distance_table`` points are the indices ``0..N-1``.
    """

    points: np.ndarray
    metric: MetricSpec = field(default_factory=MetricSpec.euclidean)

    def __post_init__(self) -> None:
        if self.metric.kind == "distance_table":
            n = len(self.metric.table)
            pts = np.arange(n, dtype=float).reshape(n, 1)
        else:
            pts = np.asarray(self.points, dtype=float)
            if pts.ndim == 1:
                pts = pts.reshape(-1, 1)
            if pts.ndim != 2:
                raise MetricError("points must be a list of coordinate vectors")
        if len(pts) < 1:
            raise MetricError("point cloud must contain at least one point")
        if self.metric.kind == "randers" and pts.shape[1] != len(self.metric.b):
            raise MetricError("randers drift dimension differs from the ambient dimension")
        if self.metric.kind == "rp2_quotient" and pts.shape[1] != 3:
            raise MetricError("rp2_quotient points live on the unit sphere in R^3")
        if self.metric.kind == "klein_quotient" and pts.shape[1] != 2:
            raise MetricError("klein_quotient points live in the unit square")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return len(self.points)

    @property
    def dimension(self) -> int:
        return self.points.shape[1]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PointCloud):
            return NotImplemented
        return self.metric == other.metric and np.array_equal(self.points, other.points)

    def __hash__(self) -> int:
        return hash((self.metric, self.points.tobytes()))

    def distance(self, i: int, j: int) -> float:
        return distance(self, i, j)

    def distance_matrix(self) -> np.ndarray:
        """``D[i, j] = distance(i, j)``; not symmetric in general."""
        if self.metric.kind == "distance_table":
            return np.array(self.metric.table, dtype=float)
        D = cross_distances(self.metric, self.points, self.points)
        np.fill_diagonal(D, 0.0)
        return D

    def to_json(self) -> dict[str, Any]:
        if self.metric.kind == "distance_table":
            pts: list = list(range(len(self)))
        else:
            pts = self.points.tolist()
        return {"points": pts, "metric": self.metric.to_json()}

    @classmethod
    def from_json(cls, obj: Any) -> PointCloud:
        if isinstance(obj, list):
            # bare distance matrix
            metric = MetricSpec.distance_matrix(obj)
            return cls(np.zeros((len(obj), 1)), metric)
        metric = MetricSpec.from_json(obj.get("metric", {"kind": "euclidean"}))
        if metric.kind == "distance_table":
            return cls(np.zeros((len(metric.table), 1)), metric)
        return cls(np.asarray(obj["points"], dtype=float), metric)


def cross_distances(metric: MetricSpec, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """``D[i, j]`` = distance from ``A[i]`` to ``B[j]`` for point-based metrics."""
    A, B = np.asarray(A, dtype=float), np.asarray(B, dtype=float)
    if metric.is_coordinate:
        diff = B[None, :, :] - A[:, None, :]
        return norm_rows(metric, diff.reshape(-1, A.shape[1])).reshape(len(A), len(B))
    if metric.kind == "circle_geodesic":
        frac = ((B[None, :, 0] - A[:, None, 0]) / (2 * math.pi)) % 1.0
        return metric.circumference * np.minimum(frac, 1.0 - frac)
    if metric.kind == "rp2_quotient":
        cross = np.linalg.norm(np.cross(A[:, None, :], B[None, :, :]), axis=-1)
        return np.arctan2(cross, np.abs(A @ B.T))
    if metric.kind == "klein_quotient":
        best = np.full((len(A), len(B)), np.inf)
        for n in (-1, 0, 1):
            by = 1.0 - B[:, 1] if n % 2 else B[:, 1]
            for m in (-1, 0, 1):
                dx = B[None, :, 0] + n - A[:, None, 0]
                dy = by[None, :] + m - A[:, None, 1]
                best = np.minimum(best, np.hypot(dx, dy))
        return best
    raise MetricError(f"cross distances need point coordinates, not {metric.kind}")


def distance(cloud: PointCloud, i: int, j: int) -> float:
    """Distance from point ``i`` to point ``j``, measured in the norm at ``i``."""
    n = len(cloud)
    if not (0 <= i < n and 0 <= j < n):
        raise IndexError(f"vertex index out of range for {n} points")
    if i == j:
        return 0.0
    m = cloud.metric
    if m.kind == "distance_table":
        return m.table[i][j]
    x, y = cloud.points[i], cloud.points[j]
    if m.is_coordinate:
        return eval_norm(m, x, y - x)
    if m.kind == "circle_geodesic":
        return _circle_distance(x[0], y[0], m.circumference)
    if m.kind == "rp2_quotient":
        return _rp2_distance(x, y)
    return _klein_distance(x, y)


@dataclass
class AxiomReport:
    metric: MetricSpec
    samples: int
    violations: list[dict[str, Any]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict[str, Any]:
        return {
            "metric": self.metric.to_json(),
            "samples": self.samples,
            "ok": self.ok,
            "violations": self.violations,
        }


def check_norm_axioms(
    metric: MetricSpec, sample_count: int = 200, dim: int | None = None, seed: int = 0
) -> AxiomReport:
    """Sample homogeneity, positivity, triangle inequality and unit-ball convexity."""
    if not metric.is_coordinate:
        raise MetricError(f"axiom check needs a coordinate metric, got {metric.kind}")
    if dim is None:
        dim = len(metric.b) if metric.kind == "randers" else 2
    rng = np.random.default_rng(seed)
    report = AxiomReport(metric, sample_count)
    bad = report.violations
    for _ in range(sample_count):
        base = rng.normal(size=dim)
        u, v = rng.normal(size=dim), rng.normal(size=dim)
        fu, fv = eval_norm(metric, base, u), eval_norm(metric, base, v)
        if not fu > 0:
            bad.append({"axiom": "positivity", "v": u.tolist(), "value": fu})
        for lam in (0.5, 2.0, 7.0):
            flu = eval_norm(metric, base, lam * u)
            if abs(flu - lam * fu) > 1e-12 * lam * fu:
                bad.append({"axiom": "homogeneity", "v": u.tolist(), "lambda": lam})
        if eval_norm(metric, base, u + v) > fu + fv + 1e-12:
            bad.append({"axiom": "triangle", "u": u.tolist(), "v": v.tolist()})
        if fu > 0 and fv > 0:
            mid = 0.5 * (u / fu + v / fv)
            if eval_norm(metric, base, mid) > 1 + 1e-12:
                bad.append({"axiom": "convexity", "u": u.tolist(), "v": v.tolist()})
    if eval_norm(metric, np.zeros(dim), np.zeros(dim)) != 0:
        bad.append({"axiom": "zero", "v": [0.0] * dim})
    return report
