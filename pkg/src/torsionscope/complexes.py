"""Simplicial complexes, filtrations, and the Rips / Čech constructions."""

from __future__ import annotations

import bisect
import itertools
import math
from functools import cached_property
from typing import Any, Iterable, Iterator, Sequence

import numpy as np
from scipy.optimize import minimize
from scipy.special import logsumexp

from .metric import MetricError, MetricSpec, PointCloud, norm_rows

Simplex = tuple[int, ...]

MINIMAX_REL_SLACK = 1e-9
NEAR_BOUNDARY_REL = 1e-6


class ComplexError(ValueError):
    pass


def faces(s: Simplex) -> Iterator[Simplex]:
    """Codimension-one faces, the i-th obtained by deleting vertex i."""
    for i in range(len(s)):
        yield s[:i] + s[i + 1 :]


class SimplicialComplex:
    """Finite abstract simplicial complex on vertices ``0..vertex_count-1``.

    Simplices are strictly increasing vertex tuples.  Within each dimension
    they are kept in lexicographic order, which fixes every boundary matrix.
    """

    def __init__(
        self,
        vertex_count: int,
        simplices: Iterable[Sequence[int]],
        *,
        check: bool = True,
        diagnostics: Sequence[dict] = (),
    ) -> None:
        groups: dict[int, set[Simplex]] = {}
        for s in simplices:
            t = tuple(int(v) for v in s)
            if not t:
                continue
            groups.setdefault(len(t) - 1, set()).add(t)
        top = max(groups, default=-1)
        self.vertex_count = int(vertex_count)
        self._by_dim: tuple[tuple[Simplex, ...], ...] = tuple(
            tuple(sorted(groups.get(k, ()))) for k in range(top + 1)
        )
        self.diagnostics = tuple(diagnostics)
        if check:
            self._validate()

    def _validate(self) -> None:
        present = self.simplex_set
        for k, level in enumerate(self._by_dim):
            for s in level:
                if any(a >= b for a, b in zip(s, s[1:])):
                    raise ComplexError(f"simplex {s} is not strictly increasing")
                if s[0] < 0 or s[-1] >= self.vertex_count:
                    raise ComplexError(f"simplex {s} has a vertex out of range")
                if k and any(f not in present for f in faces(s)):
                    raise ComplexError(f"simplex {s} is missing a face")

    @property
    def dim(self) -> int:
        return len(self._by_dim) - 1

    def simplices(self, k: int) -> tuple[Simplex, ...]:
        if 0 <= k < len(self._by_dim):
            return self._by_dim[k]
        return ()

    def count(self, k: int) -> int:
        return len(self.simplices(k))

    @property
    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(level) for level in self._by_dim)

    @property
    def euler_characteristic(self) -> int:
        return sum((-1) ** k * n for k, n in enumerate(self.f_vector))

    @cached_property
    def simplex_set(self) -> frozenset[Simplex]:
        return frozenset(itertools.chain.from_iterable(self._by_dim))

    @cached_property
    def _index(self) -> dict[Simplex, int]:
        return {s: i for level in self._by_dim for i, s in enumerate(level)}

    def index(self, s: Simplex) -> int:
        """Position of ``s`` within its dimension (lexicographic)."""
        return self._index[s]

    @cached_property
    def adjacency(self) -> tuple[frozenset[int], ...]:
        adj: list[set[int]] = [set() for _ in range(self.vertex_count)]
        for a, b in self.simplices(1):
            adj[a].add(b)
            adj[b].add(a)
        return tuple(frozenset(x) for x in adj)

    def __iter__(self) -> Iterator[Simplex]:
        return itertools.chain.from_iterable(self._by_dim)

    def __len__(self) -> int:
        return sum(self.f_vector)

    def __contains__(self, s: object) -> bool:
        return tuple(s) in self.simplex_set  # type: ignore[arg-type]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self.vertex_count == other.vertex_count and self._by_dim == other._by_dim

    def __hash__(self) -> int:
        return hash((self.vertex_count, self._by_dim))

    def __repr__(self) -> str:
        return f"SimplicialComplex(vertex_count={self.vertex_count}, f_vector={self.f_vector})"

    def issubset(self, other: SimplicialComplex) -> bool:
        return self.simplex_set <= other.simplex_set

    def skeleton(self, k: int) -> SimplicialComplex:
        return SimplicialComplex(
            self.vertex_count, itertools.chain.from_iterable(self._by_dim[: k + 1]), check=False
        )

    def maximal_simplices(self) -> list[Simplex]:
        covered: set[Simplex] = set()
        for level in self._by_dim[1:]:
            for s in level:
                covered.update(faces(s))
        return [s for s in self if s not in covered]

    def to_json(self) -> dict[str, Any]:
        return {
            "vertex_count": self.vertex_count,
            "maximal_simplices": [list(s) for s in self.maximal_simplices()],
        }

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> SimplicialComplex:
        return close_under_faces(obj["maximal_simplices"], obj.get("vertex_count"))


def close_under_faces(
    simplices: Iterable[Sequence[int]], vertex_count: int | None = None
) -> SimplicialComplex:
    """Smallest complex containing every listed simplex."""
    found: set[Simplex] = set()
    for s in simplices:
        t = tuple(sorted(set(int(v) for v in s)))
        if not t or t in found:
            continue
        for r in range(1, len(t) + 1):
            found.update(itertools.combinations(t, r))
    if vertex_count is None:
        vertex_count = 1 + max((s[-1] for s in found), default=-1)
    return SimplicialComplex(vertex_count, found)


class Filtration:
    """Scale-indexed nested family of complexes.

    ``birth[s]`` is the smallest listed scale at which ``s`` is present;
    ``flavor`` records how it was built (``"rips"``, ``"cech"`` or ``None``).
    """

    def __init__(
        self,
        complex: SimplicialComplex,
        birth: dict[Simplex, float],
        scales: Sequence[float],
        flavor: str | None = None,
    ) -> None:
        scales = tuple(float(s) for s in scales)
        if not scales:
            raise ComplexError("a filtration needs at least one scale")
        if any(a >= b for a, b in zip(scales, scales[1:])):
            raise ComplexError("scales must be strictly increasing")
        if set(birth) != complex.simplex_set:
            raise ComplexError("births must be given for exactly the simplices of the complex")
        for s, b in birth.items():
            if b not in scales:
                raise ComplexError(f"birth {b} of {s} is not a listed scale")
            if len(s) > 1 and any(birth[f] > b for f in faces(s)):
                raise ComplexError(f"simplex {s} is born before one of its faces")
        self.complex = complex
        self.birth = dict(birth)
        self.scales = scales
        self.flavor = flavor

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Filtration):
            return NotImplemented
        return (
            self.complex == other.complex
            and self.birth == other.birth
            and self.scales == other.scales
            and self.flavor == other.flavor
        )

    def __repr__(self) -> str:
        return f"Filtration({self.complex!r}, stages={len(self.scales)}, flavor={self.flavor!r})"

    def stage(self, eps: float) -> SimplicialComplex:
        return SimplicialComplex(
            self.complex.vertex_count,
            (s for s in self.complex if self.birth[s] <= eps),
            check=False,
        )

    def stages(self) -> Iterator[tuple[float, SimplicialComplex]]:
        for eps in self.scales:
            yield eps, self.stage(eps)

    def order(self) -> list[Simplex]:
        """Total order used by reduction: birth, then dimension, then lexicographic."""
        return sorted(self.complex, key=lambda s: (self.birth[s], len(s), s))

    def to_json(self) -> dict[str, Any]:
        out = self.complex.to_json()
        out["scales"] = list(self.scales)
        out["flavor"] = self.flavor
        out["births"] = [[*s, self.birth[s]] for s in self.complex]
        return out

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> Filtration:
        birth: dict[Simplex, float] = {}
        for row in obj["births"]:
            if len(row) == 2 and isinstance(row[0], list):
                simplex, scale = row
            else:
                simplex, scale = row[:-1], row[-1]
            birth[tuple(int(v) for v in simplex)] = float(scale)
        cpx = SimplicialComplex(obj["vertex_count"], birth)
        scales = obj.get("scales") or sorted(set(birth.values()))
        return cls(cpx, birth, scales, obj.get("flavor"))


def simplexwise_filtration(complex: SimplicialComplex) -> Filtration:
    """One simplex per stage, in (dimension, lexicographic) order; scales 0, 1, 2, ..."""
    order = list(complex)
    birth = {s: float(i) for i, s in enumerate(order)}
    return Filtration(complex, birth, [float(i) for i in range(len(order))], None)


# --------------------------------------------------------------------------
# Rips


def _clique_expand(
    n: int, higher: list[set[int]], weight: dict[tuple[int, int], float], base: float, max_dim: int
) -> dict[Simplex, float]:
    out: dict[Simplex, float] = {}

    def extend(simplex: Simplex, value: float, cands: set[int]) -> None:
        for v in sorted(cands):
            val = value
            for u in simplex:
                val = max(val, weight[u, v])
            s = simplex + (v,)
            out[s] = val
            if len(s) <= max_dim:
                extend(s, val, cands & higher[v])

    for v in range(n):
        out[(v,)] = base
        if max_dim >= 1:
            extend((v,), base, higher[v])
    return out


def _rips_values(
    cloud: PointCloud, threshold: float, max_dim: int | None
) -> dict[Simplex, float]:
    n = len(cloud)
    if max_dim is None:
        max_dim = n - 1
    if max_dim < 0:
        raise ComplexError("max_dim must be >= 0")
    D = cloud.distance_matrix()
    W = np.maximum(D, D.T)
    higher: list[set[int]] = [set() for _ in range(n)]
    weight: dict[tuple[int, int], float] = {}
    for i in range(n):
        for j in range(i + 1, n):
            if W[i, j] <= threshold:
                higher[i].add(j)
                weight[i, j] = float(W[i, j])
    return _clique_expand(n, higher, weight, 0.0, max_dim)


def build_rips(cloud: PointCloud, eps: float, max_dim: int | None = None) -> SimplicialComplex:
    """Rips complex: a simplex whenever every ordered pair is within ``eps``."""
    if not eps >= 0:
        raise ComplexError("eps must be >= 0")
    values = _rips_values(cloud, eps, max_dim)
    return SimplicialComplex(len(cloud), values, check=False)


# --------------------------------------------------------------------------
# Čech: exact minimum enclosing ball (Euclidean) and convex minimax (Minkowski)


def _circumball(R: np.ndarray) -> tuple[np.ndarray, float]:
    p0 = R[0]
    if len(R) == 1:
        return p0.copy(), 0.0
    A = R[1:] - p0
    G = A @ A.T
    rhs = 0.5 * np.einsum("ij,ij->i", A, A)
    lam = np.linalg.lstsq(G, rhs, rcond=None)[0]
    c = p0 + A.T @ lam
    return c, float(np.max(np.linalg.norm(R - c, axis=1)))


def _inside(p: np.ndarray, c: np.ndarray, r: float) -> bool:
    return float(np.linalg.norm(p - c)) <= r * (1 + 1e-12) + 1e-300


def minimum_enclosing_ball(
    points: np.ndarray, boundary: Sequence[np.ndarray] = ()
) -> tuple[np.ndarray, float]:
    """Welzl's algorithm; returns ``(center, radius)``.

    Points in ``boundary`` are forced onto the sphere; with a single such
    point this is the smallest ball through it enclosing ``points``.
    """
    P = np.asarray(points, dtype=float)
    if P.ndim != 2 or (len(P) == 0 and not len(boundary)):
        raise ComplexError("need a nonempty (k, n) array of points")
    n = P.shape[1]

    def welzl(k: int, R: list[np.ndarray]) -> tuple[np.ndarray | None, float]:
        if k == 0 or len(R) == n + 1:
            if not R:
                return None, -1.0
            return _circumball(np.array(R))
        c, r = welzl(k - 1, R)
        if c is not None and _inside(P[k - 1], c, r):
            return c, r
        return welzl(k - 1, R + [P[k - 1]])

    c, r = welzl(len(P), [np.asarray(b, dtype=float) for b in boundary])
    assert c is not None
    return c, r


def _norm_grad(metric: MetricSpec, V: np.ndarray, F: np.ndarray) -> np.ndarray:
    safe = np.where(F > 0, F, 1.0)[:, None]
    if metric.kind == "lq":
        q = metric.q
        G = np.sign(V) * (np.abs(V) / safe) ** (q - 1)
    else:
        E = np.linalg.norm(V, axis=1)
        G = V / np.where(E > 0, E, 1.0)[:, None]
        if metric.kind == "randers":
            G = G + np.asarray(metric.b)
    G[F <= 0] = 0.0
    return G


def minimax_radius(
    metric: MetricSpec, points: np.ndarray, max_iter: int = 10_000
) -> tuple[float, np.ndarray]:
    """``min_y max_i F(y - p_i)`` for a Minkowski norm ``F``.

    Smoothed by log-sum-exp with a decreasing temperature, then polished by
    normalized subgradient steps on the true maximum.
    """
    P = np.asarray(points, dtype=float)
    if len(P) == 1:
        return 0.0, P[0].copy()

    def fmax(y: np.ndarray) -> float:
        return float(np.max(norm_rows(metric, y - P)))

    y = P.mean(axis=0)
    scale = max(fmax(y), 1e-300)
    temp = 0.1 * scale
    iters = 0
    while temp > 1e-13 * scale and iters < max_iter:
        t = temp

        def obj(z: np.ndarray) -> tuple[float, np.ndarray]:
            V = z - P
            F = norm_rows(metric, V)
            w = np.exp(F / t - np.max(F / t))
            w /= w.sum()
            val = t * logsumexp(F / t)
            return float(val), w @ _norm_grad(metric, V, F)

        res = minimize(obj, y, jac=True, method="L-BFGS-B", options={"maxiter": 500, "gtol": 1e-15, "ftol": 1e-16})
        iters += int(res.nit) + 1
        moved = float(np.linalg.norm(res.x - y))
        y = res.x
        temp *= 0.1
        if moved < 1e-12 * max(1.0, scale) and temp < 1e-9 * scale:
            break

    best, best_y = fmax(y), y.copy()
    step = 1e-3 * best
    while step > 1e-15 * scale and iters < max_iter:
        iters += 1
        V = y - P
        F = norm_rows(metric, V)
        active = F >= F.max() * (1 - 1e-12)
        g = _norm_grad(metric, V[active], F[active]).mean(axis=0)
        gn = float(np.linalg.norm(g))
        if gn == 0:
            break
        cand = y - step * g / gn
        val = fmax(cand)
        if val < best:
            best, best_y, y = val, cand.copy(), cand
        else:
            step *= 0.5
    return best, best_y


class _CechOracle:
    """Per-simplex filtration value for Čech; ``value <= eps`` decides membership."""

    def __init__(self, cloud: PointCloud, method: str) -> None:
        if not cloud.metric.is_coordinate:
            raise MetricError(f"Čech complexes need a coordinate metric, got {cloud.metric.kind}")
        if method == "auto":
            method = "meb" if cloud.metric.kind == "euclidean" else "minimax"
        if method == "meb" and cloud.metric.kind != "euclidean":
            raise ComplexError("minimum enclosing ball decides only the Euclidean case")
        if method not in ("meb", "minimax"):
            raise ComplexError(f"unknown Čech method {method!r}")
        self.cloud = cloud
        self.method = method
        self.slack = 1.0 if method == "meb" else 1.0 + MINIMAX_REL_SLACK
        self._balls: dict[Simplex, tuple[np.ndarray, float]] = {}

    def value(self, s: Simplex) -> float:
        if len(s) == 1:
            return 0.0
        P = self.cloud.points
        if self.method == "minimax":
            return minimax_radius(self.cloud.metric, P[list(s)])[0]
        # the ball of the parent face is reused when the new vertex already lies in it
        parent, v = s[:-1], s[-1]
        ball = self._balls.get(parent) if len(parent) > 1 else (P[parent[0]], 0.0)
        if ball is not None and _inside(P[v], *ball):
            self._balls[s] = ball
        elif ball is not None:
            self._balls[s] = minimum_enclosing_ball(P[list(parent)], [P[v]])
        else:
            self._balls[s] = minimum_enclosing_ball(P[list(s)])
        return self._balls[s][1]

    def admits(self, value: float, eps: float) -> bool:
        return value <= eps * self.slack

    def near(self, value: float, eps: float) -> bool:
        return self.method == "minimax" and abs(value - eps) <= NEAR_BOUNDARY_REL * eps


def _cech_values(
    cloud: PointCloud, eps_max: float, max_dim: int | None, method: str
) -> tuple[dict[Simplex, float], list[dict], _CechOracle]:
    oracle = _CechOracle(cloud, method)
    n = len(cloud)
    if max_dim is None:
        max_dim = n - 1
    values: dict[Simplex, float] = {(v,): 0.0 for v in range(n)}
    diagnostics: list[dict] = []
    level = [(v,) for v in range(n)]
    higher: list[set[int]] = [set() for _ in range(n)]
    for k in range(1, max_dim + 1):
        nxt = []
        for s in level:
            cands = set(range(s[-1] + 1, n)) if k == 1 else set.intersection(*(higher[u] for u in s))
            for v in sorted(c for c in cands if c > s[-1]):
                t = s + (v,)
                if k > 1 and any(f not in values for f in faces(t)):
                    continue
                val = oracle.value(t)
                if oracle.near(val, eps_max):
                    diagnostics.append({"simplex": list(t), "value": val, "eps": eps_max})
                if oracle.admits(val, eps_max):
                    values[t] = val
                    nxt.append(t)
        if k == 1:
            for a, b in nxt:
                higher[a].add(b)
                higher[b].add(a)
        if not nxt:
            break
        level = nxt
    return values, diagnostics, oracle


def build_cech(
    cloud: PointCloud, eps: float, max_dim: int | None = None, method: str = "auto"
) -> SimplicialComplex:
    """Čech complex of the balls ``{y : F(y - p) <= eps}``."""
    if not eps >= 0:
        raise ComplexError("eps must be >= 0")
    values, diag, _ = _cech_values(cloud, eps, max_dim, method)
    return SimplicialComplex(len(cloud), values, check=False, diagnostics=diag)


def build_filtration(
    cloud: PointCloud,
    scales: Sequence[float],
    max_dim: int | None = None,
    flavor: str = "rips",
    method: str = "auto",
) -> Filtration:
    """Filtration whose stage at each listed scale equals the direct build there."""
    scales = [float(s) for s in scales]
    if not scales:
        raise ComplexError("scales must be nonempty")
    if any(a >= b for a, b in zip(scales, scales[1:])):
        raise ComplexError("scales must be sorted ascending without repeats")
    if scales[0] < 0:
        raise ComplexError("scales must be >= 0")
    top = scales[-1]
    if flavor == "rips":
        values = _rips_values(cloud, top, max_dim)
        slack = 1.0
    elif flavor == "cech":
        values, _, oracle = _cech_values(cloud, top, max_dim, method)
        slack = oracle.slack
    else:
        raise ComplexError(f"unknown flavor {flavor!r}")
    cpx = SimplicialComplex(len(cloud), values, check=False)
    thresholds = [s * slack for s in scales]
    birth: dict[Simplex, float] = {}
    for s in cpx:
        b = scales[bisect.bisect_left(thresholds, values[s])]
        if len(s) > 1:
            b = max(b, max(birth[f] for f in faces(s)))
        birth[s] = b
    return Filtration(cpx, birth, scales, flavor)


def stage_from_values(values: dict[Simplex, float], n: int, eps: float) -> SimplicialComplex:
    return SimplicialComplex(n, (s for s, v in values.items() if v <= eps), check=False)


def brute_force_meb_radius(points: np.ndarray) -> float:
    """Smallest circumball over all support subsets that contains every point."""
    P = np.asarray(points, dtype=float)
    n = P.shape[1]
    best = math.inf
    for r in range(1, min(len(P), n + 1) + 1):
        for T in itertools.combinations(range(len(P)), r):
            c, rad = _circumball(P[list(T)])
            if np.all(np.linalg.norm(P - c, axis=1) <= rad * (1 + 1e-9) + 1e-12):
                best = min(best, rad)
    return best
