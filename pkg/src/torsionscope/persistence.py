"""Persistent homology over a field by standard column reduction."""

from __future__ import annotations

import dataclasses
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable

from . import _kernels
from .complexes import Filtration, Simplex
from .homology import FieldSpec

Interval = tuple[int, float, float]


@dataclass(frozen=True)
class Barcode:
    """Multiset of ``(k, birth, death)`` intervals, death possibly ``inf``.

    ``zero_length`` keeps the pairs with ``birth == death``; they are not part
    of the barcode proper and are ignored by equality.
    """

    intervals: tuple[Interval, ...]
    field: FieldSpec | None = None
    zero_length: tuple[Interval, ...] = dataclasses.field(default=(), compare=False)

    def __post_init__(self) -> None:
        ivs = tuple(sorted((int(k), float(b), float(d)) for k, b, d in self.intervals))
        for k, b, d in ivs:
            if k < 0 or not b <= d:
                raise ValueError(f"invalid interval {(k, b, d)}")
        object.__setattr__(self, "intervals", ivs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Barcode):
            return NotImplemented
        return self.intervals == other.intervals

    def __hash__(self) -> int:
        return hash(self.intervals)

    def dimension(self, k: int) -> list[tuple[float, float]]:
        return [(b, d) for kk, b, d in self.intervals if kk == k]

    def betti_at(self, k: int, eps: float) -> int:
        return rank_invariant(self, k, eps, eps)

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {}
        if self.field is not None:
            out["field"] = self.field.to_json()
        out["intervals"] = [
            {"k": k, "birth": b, "death": "inf" if math.isinf(d) else d} for k, b, d in self.intervals
        ]
        return out

    @classmethod
    def from_json(cls, obj: Any) -> Barcode:
        if isinstance(obj, list):
            rows, fld = obj, None
        else:
            rows = obj["intervals"]
            f = obj.get("field")
            fld = FieldSpec(f["kind"], f.get("p")) if f else None
        ivs = [
            (int(r["k"]), float(r["birth"]), math.inf if r["death"] in ("inf", None) else float(r["death"]))
            for r in rows
        ]
        return cls(tuple(ivs), fld)

    def to_text(self) -> str:
        return "".join(
            f"H{k} [{b:g}, {'inf' if math.isinf(d) else format(d, 'g')})\n" for k, b, d in self.intervals
        )


def _reduce_rational(columns: list[dict[int, int]]) -> list[int]:
    pivot_col: dict[int, int] = {}
    stored: dict[int, dict[int, Fraction]] = {}
    low = [-1] * len(columns)
    for j, raw in enumerate(columns):
        col = {r: Fraction(v) for r, v in raw.items() if v}
        while col:
            l = max(col)
            k = pivot_col.get(l)
            if k is None:
                inv = 1 / col[l]
                stored[j] = {r: v * inv for r, v in col.items()}
                pivot_col[l] = j
                low[j] = l
                break
            f = col[l]
            for r, v in stored[k].items():
                nv = col.get(r, 0) - f * v
                if nv:
                    col[r] = nv
                else:
                    del col[r]
    return low


def reduce_filtration(
    filtration: Filtration, fld: FieldSpec, max_k: int
) -> tuple[list[Simplex], list[int]]:
    """Ordered simplices (dimension <= max_k + 1) and their reduced low indices."""
    order = [s for s in filtration.order() if len(s) <= max_k + 2]
    pos = {s: i for i, s in enumerate(order)}
    indptr, indices, data = [0], [], []
    for s in order:
        if len(s) > 1:
            for i in range(len(s)):
                indices.append(pos[s[:i] + s[i + 1 :]])
                data.append(-1 if i % 2 else 1)
        indptr.append(len(indices))
    if fld.kind == "rationals":
        cols = [
            dict(zip(indices[indptr[j] : indptr[j + 1]], data[indptr[j] : indptr[j + 1]]))
            for j in range(len(order))
        ]
        low = _reduce_rational(cols)
    else:
        low = _kernels.reduce_columns(indptr, indices, data, len(order), fld.p)
    return order, list(low)


def persistent_homology(filtration: Filtration, fld: FieldSpec, max_k: int = 1) -> Barcode:
    """Barcode in dimensions ``0..max_k``.

    Simplices are processed in (birth, dimension, lexicographic) order.
    """
    if max_k < 0:
        raise ValueError("max_k must be >= 0")
    order, low = reduce_filtration(filtration, fld, max_k)
    birth = filtration.birth
    paired = set()
    ivs: list[Interval] = []
    zero: list[Interval] = []
    for j, i in enumerate(low):
        if i >= 0:
            paired.add(i)
            paired.add(j)
            k = len(order[i]) - 1
            if k > max_k:
                continue
            iv = (k, birth[order[i]], birth[order[j]])
            (zero if iv[1] == iv[2] else ivs).append(iv)
    for j, s in enumerate(order):
        if j not in paired and low[j] < 0 and len(s) - 1 <= max_k:
            ivs.append((len(s) - 1, birth[s], math.inf))
    return Barcode(tuple(ivs), fld, tuple(sorted(zero)))


def rank_invariant(barcode: Barcode, k: int, eps: float, eps2: float) -> int:
    """Number of dimension-``k`` bars containing ``[eps, eps2]`` (deaths exclusive)."""
    if eps > eps2:
        raise ValueError("rank invariant needs eps <= eps2")
    return sum(1 for kk, b, d in barcode.intervals if kk == k and b <= eps and d > eps2)


@dataclass(frozen=True)
class BarcodeDiff:
    only_a: tuple[Interval, ...]
    only_b: tuple[Interval, ...]

    @property
    def empty(self) -> bool:
        return not self.only_a and not self.only_b

    @property
    def dimensions(self) -> list[int]:
        return sorted({k for k, _, _ in self.only_a + self.only_b})

    def to_json(self) -> dict[str, Any]:
        def enc(ivs: Iterable[Interval]) -> list[dict[str, Any]]:
            return [{"k": k, "birth": b, "death": "inf" if math.isinf(d) else d} for k, b, d in ivs]

        return {
            "equal": self.empty,
            "dimensions": self.dimensions,
            "only_a": enc(self.only_a),
            "only_b": enc(self.only_b),
        }


def compare_barcodes(a: Barcode, b: Barcode) -> BarcodeDiff:
    ca, cb = Counter(a.intervals), Counter(b.intervals)
    return BarcodeDiff(tuple(sorted((ca - cb).elements())), tuple(sorted((cb - ca).elements())))
