"""Exact integer matrices and Smith normal form.

Everything here is arbitrary precision Python ``int``; there is no
fixed-width shortcut.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Any, Iterable, Sequence

MINOR_GUARD = 12


class IntegerMatrix:
    """Sparse ``rows x cols`` integer matrix, mapping ``Z^cols -> Z^rows``."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: dict[tuple[int, int], int] | None = None) -> None:
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be >= 0")
        self.rows = rows
        self.cols = cols
        clean: dict[tuple[int, int], int] = {}
        for (i, j), v in (entries or {}).items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise IndexError(f"entry ({i}, {j}) outside a {rows}x{cols} matrix")
            v = int(v)
            if v:
                clean[i, j] = v
        self.entries = clean

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[int]], cols: int | None = None) -> IntegerMatrix:
        rows = len(data)
        if cols is None:
            cols = len(data[0]) if rows else 0
        ent = {(i, j): v for i, row in enumerate(data) for j, v in enumerate(row) if v}
        return cls(rows, cols, ent)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntegerMatrix:
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> IntegerMatrix:
        return cls(n, n, {(i, i): 1 for i in range(n)})

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij: tuple[int, int]) -> int:
        return self.entries.get(ij, 0)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntegerMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __repr__(self) -> str:
        return f"IntegerMatrix({self.rows}x{self.cols}, nnz={len(self.entries)})"

    def transpose(self) -> IntegerMatrix:
        return IntegerMatrix(self.cols, self.rows, {(j, i): v for (i, j), v in self.entries.items()})

    def __matmul__(self, other: IntegerMatrix) -> IntegerMatrix:
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        by_row: dict[int, list[tuple[int, int]]] = {}
        for (k, j), v in other.entries.items():
            by_row.setdefault(k, []).append((j, v))
        acc: dict[tuple[int, int], int] = {}
        for (i, k), a in self.entries.items():
            for j, b in by_row.get(k, ()):
                acc[i, j] = acc.get((i, j), 0) + a * b
        return IntegerMatrix(self.rows, other.cols, acc)

    def column(self, j: int) -> dict[int, int]:
        return {i: v for (i, jj), v in self.entries.items() if jj == j}

    def permuted(self, row_perm: Sequence[int], col_perm: Sequence[int]) -> IntegerMatrix:
        """Entry ``(i, j)`` moves to ``(row_perm[i], col_perm[j])``."""
        return IntegerMatrix(
            self.rows, self.cols, {(row_perm[i], col_perm[j]): v for (i, j), v in self.entries.items()}
        )

    def to_json(self) -> dict[str, Any]:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "triplets": [[i, j, str(v)] for (i, j), v in sorted(self.entries.items())],
        }

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> IntegerMatrix:
        ent: dict[tuple[int, int], int] = {}
        for i, j, v in obj["triplets"]:
            if isinstance(v, float):
                raise ValueError("matrix values must be integers or decimal strings")
            ent[int(i), int(j)] = ent.get((int(i), int(j)), 0) + int(v)
        return cls(int(obj["rows"]), int(obj["cols"]), ent)


@dataclass(frozen=True)
class SNFResult:
    divisors: tuple[int, ...]
    rank: int
    U: IntegerMatrix | None = None
    V: IntegerMatrix | None = None

    @property
    def largest(self) -> int:
        """Largest elementary divisor, 1 for the zero matrix (empty product)."""
        return self.divisors[-1] if self.divisors else 1

    def diagonal(self, rows: int, cols: int) -> IntegerMatrix:
        return IntegerMatrix(rows, cols, {(i, i): d for i, d in enumerate(self.divisors)})

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"divisors": list(self.divisors), "rank": self.rank}
        if self.U is not None and self.V is not None:
            out["U"] = self.U.to_json()
            out["V"] = self.V.to_json()
        return out

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> SNFResult:
        U = IntegerMatrix.from_json(obj["U"]) if "U" in obj else None
        V = IntegerMatrix.from_json(obj["V"]) if "V" in obj else None
        return cls(tuple(int(d) for d in obj["divisors"]), int(obj["rank"]), U, V)


class _Dense:
    """Dense row-major integer matrix recording elementary operations."""

    def __init__(self, n: int) -> None:
        self.a = [[int(i == j) for j in range(n)] for i in range(n)]

    def add_row(self, target: int, source: int, q: int) -> None:
        ra, rb = self.a[target], self.a[source]
        for j, v in enumerate(rb):
            if v:
                ra[j] += q * v

    def add_col(self, target: int, source: int, q: int) -> None:
        for row in self.a:
            v = row[source]
            if v:
                row[target] += q * v


class _Work:
    """Sparse working copy: row -> {col: val} with a column -> rows index."""

    def __init__(self, A: IntegerMatrix, want: bool) -> None:
        self.rows: dict[int, dict[int, int]] = {}
        self.cols: dict[int, set[int]] = {}
        for (i, j), v in A.entries.items():
            self.rows.setdefault(i, {})[j] = v
            self.cols.setdefault(j, set()).add(i)
        self.U = _Dense(A.rows) if want else None
        self.V = _Dense(A.cols) if want else None

    def _set(self, i: int, j: int, v: int) -> None:
        row = self.rows.setdefault(i, {})
        if v:
            row[j] = v
            self.cols.setdefault(j, set()).add(i)
        else:
            row.pop(j, None)
            s = self.cols.get(j)
            if s is not None:
                s.discard(i)

    def add_row(self, target: int, source: int, q: int) -> None:
        """row[target] += q * row[source]"""
        row = self.rows.get(target, {})
        for j, v in list(self.rows[source].items()):
            self._set(target, j, row.get(j, 0) + q * v)
            row = self.rows[target]
        if self.U is not None:
            self.U.add_row(target, source, q)

    def add_col(self, target: int, source: int, q: int) -> None:
        """col[target] += q * col[source]"""
        for i in list(self.cols[source]):
            r = self.rows[i]
            self._set(i, target, r.get(target, 0) + q * r[source])
        if self.V is not None:
            self.V.add_col(target, source, q)

    def drop(self, i: int, j: int) -> None:
        for jj in self.rows.pop(i, {}):
            self.cols[jj].discard(i)
        for ii in self.cols.pop(j, set()):
            self.rows[ii].pop(j, None)

    def pick_pivot(self) -> tuple[int, int] | None:
        best = None
        best_key = None
        for i, row in self.rows.items():
            for j, v in row.items():
                key = (abs(v), (len(row) - 1) * (len(self.cols[j]) - 1))
                if best_key is None or key < best_key:
                    best, best_key = (i, j), key
                    if key == (1, 0):
                        return best
        return best


def _eliminate(w: _Work, i: int, j: int) -> tuple[int, int]:
    """Clear row ``i`` and column ``j`` around the pivot, shrinking it on remainders."""
    while True:
        piv = w.rows[i][j]
        moved = False
        for r in sorted(w.cols[j] - {i}):
            q = w.rows[r][j] // piv
            w.add_row(r, i, -q)
            if j in w.rows[r]:
                i, moved = r, True
                break
        if moved:
            continue
        piv = w.rows[i][j]
        for c in sorted(set(w.rows[i]) - {j}):
            q = w.rows[i][c] // piv
            w.add_col(c, j, -q)
            if c in w.rows[i]:
                j, moved = c, True
                break
        if not moved:
            return i, j


def _chain_fixup(divs: list[int], ops: list[tuple[int, int, int, int]]) -> None:
    """Replace pairs by (gcd, lcm) until ``divs[a] | divs[b]`` for all ``a < b``."""
    n = len(divs)
    for a in range(n):
        for b in range(a + 1, n):
            x, y = divs[a], divs[b]
            if y % x:
                g = math.gcd(x, y)
                divs[a], divs[b] = g, x // g * y
                ops.append((a, b, x, y))


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    return a, s0, t0


def smith_normal_form(A: IntegerMatrix, want_transforms: bool = False) -> SNFResult:
    """Elementary divisors of ``A`` and, optionally, unimodular ``U, V`` with ``U A V = D``."""
    w = _Work(A, want_transforms)
    pivots: list[tuple[int, int, int]] = []
    while True:
        pos = w.pick_pivot()
        if pos is None:
            break
        i, j = _eliminate(w, *pos)
        pivots.append((i, j, w.rows[i][j]))
        w.drop(i, j)

    divs = [abs(v) for _, _, v in pivots]
    fix_ops: list[tuple[int, int, int, int]] = []
    _chain_fixup(divs, fix_ops)
    if not want_transforms:
        return SNFResult(tuple(divs), len(divs))

    U, V = w.U, w.V
    assert U is not None and V is not None
    # pivot t sits at (i_t, j_t) with value v_t; move it to (t, t) with a positive sign
    r = len(pivots)
    prow = [i for i, _, _ in pivots]
    pcol = [j for _, j, _ in pivots]
    rest_r = [i for i in range(A.rows) if i not in set(prow)]
    rest_c = [j for j in range(A.cols) if j not in set(pcol)]
    Ua = [list(U.a[i]) for i in prow + rest_r]
    Va_cols = pcol + rest_c
    Va = [[row[j] for j in Va_cols] for row in V.a]
    for t, (_, _, v) in enumerate(pivots):
        if v < 0:
            Ua[t] = [-x for x in Ua[t]]
    U.a, V.a = Ua, Va
    cur = [abs(v) for _, _, v in pivots]
    for a, b, x, y in fix_ops:
        assert (cur[a], cur[b]) == (x, y)
        g, s, t = _ext_gcd(x, y)
        # diag(x, y) -> diag(g, lcm): row_a += row_b; cols via [[s, -y/g], [t, x/g]];
        # then row_b -= (t*y/g) row_a
        U.add_row(a, b, 1)
        col_a = [row[a] for row in V.a]
        col_b = [row[b] for row in V.a]
        for k, row in enumerate(V.a):
            row[a] = s * col_a[k] + t * col_b[k]
            row[b] = -(y // g) * col_a[k] + (x // g) * col_b[k]
        U.add_row(b, a, -(t * y // g))
        cur[a], cur[b] = g, x // g * y
    assert cur == divs and r == len(divs)
    return SNFResult(
        tuple(divs),
        r,
        IntegerMatrix.from_dense(U.a, A.rows),
        IntegerMatrix.from_dense(V.a, A.cols),
    )


def determinant(M: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    a = [list(map(int, row)) for row in M]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * a[-1][-1]


def _exact_rank(dense: list[list[int]]) -> int:
    """Rank by fraction-free row echelon form; kept apart from the Smith reduction."""
    a = [list(row) for row in dense]
    rank, prev = 0, 1
    cols = len(a[0]) if a else 0
    for c in range(cols):
        piv = next((r for r in range(rank, len(a)) if a[r][c]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][c]
        for r in range(rank + 1, len(a)):
            f = a[r][c]
            a[r] = [(x * p - f * y) // prev for x, y in zip(a[r], a[rank])]
        prev = p
        rank += 1
    return rank


def determinantal_divisors(A: IntegerMatrix) -> list[int]:
    """``d_i``: gcd of all ``i x i`` minors, for ``i = 1..rank``."""
    dense = A.to_dense()
    m, n = A.rows, A.cols
    if min(m, n) > MINOR_GUARD:
        raise ValueError(f"minor enumeration limited to min(rows, cols) <= {MINOR_GUARD}")
    out: list[int] = []
    # minors above the rank all vanish; enumerating them would be pointless
    for size in range(1, _exact_rank(dense) + 1):
        g = 0
        for rs in itertools.combinations(range(m), size):
            sub = [dense[r] for r in rs]
            for cs in itertools.combinations(range(n), size):
                g = math.gcd(g, determinant([[row[c] for c in cs] for row in sub]))
                if g == 1:
                    break
            if g == 1:
                break
        if g == 0:
            break
        out.append(g)
    return out


def elementary_divisors_via_minors(A: IntegerMatrix) -> list[int]:
    """``alpha_i = d_i / d_{i-1}`` from gcds of minors; the independent oracle."""
    d = [1] + determinantal_divisors(A)
    return [d[i] // d[i - 1] for i in range(1, len(d))]


def cokernel_structure(A: IntegerMatrix) -> tuple[list[int], int]:
    """``Z^rows / im(A)`` as (torsion coefficients, free rank)."""
    res = smith_normal_form(A)
    return [d for d in res.divisors if d > 1], A.rows - res.rank


def is_unimodular(M: IntegerMatrix) -> bool:
    return M.rows == M.cols and abs(determinant(M.to_dense())) == 1


def diag_matrix(values: Iterable[int], rows: int, cols: int) -> IntegerMatrix:
    return IntegerMatrix(rows, cols, {(i, i): v for i, v in enumerate(values)})
