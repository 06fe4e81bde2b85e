"""Boundary matrices, integer homology via Smith normal form, and field homology."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from . import _kernels
from .arith import check_prime
from .complexes import SimplicialComplex
from .snf import IntegerMatrix, smith_normal_form


@dataclass(frozen=True)
class FieldSpec:
    """Coefficient field: the rationals, or Z/p for a prime ``p``."""

    kind: str
    p: int | None = None

    def __post_init__(self) -> None:
        if self.kind == "rationals":
            if self.p is not None:
                raise ValueError("the rationals take no prime")
        elif self.kind == "prime_field":
            object.__setattr__(self, "p", check_prime(self.p))
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @classmethod
    def rationals(cls) -> FieldSpec:
        return cls("rationals")

    @classmethod
    def prime(cls, p: int) -> FieldSpec:
        return cls("prime_field", p)

    @classmethod
    def parse(cls, name: str, p: int | None = None) -> FieldSpec:
        if name in ("q", "Q", "rationals"):
            return cls.rationals()
        if name in ("zp", "Zp", "prime_field"):
            if p is None:
                raise ValueError("prime field needs --prime")
            return cls.prime(p)
        raise ValueError(f"unknown field {name!r}")

    def label(self) -> str:
        return "Q" if self.kind == "rationals" else f"Z{self.p}"

    def to_json(self) -> dict[str, Any]:
        return {"kind": self.kind, "p": self.p} if self.p else {"kind": self.kind}


@dataclass(frozen=True)
class HomologyGroup:
    """``Z^betti`` plus cyclic torsion summands ``Z/t`` in divisibility order."""

    betti: int
    torsion: tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        object.__setattr__(self, "torsion", tuple(int(t) for t in self.torsion))
        if self.betti < 0 or any(t < 2 for t in self.torsion):
            raise ValueError("invalid homology group")
        if any(b % a for a, b in zip(self.torsion, self.torsion[1:])):
            raise ValueError("torsion coefficients must form a divisibility chain")

    def to_json(self, k: int | None = None) -> dict[str, Any]:
        out: dict[str, Any] = {} if k is None else {"k": k}
        out["betti"] = self.betti
        out["torsion"] = list(self.torsion)
        return out

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> HomologyGroup:
        return cls(int(obj["betti"]), tuple(int(t) for t in obj["torsion"]))

    def __str__(self) -> str:
        parts = (["Z" if self.betti == 1 else f"Z^{self.betti}"] if self.betti else []) + [
            f"Z{t}" for t in self.torsion
        ]
        return " + ".join(parts) or "0"


def boundary_matrix(complex: SimplicialComplex, k: int) -> IntegerMatrix:
    """Matrix of the k-th boundary map, columns k-simplices, rows (k-1)-simplices.

    Deleting vertex ``i`` contributes ``(-1)**i``; ``k = 0`` maps to the zero group.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    cols = complex.simplices(k)
    if k == 0:
        return IntegerMatrix(0, len(cols))
    rows = complex.simplices(k - 1)
    ent: dict[tuple[int, int], int] = {}
    for j, s in enumerate(cols):
        for i in range(len(s)):
            ent[complex.index(s[:i] + s[i + 1 :]), j] = -1 if i % 2 else 1
    return IntegerMatrix(len(rows), len(cols), ent)


def boundary_csc(complex: SimplicialComplex, k: int) -> tuple[list[int], list[int], list[int], int]:
    """CSC arrays of the k-th boundary matrix, for the reduction kernels."""
    indptr, indices, data = [0], [], []
    n_rows = complex.count(k - 1) if k > 0 else 0
    if k > 0:
        for s in complex.simplices(k):
            for i in range(len(s)):
                indices.append(complex.index(s[:i] + s[i + 1 :]))
                data.append(-1 if i % 2 else 1)
            indptr.append(len(indices))
    else:
        indptr += [0] * complex.count(0)
    return indptr, indices, data, n_rows


def _snf(complex: SimplicialComplex, k: int, cache: dict | None):
    if cache is not None and k in cache:
        return cache[k]
    res = smith_normal_form(boundary_matrix(complex, k))
    if cache is not None:
        cache[k] = res
    return res


def integer_homology(complex: SimplicialComplex, k: int, cache: dict | None = None) -> HomologyGroup:
    """``H_k(complex; Z)``; pass a dict as ``cache`` to reuse Smith forms across degrees."""
    if k < 0:
        return HomologyGroup(0)
    down = _snf(complex, k, cache)
    up = _snf(complex, k + 1, cache)
    betti = complex.count(k) - down.rank - up.rank
    return HomologyGroup(betti, tuple(d for d in up.divisors if d > 1))


def integer_homology_all(complex: SimplicialComplex, max_k: int | None = None) -> dict[int, HomologyGroup]:
    if max_k is None:
        max_k = max(complex.dim, 0)
    cache: dict = {}
    return {k: integer_homology(complex, k, cache) for k in range(max_k + 1)}


def rank_mod_p(complex: SimplicialComplex, k: int, p: int) -> int:
    indptr, indices, data, n_rows = boundary_csc(complex, k)
    if not indices:
        return 0
    low = _kernels.reduce_columns(indptr, indices, data, n_rows, p)
    return sum(1 for x in low if x >= 0)


def rank_rational(complex: SimplicialComplex, k: int) -> int:
    """Rank over Q, read off the Smith form."""
    return smith_normal_form(boundary_matrix(complex, k)).rank


def rank_over(complex: SimplicialComplex, k: int, fld: FieldSpec) -> int:
    if k <= 0 or complex.count(k) == 0:
        return 0
    if fld.kind == "rationals":
        return rank_rational(complex, k)
    return rank_mod_p(complex, k, fld.p)


def field_homology(complex: SimplicialComplex, k: int, fld: FieldSpec) -> int:
    """``dim H_k(complex; field)``."""
    if k < 0:
        return 0
    return complex.count(k) - rank_over(complex, k, fld) - rank_over(complex, k + 1, fld)


def field_betti(complex: SimplicialComplex, fld: FieldSpec, max_k: int | None = None) -> tuple[int, ...]:
    if max_k is None:
        max_k = max(complex.dim, 0)
    ranks = [rank_over(complex, k, fld) for k in range(max_k + 2)]
    return tuple(complex.count(k) - ranks[k] - ranks[k + 1] for k in range(max_k + 1))


@dataclass(frozen=True)
class UCTReport:
    k: int
    p: int
    field_dim: int
    betti: int
    tor_k: int
    tor_k_minus_1: int

    @property
    def consistent(self) -> bool:
        return self.field_dim == self.betti + self.tor_k + self.tor_k_minus_1

    def to_json(self) -> dict[str, Any]:
        return {
            "k": self.k,
            "p": self.p,
            "field_dim": self.field_dim,
            "betti": self.betti,
            "tor_k": self.tor_k,
            "tor_k_minus_1": self.tor_k_minus_1,
            "consistent": self.consistent,
        }


def uct_check(complex: SimplicialComplex, k: int, p: int, cache: dict | None = None) -> UCTReport:
    """Compare ``dim H_k(Z/p)`` with ``beta_k + t_k(p) + t_{k-1}(p)``."""
    p = check_prime(p)
    cache = {} if cache is None else cache
    hk = integer_homology(complex, k, cache)
    hk1 = integer_homology(complex, k - 1, cache)
    return UCTReport(
        k,
        p,
        field_homology(complex, k, FieldSpec.prime(p)),
        hk.betti,
        sum(1 for t in hk.torsion if t % p == 0),
        sum(1 for t in hk1.torsion if t % p == 0),
    )


def rational_rank_by_elimination(M: IntegerMatrix) -> int:
    """Rank over Q by Gaussian elimination on Fractions; an independent check on the SNF rank."""
    rows = [[Fraction(v) for v in row] for row in M.to_dense()]
    rank = 0
    ncols = M.cols
    for c in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pr = rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][c]:
                f = rows[r][c] / pr[c]
                rows[r] = [a - f * b for a, b in zip(rows[r], pr)]
        rank += 1
    return rank
