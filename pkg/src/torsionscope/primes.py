"""Bad primes of boundary operators and filtrations, and good-prime certificates.

A prime is bad for degree ``k`` of a complex when it divides the largest
elementary divisor of the k-th or (k+1)-th boundary operator.  Outside the
union of these sets over all stages, homology with Z/p coefficients has
the rational Betti numbers at every stage.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any

from .arith import check_prime, prime_factors
from .complexes import Filtration, SimplicialComplex
from .homology import FieldSpec, boundary_matrix, rank_over
from .snf import smith_normal_form


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("TORSIONSCOPE_THREADS", "1")))
    except ValueError:
        return 1


def _largest_divisor(complex: SimplicialComplex, k: int, cache: dict | None) -> int:
    if k <= 0 or complex.count(k) == 0:
        return 1
    if cache is not None and k in cache:
        return cache[k].largest
    res = smith_normal_form(boundary_matrix(complex, k))
    if cache is not None:
        cache[k] = res
    return res.largest


def bad_primes_for_degree(complex: SimplicialComplex, k: int, cache: dict | None = None) -> set[int]:
    """Prime factors of ``alpha_r * alpha~_s``, the largest divisors of the (k+1)-th and k-th boundaries."""
    return prime_factors(_largest_divisor(complex, k + 1, cache) * _largest_divisor(complex, k, cache))


@dataclass
class PrimeReport:
    per_stage: dict[tuple[float, int], frozenset[int]] = field(default_factory=dict)

    @property
    def aggregate(self) -> list[int]:
        return sorted(set().union(*self.per_stage.values()))

    def to_json(self) -> dict[str, Any]:
        return {
            "aggregate": self.aggregate,
            "per_stage": [
                {"scale": s, "k": k, "primes": sorted(ps)} for (s, k), ps in sorted(self.per_stage.items())
            ],
        }

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> PrimeReport:
        rep = cls({(float(r["scale"]), int(r["k"])): frozenset(r["primes"]) for r in obj["per_stage"]})
        if rep.aggregate != list(obj.get("aggregate", rep.aggregate)):
            raise ValueError("aggregate does not match the per-stage sets")
        return rep


def _stage_primes(stage: SimplicialComplex, max_k: int) -> dict[int, frozenset[int]]:
    cache: dict = {}
    return {k: frozenset(bad_primes_for_degree(stage, k, cache)) for k in range(max_k + 1)}


def bad_primes_for_filtration(filtration: Filtration, max_k: int) -> PrimeReport:
    stages = list(filtration.stages())
    with ThreadPoolExecutor(worker_count()) as pool:
        found = list(pool.map(lambda st: _stage_primes(st[1], max_k), stages))
    rep = PrimeReport()
    for (eps, _), per_k in zip(stages, found):
        for k, ps in per_k.items():
            rep.per_stage[eps, k] = ps
    return rep


@dataclass
class Certificate:
    p: int
    checks: list[dict[str, Any]]

    @property
    def passed(self) -> bool:
        return all(c["pass"] for c in self.checks)

    @property
    def failures(self) -> list[dict[str, Any]]:
        return [c for c in self.checks if not c["pass"]]

    def to_json(self) -> dict[str, Any]:
        return {"p": self.p, "passed": self.passed, "checks": self.checks}


def _stage_dims(stage: SimplicialComplex, max_k: int, fld: FieldSpec) -> list[int]:
    ranks = [rank_over(stage, k, fld) for k in range(max_k + 2)]
    return [stage.count(k) - ranks[k] - ranks[k + 1] for k in range(max_k + 1)]


def certify_good_prime(filtration: Filtration, p: int, max_k: int) -> Certificate:
    """Check ``dim H_k(stage; Z/p) == beta_k(stage)`` at every stage and ``k <= max_k``."""
    p = check_prime(p)
    fp, q = FieldSpec.prime(p), FieldSpec.rationals()
    checks = []
    for eps, stage in filtration.stages():
        dp, dq = _stage_dims(stage, max_k, fp), _stage_dims(stage, max_k, q)
        for k in range(max_k + 1):
            checks.append({"scale": eps, "k": k, "dim_p": dp[k], "betti": dq[k], "pass": dp[k] == dq[k]})
    return Certificate(p, checks)

