"""Integer tensors through prime reduction.

Reduce an integer tensor mod p, scan exact analytic ranks across a prime
list, and estimate the rational geometric rank from the tail of the scan
(three consecutive values within 0.25 of a common integer). Large primes
carry the signal, so the default list is the 25 primes nearest below the
budget ceiling; small primes are cheap sanity points.

lift_search drives the mod-L sieve: it returns the small-height integer
points of the solution set found by the sieve, each re-checked to vanish
exactly, plus the implied dimension statistic log_L(count).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import BudgetError
from .field import is_prime, make_field
from .counting import BoxSpec, box_solutions, DEFAULT_BUDGET_BITS
from .ranks import ExactLogRank, ark_exact
from .tensor import IntMultilinearForm, MultilinearForm
from .verify import lift_height_bound

ESTIMATE_WINDOW = 3
ESTIMATE_GAP = 0.25


def reduce_mod_p(F: IntMultilinearForm, p: int) -> MultilinearForm:
    """Entry-wise reduction to F_p; evaluation commutes with reduction."""
    if not is_prime(p):
        raise ValueError(f"p = {p} is not prime")
    spec = make_field(p)
    return MultilinearForm(spec, F.d, F.n, tuple(c % p for c in F.coeffs))


def default_primes(F: IntMultilinearForm, budget_bits: float = 20.0,
                   count: int = 25) -> list[int]:
    """The `count` primes nearest below the counting ceiling, ascending.

    The ceiling keeps n(d-2) * log2(p) within the budget so every scan
    entry is an exact count.
    """
    exponent = max(F.n * (F.d - 2), 1)
    ceiling = min(int(2 ** (budget_bits / exponent)), 1 << 20)
    primes: list[int] = []
    p = ceiling
    while p >= 2 and len(primes) < count:
        if is_prime(p):
            primes.append(p)
        p -= 1
    return sorted(primes)


@dataclass(frozen=True)
class PrimeScan:
    """Per-prime exact analytic ranks with a running minimum."""

    primes: tuple[int, ...]
    ranks: tuple[ExactLogRank, ...]
    running_min: tuple[float, ...]
    grk_estimate_Q: int | None

    def to_dict(self) -> dict:
        return {
            "primes": list(self.primes),
            "ranks": [r.to_dict() for r in self.ranks],
            "running_min": list(self.running_min),
            "grk_estimate_Q": self.grk_estimate_Q,
        }


def liminf_ark_scan(F: IntMultilinearForm, primes=None,
                    budget_bits: float = DEFAULT_BUDGET_BITS) -> PrimeScan:
    """Exact ark of F mod p for each prime, with the tail-window estimate.

    The rational geometric-rank estimate is set when the last three
    per-prime values lie within 0.25 of a common integer.
    """
    if primes is None:
        primes = default_primes(F)
    primes = sorted(int(p) for p in primes)
    if not primes:
        raise ValueError("prime list is empty")
    ranks = []
    rmin: list[float] = []
    for p in primes:
        r = ark_exact(reduce_mod_p(F, p), 1, budget_bits)
        ranks.append(r)
        v = r.float_value
        rmin.append(v if not rmin else min(rmin[-1], v))
    estimate = None
    if len(ranks) >= ESTIMATE_WINDOW:
        tail = [r.float_value for r in ranks[-ESTIMATE_WINDOW:]]
        k = round(tail[-1])
        if all(abs(v - k) < ESTIMATE_GAP for v in tail):
            estimate = k
    return PrimeScan(tuple(primes), tuple(ranks), tuple(rmin), estimate)


@dataclass(frozen=True)
class LiftReport:
    """Small-height integer points found by the mod-L sieve."""

    L: int
    sigma: float
    height_bound: int
    threshold_reached: bool
    points: tuple[tuple[int, ...], ...]
    sieve_hits: int
    dim_statistic: float

    def to_dict(self) -> dict:
        return {
            "L": self.L,
            "sigma": self.sigma,
            "height_bound": self.height_bound,
            "threshold_reached": self.threshold_reached,
            "points": [list(p) for p in self.points],
            "sieve_hits": self.sieve_hits,
            "dim_statistic": self.dim_statistic,
        }


def lift_search(F: IntMultilinearForm, L: int, sigma: float,
                budget_bits: float = 34.0) -> LiftReport:
    """Exact integer points of the solution set via the mod-L sieve.

    Enumerates x with ||x|| < ceil(L^sigma) and G(x) = 0 mod L, keeps the
    points that vanish exactly (re-checked over the integers), and reports
    log_L(count) as the implied dimension lower-bound statistic.
    """
    if not (0 < sigma < 1 / (F.d - 1)):
        raise ValueError(f"sigma must lie in (0, 1/(d-1)); got {sigma}")
    B = lift_height_bound(L, sigma)
    c_f = F.max_abs_coeff() * F.n ** (F.d - 1)
    threshold = c_f * B ** (F.d - 1) < L
    hits = box_solutions(F, BoxSpec(B, signed=True, modulus=L), budget_bits)
    n = F.n
    points = []
    for sol in hits:
        vecs = [list(sol[k * n:(k + 1) * n]) for k in range(F.d - 1)]
        if not any(F.contract_last(vecs)):
            points.append(sol)
    stat = math.log(len(points)) / math.log(L) if points else float("-inf")
    return LiftReport(L, sigma, B, threshold, tuple(points), len(hits), stat)
