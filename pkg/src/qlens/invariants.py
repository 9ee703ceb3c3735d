"""Modular invariants and divisibility certificates for path matrices.

The signature collects windowed products of m-entries modulo each odd
prime divisor of r; equal signatures are necessary for equivalence. The
divisibility report and the congruence check certify the arithmetic
constraints that force the shape of every path matrix.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import prod

from .errors import BadModulusError, HypothesisUnmetError, InvalidParamsError, InvariantViolationError
from .lensgraph import LensParams
from .numtheory import binomial, factorize, is_prime, mod_inverse, padic_valuation
from .pathmatrix import PathMatrix, count_matrix

__all__ = [
    "Signature",
    "DivisibilityCheck",
    "DivisibilityReport",
    "signature",
    "check_divisibility",
    "congruence_main",
    "lower_bound_classes",
    "phitilde_formula",
]


@dataclass(frozen=True)
class Signature:
    """Windowed unit products modulo each odd prime divisor of r.

    For each prime p (increasing) the window tuple holds
    prod(m_{t+1} .. m_{t+p-1}) mod p for t = 1 .. n-p; the tuple is
    empty when n <= p.
    """

    primes: tuple[int, ...]
    windows: tuple[tuple[int, ...], ...]

    def as_tuple(self) -> tuple:
        return (self.primes, self.windows)

    def to_json(self) -> str:
        return json.dumps(
            {"primes": list(self.primes), "windows": [list(w) for w in self.windows]}
        )

    @classmethod
    def from_json(cls, text: str) -> "Signature":
        payload = json.loads(text)
        return cls(
            tuple(int(p) for p in payload["primes"]),
            tuple(tuple(int(v) for v in w) for w in payload["windows"]),
        )


def signature(params: LensParams) -> Signature:
    """The equivalence-necessary invariant of params."""
    fact = factorize(params.r)
    primes = tuple(p for p, _ in fact.odd_primes)
    windows = []
    for p in primes:
        row = []
        for t in range(1, params.n - p + 1):
            row.append(prod(params.m[t : t + p - 1]) % p)
        windows.append(tuple(row))
    return Signature(primes, tuple(windows))


@dataclass(frozen=True)
class DivisibilityCheck:
    law: str
    position: tuple[int, int]
    required: str
    passed: bool


@dataclass(frozen=True)
class DivisibilityReport:
    r: int
    m: tuple[int, ...]
    checks: tuple[DivisibilityCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def check_divisibility(params: LensParams, matrix: PathMatrix | None = None) -> DivisibilityReport:
    """Every applicable divisibility and valuation constraint, with verdicts.

    For each maximal odd prime power p^k of r, p^k divides every entry
    (a, b) with 0 < b - a < p. When 4 | r with 2^t the exact two-part,
    2^t divides every entry (a, a+3) and every entry (a, a+4) has 2-adic
    valuation exactly t - 2.
    """
    if matrix is None:
        matrix = count_matrix(params)
    r, n = params.r, params.n
    fact = factorize(r)
    checks: list[DivisibilityCheck] = []
    for p, k in fact.odd_primes:
        pk = p**k
        for a in range(1, n + 1):
            for b in range(a + 1, min(a + p, n + 1)):
                checks.append(
                    DivisibilityCheck(
                        "odd-prime-power window",
                        (a, b),
                        f"{pk} divides entry",
                        matrix.entry(a, b) % pk == 0,
                    )
                )
    t = fact.two_exponent
    if t >= 2:
        pk = 2**t
        for a in range(1, n - 2):
            checks.append(
                DivisibilityCheck(
                    "two-power fourth entry",
                    (a, a + 3),
                    f"{pk} divides entry",
                    matrix.entry(a, a + 3) % pk == 0,
                )
            )
        for a in range(1, n - 3):
            checks.append(
                DivisibilityCheck(
                    "two-power fifth entry valuation",
                    (a, a + 4),
                    f"2-adic valuation equals {t - 2}",
                    padic_valuation(matrix.entry(a, a + 4), 2) == t - 2,
                )
            )
    return DivisibilityReport(r, params.m, tuple(checks))


def congruence_main(params: LensParams, p: int, alpha: int) -> tuple[int, int]:
    """Corner congruence modulo p^alpha: both residues, equality enforced.

    Requires p an odd prime with p^alpha | r and n <= p + 1. The corner
    entry (1, n) is congruent to binom(r+n-2, n-1) times the inverse of
    m_2 * ... * m_{n-1}, provided every shorter entry (1, a) is divisible
    by p^alpha; that hypothesis is checked directly and its failure
    raises HypothesisUnmet.
    """
    if not is_prime(p) or p == 2:
        raise InvalidParamsError(f"p must be an odd prime, got {p}")
    if alpha < 1:
        raise InvalidParamsError(f"alpha must be >= 1, got {alpha}")
    if params.r % p**alpha:
        raise InvalidParamsError(f"{p}^{alpha} does not divide r = {params.r}")
    n = params.n
    if n > p + 1:
        raise InvalidParamsError(f"need n <= p + 1, got n = {n} for p = {p}")
    modulus = p**alpha
    matrix = count_matrix(params)
    for a in range(2, n):
        if matrix.entry(1, a) % modulus:
            raise HypothesisUnmetError(
                f"entry (1, {a}) = {matrix.entry(1, a)} is not divisible by {modulus}"
            )
    lhs = matrix.entry(1, n) % modulus
    interior = prod(params.m[1 : n - 1]) if n >= 2 else 1
    rhs = (
        binomial(params.r + n - 2, n - 1) * mod_inverse(interior, modulus)
    ) % modulus
    if lhs != rhs:
        raise InvariantViolationError(
            f"congruence failed at {params}: {lhs} != {rhs} mod {modulus}"
        )
    return lhs, rhs


def lower_bound_classes(r: int, n: int) -> int:
    """Product over odd primes p of r of ceil((p-1)^(n-p)); 1 for 2-powers."""
    if r <= 2:
        raise BadModulusError(f"modulus r must be an integer > 2, got {r}")
    if n < 1:
        raise InvalidParamsError(f"dimension n must be >= 1, got {n}")
    out = 1
    for p, _ in factorize(r).odd_primes:
        if n > p:
            out *= (p - 1) ** (n - p)
    return out


def phitilde_formula(r: int) -> int:
    """Least dimension with more than one class, in closed form.

    p + 1 when 4 does not divide r (p the smallest odd prime of r);
    min(6, p + 1) when 4 | r; 6 when r is a power of two.
    """
    if r <= 2:
        raise BadModulusError(f"modulus r must be an integer > 2, got {r}")
    p = factorize(r).smallest_odd_prime
    if p is None:
        return 6
    if r % 4 == 0:
        return min(6, p + 1)
    return p + 1
