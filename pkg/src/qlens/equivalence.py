"""Exact decision of unipotent upper-triangular equivalence over the integers.

Two unit-diagonal upper-triangular matrices A and B are equivalent when
there exist unipotent upper-triangular integer matrices U, V with
U(A - I) = (B - I)V. Writing U = I + U' and V = I + V' with strictly
upper unknowns turns this into a linear Diophantine system with one
equation per strictly-upper position:

    sum_{i<k<j} (A-I)[k][j] * U'[i][k]
  - sum_{i<k<j} (B-I)[i][k] * V'[k][j]  =  B[i][j] - A[i][j].

The system is solved completely over the integers via Smith normal form,
so every verdict is exact: Equivalent comes with a verified witness and
NotEquivalent with either a modular corner obstruction or infeasibility
of the system.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

from .errors import (
    DimensionMismatchError,
    IndexOutOfRangeError,
    InvalidParamsError,
    InvariantViolationError,
)
from .numtheory import factorize

__all__ = [
    "Witness",
    "CornerObstruction",
    "EquivDecision",
    "smith_normal_form",
    "solve_diophantine",
    "decide_equiv",
    "obstruction_mod_k",
    "verify_witness",
    "submatrix_necessary",
    "unipotent_inverse",
]

IntMatrix = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class Witness:
    """Unipotent upper-triangular U, V with U(A-I) = (B-I)V."""

    U: IntMatrix
    V: IntMatrix

    def to_json(self) -> str:
        return json.dumps(
            {
                "U": [[str(v) for v in row] for row in self.U],
                "V": [[str(v) for v in row] for row in self.V],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "Witness":
        payload = json.loads(text)
        u = tuple(tuple(int(v) for v in row) for row in payload["U"])
        v = tuple(tuple(int(v) for v in row) for row in payload["V"])
        return cls(u, v)


@dataclass(frozen=True)
class CornerObstruction:
    """Certificate that the corner entries differ modulo k while every
    other strictly-upper entry of both matrices is divisible by k."""

    k: int
    position: tuple[int, int]
    lhs_residue: int
    rhs_residue: int

    def describe(self) -> str:
        i, j = self.position
        return (
            f"corner entries at ({i}, {j}) differ modulo {self.k}: "
            f"{self.lhs_residue} vs {self.rhs_residue}"
        )


@dataclass(frozen=True)
class EquivDecision:
    """Outcome of decide_equiv; the solver is complete, so there is no
    undecided state."""

    equivalent: bool
    reason: str
    witness: Witness | None = None
    obstruction: CornerObstruction | None = None


def _as_entries(matrix) -> IntMatrix:
    entries = getattr(matrix, "entries", matrix)
    rows = tuple(tuple(int(v) for v in row) for row in entries)
    n = len(rows)
    if any(len(row) != n for row in rows):
        raise DimensionMismatchError("matrix must be square")
    return rows


def _require_unitriangular(entries: IntMatrix, name: str) -> None:
    n = len(entries)
    for i in range(n):
        if entries[i][i] != 1:
            raise InvalidParamsError(
                f"{name} must have unit diagonal; entry ({i + 1}, {i + 1}) is {entries[i][i]}"
            )
        for j in range(i):
            if entries[i][j] != 0:
                raise InvalidParamsError(
                    f"{name} must be upper triangular; entry ({i + 1}, {j + 1}) is {entries[i][j]}"
                )


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _matmul(x: Sequence[Sequence[int]], y: Sequence[Sequence[int]]) -> list[list[int]]:
    inner = len(y)
    cols = len(y[0]) if inner else 0
    out = []
    for row in x:
        acc = [0] * cols
        for k, xv in enumerate(row):
            if xv:
                yk = y[k]
                for j in range(cols):
                    acc[j] += xv * yk[j]
        out.append(acc)
    return out


def smith_normal_form(matrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form D = S * M * T with unimodular S, T.

    D is diagonal with non-negative entries and d1 | d2 | ... Pivoting is
    deterministic: smallest nonzero absolute value, ties broken by lowest
    row then lowest column. Off-pivot entries are reduced with floor
    division at every step, which keeps intermediate entries small.
    """
    a = [list(map(int, row)) for row in matrix]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    if any(len(row) != cols for row in a):
        raise DimensionMismatchError("matrix rows must have equal length")
    s = _identity(rows)
    t = _identity(cols)
    k = 0
    limit = min(rows, cols)
    while k < limit:
        pi = pj = -1
        best = 0
        for i in range(k, rows):
            ai = a[i]
            for j in range(k, cols):
                v = ai[j]
                if v:
                    av = -v if v < 0 else v
                    if best == 0 or av < best:
                        best = av
                        pi, pj = i, j
        if pi < 0:
            break
        if pi != k:
            a[k], a[pi] = a[pi], a[k]
            s[k], s[pi] = s[pi], s[k]
        if pj != k:
            for row in a:
                row[k], row[pj] = row[pj], row[k]
            for row in t:
                row[k], row[pj] = row[pj], row[k]
        while True:
            restart = False
            for i in range(k + 1, rows):
                while a[i][k]:
                    q = a[i][k] // a[k][k]
                    if q:
                        a[i] = [x - q * y for x, y in zip(a[i], a[k])]
                        s[i] = [x - q * y for x, y in zip(s[i], s[k])]
                    if a[i][k]:
                        a[k], a[i] = a[i], a[k]
                        s[k], s[i] = s[i], s[k]
            for j in range(k + 1, cols):
                while a[k][j]:
                    q = a[k][j] // a[k][k]
                    if q:
                        for row in a:
                            row[j] -= q * row[k]
                        for row in t:
                            row[j] -= q * row[k]
                    if a[k][j]:
                        for row in a:
                            row[k], row[j] = row[j], row[k]
                        for row in t:
                            row[k], row[j] = row[j], row[k]
                        restart = True
                if restart:
                    break
            if restart:
                continue
            pivot = a[k][k]
            violation = -1
            for i in range(k + 1, rows):
                ai = a[i]
                for j in range(k + 1, cols):
                    if ai[j] % pivot:
                        violation = i
                        break
                if violation >= 0:
                    break
            if violation < 0:
                break
            a[k] = [x + y for x, y in zip(a[k], a[violation])]
            s[k] = [x + y for x, y in zip(s[k], s[violation])]
        if a[k][k] < 0:
            a[k] = [-x for x in a[k]]
            s[k] = [-x for x in s[k]]
        k += 1
    return (
        tuple(tuple(row) for row in s),
        tuple(tuple(row) for row in a),
        tuple(tuple(row) for row in t),
    )


def solve_diophantine(matrix, c) -> tuple[int, ...] | None:
    """One integer solution x of M*x = c, or None when infeasible."""
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    c = [int(v) for v in c]
    if len(c) != rows:
        raise DimensionMismatchError(
            f"right-hand side has {len(c)} entries for {rows} equations"
        )
    s, d, t = smith_normal_form(matrix)
    b = [sum(sv * cv for sv, cv in zip(srow, c)) for srow in s]
    y = [0] * cols
    for i in range(rows):
        di = d[i][i] if i < cols else 0
        if di:
            q, rem = divmod(b[i], di)
            if rem:
                return None
            y[i] = q
        elif b[i]:
            return None
    return tuple(sum(tv * yv for tv, yv in zip(trow, y)) for trow in t)


def obstruction_mod_k(A, B, k: int) -> CornerObstruction | None:
    """Corner obstruction of the pair (A, B) at modulus k, when present.

    Returns the position (1, n) when every strictly-upper entry of A - I
    and B - I other than the corner is divisible by k while the corner
    entries differ modulo k; returns None otherwise. A returned
    obstruction proves the matrices are not equivalent.
    """
    if k < 2:
        raise InvalidParamsError(f"obstruction modulus must be >= 2, got {k}")
    a = _as_entries(A)
    b = _as_entries(B)
    n = len(a)
    if len(b) != n:
        raise DimensionMismatchError("matrices must have equal dimensions")
    if n < 2:
        return None
    for entries in (a, b):
        for i in range(n):
            for j in range(i + 1, n):
                if (i, j) == (0, n - 1):
                    continue
                if entries[i][j] % k:
                    return None
    lhs = a[0][n - 1] % k
    rhs = b[0][n - 1] % k
    if lhs == rhs:
        return None
    return CornerObstruction(k, (1, n), lhs, rhs)


def _best_corner_obstruction(a: IntMatrix, b: IntMatrix) -> CornerObstruction | None:
    """Strongest corner obstruction available for the pair.

    Any modulus k admitting an obstruction must divide every non-corner
    strictly-upper entry, hence divides their gcd d; and the corners
    differing modulo some such k is equivalent to differing modulo d. The
    reported certificate modulus is the single prime power of d on which
    the corners disagree, the smallest such prime first.
    """
    n = len(a)
    if n < 3:
        return None
    d = 0
    for entries in (a, b):
        for i in range(n):
            for j in range(i + 1, n):
                if (i, j) != (0, n - 1):
                    d = math.gcd(d, entries[i][j])
    if d < 2:
        return None
    diff = a[0][n - 1] - b[0][n - 1]
    if diff % d == 0:
        return None
    fact = factorize(d)
    prime_powers = list(fact.odd_primes)
    if fact.two_exponent:
        prime_powers.insert(0, (2, fact.two_exponent))
    for p, alpha in prime_powers:
        k = p**alpha
        if diff % k:
            return CornerObstruction(k, (1, n), a[0][n - 1] % k, b[0][n - 1] % k)
    raise InvariantViolationError("corner difference not detected by any prime power")


def _build_system(a: IntMatrix, b: IntMatrix) -> tuple[list[list[int]], list[int], int]:
    """Equations over the strictly-upper unknowns of U' then V', row-major."""
    n = len(a)
    index = {}
    pos = 0
    for i in range(n):
        for k in range(i + 1, n):
            index[("U", i, k)] = pos
            pos += 1
    half = pos
    for i in range(n):
        for k in range(i + 1, n):
            index[("V", i, k)] = pos
            pos += 1
    rows: list[list[int]] = []
    rhs: list[int] = []
    for i in range(n):
        for j in range(i + 1, n):
            row = [0] * pos
            for k in range(i + 1, j):
                row[index[("U", i, k)]] += a[k][j]
                row[index[("V", k, j)]] -= b[i][k]
            rows.append(row)
            rhs.append(b[i][j] - a[i][j])
    return rows, rhs, half


def _witness_from_solution(n: int, half: int, x: tuple[int, ...]) -> Witness:
    u = _identity(n)
    v = _identity(n)
    pos = 0
    for i in range(n):
        for k in range(i + 1, n):
            u[i][k] = x[pos]
            v[i][k] = x[half + pos]
            pos += 1
    return Witness(tuple(tuple(r) for r in u), tuple(tuple(r) for r in v))


def decide_equiv(A, B, use_prefilter: bool = True) -> EquivDecision:
    """Complete, exact decision of A ~ B with certificate.

    Equal matrices short-circuit with the identity witness. Otherwise a
    corner obstruction is sought as a cheap negative certificate (unless
    use_prefilter is False), and finally the full Diophantine system is
    solved; its solvability over the integers is equivalent to A ~ B.
    """
    a = _as_entries(A)
    b = _as_entries(B)
    n = len(a)
    if len(b) != n:
        raise DimensionMismatchError(
            f"matrices have dimensions {n} and {len(b)}"
        )
    _require_unitriangular(a, "A")
    _require_unitriangular(b, "B")
    if a == b:
        ident = tuple(tuple(row) for row in _identity(n))
        return EquivDecision(True, "matrices are equal", Witness(ident, ident))
    if use_prefilter:
        obstruction = _best_corner_obstruction(a, b)
        if obstruction is not None:
            return EquivDecision(False, obstruction.describe(), None, obstruction)
    rows, rhs, half = _build_system(a, b)
    x = solve_diophantine(rows, rhs)
    if x is None:
        return EquivDecision(False, "Diophantine system infeasible")
    witness = _witness_from_solution(n, half, x)
    if not verify_witness(a, b, witness):
        raise InvariantViolationError("solver produced a witness that fails verification")
    return EquivDecision(True, "witness found", witness)


def verify_witness(A, B, witness: Witness) -> bool:
    """True iff U, V are unipotent upper triangular and U(A-I) = (B-I)V."""
    a = _as_entries(A)
    b = _as_entries(B)
    n = len(a)
    u = witness.U
    v = witness.V
    for mat in (u, v):
        if len(mat) != n or any(len(row) != n for row in mat):
            return False
        for i in range(n):
            if mat[i][i] != 1:
                return False
            if any(mat[i][j] for j in range(i)):
                return False
    if len(b) != n:
        return False
    a_minus = [[a[i][j] - int(i == j) for j in range(n)] for i in range(n)]
    b_minus = [[b[i][j] - int(i == j) for j in range(n)] for i in range(n)]
    return _matmul(u, a_minus) == _matmul(b_minus, v)


def submatrix_necessary(A, B, b: int, c: int) -> bool:
    """Equivalence of the corner blocks rows/columns b..b+c (1-based).

    A False result proves the full matrices are not equivalent; True is
    only a necessary condition.
    """
    ea = _as_entries(A)
    eb = _as_entries(B)
    n = len(ea)
    if len(eb) != n:
        raise DimensionMismatchError("matrices must have equal dimensions")
    if c < 0 or not (1 <= b <= b + c <= n):
        raise IndexOutOfRangeError(
            f"block [{b}, {b + c}] out of range for dimension {n}"
        )
    lo, hi = b - 1, b + c
    block_a = tuple(row[lo:hi] for row in ea[lo:hi])
    block_b = tuple(row[lo:hi] for row in eb[lo:hi])
    return decide_equiv(block_a, block_b).equivalent


def unipotent_inverse(matrix) -> IntMatrix:
    """Exact integer inverse of a unipotent upper-triangular matrix."""
    m = _as_entries(matrix)
    _require_unitriangular(m, "matrix")
    n = len(m)
    inv = _identity(n)
    for j in range(n):
        for i in range(j - 1, -1, -1):
            acc = 0
            for k in range(i + 1, j + 1):
                acc += m[i][k] * inv[k][j]
            inv[i][j] = -acc
    return tuple(tuple(row) for row in inv)
