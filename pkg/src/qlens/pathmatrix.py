"""Path-count matrices computed by dynamic programming.

The matrix B attached to (r; m) is upper triangular with entry (i, j) equal
to the number of legal paths from (i, 0) to (j, 0). The DP sweeps subgraphs
left to right: f[t] counts walks from (i, 0) to (s, t) whose vertices after
the start all have t != 0. Reaching column 0 in subgraph s closes a path via
the unique vertical 0-tail, which is never walked explicitly.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .errors import (
    BadModulusError,
    DimensionMismatchError,
    IndexOutOfRangeError,
    InvalidParamsError,
    NonIntegerResultError,
)
from .lensgraph import LensParams, scale
from .numtheory import binomial, mod_inverse

__all__ = [
    "PathMatrix",
    "count_matrix",
    "closed_form_all_ones",
    "poly_1to6",
    "normalize",
]


@dataclass(frozen=True)
class PathMatrix:
    """Upper-triangular integer matrix with its originating parameters."""

    r: int
    m: tuple[int, ...]
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        n = len(self.entries)
        if any(len(row) != n for row in self.entries):
            raise DimensionMismatchError("entries must form a square matrix")
        if len(self.m) != n:
            raise DimensionMismatchError(
                f"m has {len(self.m)} entries but the matrix is {n}x{n}"
            )

    @property
    def n(self) -> int:
        return len(self.entries)

    def entry(self, i: int, j: int) -> int:
        """1-based access to the (i, j) entry."""
        if not (1 <= i <= self.n and 1 <= j <= self.n):
            raise IndexOutOfRangeError(
                f"indices ({i}, {j}) out of range for an {self.n}x{self.n} matrix"
            )
        return self.entries[i - 1][j - 1]

    def to_json(self) -> str:
        payload = {
            "r": self.r,
            "m": list(self.m),
            "n": self.n,
            "entries": [str(v) for row in self.entries for v in row],
        }
        return json.dumps(payload)

    @classmethod
    def from_json(cls, text: str) -> "PathMatrix":
        payload = json.loads(text)
        n = int(payload["n"])
        flat = [int(v) for v in payload["entries"]]
        if len(flat) != n * n:
            raise DimensionMismatchError(
                f"expected {n * n} entries for n={n}, got {len(flat)}"
            )
        rows = tuple(tuple(flat[i * n : (i + 1) * n]) for i in range(n))
        return cls(int(payload["r"]), tuple(int(v) for v in payload["m"]), rows)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        for row in self.entries:
            writer.writerow([str(v) for v in row])
        return buf.getvalue()


def _count_row(r: int, m: tuple[int, ...], i: int) -> tuple[int, ...]:
    """Entries (i, i..n) of the path-count matrix, 1-based source i.

    f[t] counts column-0-avoiding walks from (i, 0) to the current
    subgraph's column t. Within subgraph s the recurrence is
    f[t] = f_prev[t] + f[t - m_s], solved by a prefix sum along the
    cycle t = k*m_s mod r, which never passes column 0 because m_s is
    a unit. Closing into column 0 uses the walk count at column r - m_s.
    """
    n = len(m)
    f = [1] * r
    f[0] = 0
    total = f[r - m[i - 1]]
    row = [total]
    for s in range(i + 1, n + 1):
        shift = m[s - 1]
        g = [0] * r
        acc = 0
        u = 0
        for _ in range(r - 1):
            u = (u + shift) % r
            acc += f[u]
            g[u] = acc
        f = g
        total += f[r - shift]
        row.append(total)
    return tuple(row)


def count_matrix(params: LensParams, jobs: int | None = None) -> PathMatrix:
    """Path-count matrix of (r; m) in O(n^2 * r) time.

    With jobs > 1 the per-source rows are computed in a process pool;
    assembly order is fixed, so the result is identical either way.
    """
    r, m, n = params.r, params.m, params.n
    sources = range(1, n + 1)
    if jobs is not None and jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            tails = list(pool.map(_count_row, [r] * n, [m] * n, sources))
    else:
        tails = [_count_row(r, m, i) for i in sources]
    entries = tuple(
        tuple([0] * (i - 1) + list(tails[i - 1])) for i in sources
    )
    return PathMatrix(r, m, entries)


def closed_form_all_ones(r: int, n: int) -> PathMatrix:
    """Matrix for the all-ones vector: entry (i, j) = C(r-1+(j-i), j-i)."""
    if r <= 2:
        raise BadModulusError(f"modulus r must be an integer > 2, got {r}")
    if n < 1:
        raise InvalidParamsError(f"dimension n must be >= 1, got {n}")
    entries = tuple(
        tuple(binomial(r - 1 + (j - i), j - i) if j >= i else 0 for j in range(n))
        for i in range(n)
    )
    return PathMatrix(r, (1,) * n, entries)


def poly_1to6(r: int) -> int:
    """Corner entry (1, 6) for the vector (1, 1, -1, 1, 1, 1).

    Evaluates (22r + 15r^2 - 5r^3 + 5r^4 + 3r^5) / 40 exactly. The
    division is always exact; a remainder would contradict the counting
    identity behind the formula, so it is reported loudly.
    """
    if r <= 2:
        raise BadModulusError(f"modulus r must be an integer > 2, got {r}")
    numerator = 22 * r + 15 * r**2 - 5 * r**3 + 5 * r**4 + 3 * r**5
    quotient, remainder = divmod(numerator, 40)
    if remainder:
        raise NonIntegerResultError(
            f"polynomial numerator {numerator} is not divisible by 40 at r={r}"
        )
    return quotient


def normalize(params: LensParams) -> LensParams:
    """Equivalent parameters with m_1 = m_n = 1, and m_2 = 1 when n >= 2.

    Scales by the inverse of m_2 (making position 2 equal to 1), then
    overwrites the first and last positions with 1. Neither step changes
    the path-count matrix.
    """
    if params.n == 1:
        return LensParams(params.r, (1,))
    scaled = scale(params, mod_inverse(params.m[1], params.r))
    m = list(scaled.m)
    m[0] = 1
    m[-1] = 1
    return LensParams(params.r, tuple(m))
