"""Exact field arithmetic and sparse linear algebra.

Two kinds of fields are supported: prime fields ``GF(p)`` whose elements are
plain Python ints in ``[0, p)``, and the rationals, whose elements are
:class:`fractions.Fraction`.  Nothing here ever rounds.

Rank computations over ``GF(p)`` run a Markowitz-pivoted sparse elimination
until the active block fills in, then finish the Schur complement with a
dense modular eliminator on numpy int64 arrays.  Over the rationals the rank
is computed fraction-free (Bareiss) on integer rows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

import numpy as np

__all__ = [
    "FieldSpec",
    "SparseMatrix",
    "ResourceError",
    "is_prime",
    "rank",
    "row_echelon",
    "kernel_dim",
]

DEFAULT_PRIME = 65537

# numpy path keeps a*b + c inside int64
_NUMPY_PRIME_LIMIT = 1 << 31

# Bareiss entries larger than this many bits are reported, not computed
MAX_BAREISS_BITS = 1 << 16


class ResourceError(RuntimeError):
    """A computation exceeded a configured memory or size budget."""


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for every n < 3.3e24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """A prime field ``GF(p)`` (``p`` set) or the rationals (``p is None``)."""

    p: int | None = DEFAULT_PRIME

    def __post_init__(self):
        if self.p is not None:
            if not isinstance(self.p, int) or self.p < 2:
                raise ValueError(f"field characteristic must be an integer >= 2, got {self.p!r}")
            if self.p >= 1 << 62:
                raise ValueError("prime fields are limited to p < 2^62")
            if not is_prime(self.p):
                raise ValueError(f"{self.p} is not prime")

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls(p)

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls(None)

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        """Parse ``"gfp:<p>"`` or ``"qq"``."""
        t = text.strip().lower()
        if t in ("qq", "q", "rationals"):
            return cls(None)
        if t.startswith("gfp:"):
            try:
                p = int(t[4:])
            except ValueError:
                raise ValueError(f"bad field string {text!r}") from None
            return cls(p)
        raise ValueError(f"bad field string {text!r}; expected 'gfp:<p>' or 'qq'")

    @property
    def is_prime_field(self) -> bool:
        return self.p is not None

    @property
    def characteristic(self) -> int:
        return 0 if self.p is None else self.p

    def __str__(self):
        return "qq" if self.p is None else f"gfp:{self.p}"

    # element arithmetic

    def __call__(self, x):
        """Coerce an int or Fraction into the field."""
        if self.p is None:
            return Fraction(x)
        if isinstance(x, Fraction):
            return x.numerator % self.p * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def zero(self):
        return self(0)

    def one(self):
        return self(1)

    def add(self, a, b):
        return (a + b) % self.p if self.p else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.p else a - b

    def mul(self, a, b):
        return a * b % self.p if self.p else a * b

    def neg(self, a):
        return -a % self.p if self.p else -a

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p) if self.p else 1 / Fraction(a)

    def to_json(self, a):
        if self.p is not None:
            return int(a)
        return str(a) if a.denominator != 1 else int(a.numerator)

    def from_json(self, v):
        return self(Fraction(v) if isinstance(v, str) else v)


class SparseMatrix:
    """Immutable sparse matrix over a :class:`FieldSpec`.

    Stored as a tuple of rows, each a dict ``{col: nonzero value}``.
    Zero values passed to the constructors are dropped; duplicate
    coordinates are summed.
    """

    __slots__ = ("nrows", "ncols", "field", "_rows")

    def __init__(self, nrows: int, ncols: int, field: FieldSpec, rows=None):
        if nrows < 0 or ncols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        self.nrows = nrows
        self.ncols = ncols
        self.field = field
        if rows is None:
            rows = [{} for _ in range(nrows)]
        if len(rows) != nrows:
            raise ValueError("row count mismatch")
        self._rows = tuple(rows)

    @classmethod
    def from_triplets(cls, nrows, ncols, field, triplets: Iterable[tuple[int, int, object]]):
        rows: list[dict] = [{} for _ in range(nrows)]
        for i, j, v in triplets:
            if not (0 <= i < nrows and 0 <= j < ncols):
                raise IndexError(f"entry ({i}, {j}) outside {nrows}x{ncols}")
            v = field(v)
            r = rows[i]
            if j in r:
                v = field.add(r[j], v)
            if v:
                r[j] = v
            else:
                r.pop(j, None)
        return cls(nrows, ncols, field, rows)

    @classmethod
    def from_rows(cls, ncols, field, rows: Iterable[dict]):
        """Build from trusted row dicts (already reduced, no zeros)."""
        rows = [dict(r) for r in rows]
        return cls(len(rows), ncols, field, rows)

    @classmethod
    def from_dense(cls, data, field: FieldSpec):
        data = [list(r) for r in data]
        ncols = len(data[0]) if data else 0
        rows = []
        for r in data:
            if len(r) != ncols:
                raise ValueError("ragged dense input")
            rows.append({j: field(v) for j, v in enumerate(r) if field(v)})
        return cls(len(rows), ncols, field, rows)

    @classmethod
    def identity(cls, n, field):
        return cls(n, n, field, [{i: field.one()} for i in range(n)])

    @classmethod
    def zeros(cls, nrows, ncols, field):
        return cls(nrows, ncols, field)

    def rows(self) -> tuple[dict, ...]:
        """Row dicts; treat as read-only."""
        return self._rows

    def row(self, i: int) -> dict:
        return dict(self._rows[i])

    def entries(self) -> Iterator[tuple[int, int, object]]:
        for i, r in enumerate(self._rows):
            for j in sorted(r):
                yield i, j, r[j]

    @property
    def nnz(self) -> int:
        return sum(len(r) for r in self._rows)

    @property
    def shape(self):
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self._rows[i].get(j, self.field.zero())

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (self.shape == other.shape and self.field == other.field
                and self._rows == other._rows)

    def __hash__(self):
        return hash((self.shape, self.field, tuple(tuple(sorted(r.items())) for r in self._rows)))

    def __repr__(self):
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={self.nnz}, field={self.field})"

    def to_dense(self) -> list[list]:
        z = self.field.zero()
        out = [[z] * self.ncols for _ in range(self.nrows)]
        for i, r in enumerate(self._rows):
            for j, v in r.items():
                out[i][j] = v
        return out

    def transpose(self) -> "SparseMatrix":
        cols: list[dict] = [{} for _ in range(self.ncols)]
        for i, r in enumerate(self._rows):
            for j, v in r.items():
                cols[j][i] = v
        return SparseMatrix(self.ncols, self.nrows, self.field, cols)

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        if self.field != other.field:
            raise ValueError("field mismatch")
        F = self.field
        orows = other._rows
        out = []
        for r in self._rows:
            acc: dict = {}
            for k, a in r.items():
                for j, b in orows[k].items():
                    acc[j] = F.add(acc.get(j, 0), F.mul(a, b)) if j in acc else F.mul(a, b)
            out.append({j: v for j, v in acc.items() if v})
        return SparseMatrix(self.nrows, other.ncols, F, out)

    def is_zero(self) -> bool:
        return not any(self._rows)

    # Matrix Market style coordinate dump, 1-based indices

    def to_matrix_market(self) -> str:
        lines = [
            "%%MatrixMarket matrix coordinate "
            + ("integer" if self.field.p is not None else "rational") + " general",
            f"% field {self.field}",
            f"{self.nrows} {self.ncols} {self.nnz}",
        ]
        for i, j, v in self.entries():
            lines.append(f"{i + 1} {j + 1} {v}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_matrix_market(cls, text: str, field: FieldSpec | None = None) -> "SparseMatrix":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("%%MatrixMarket"):
            raise ValueError("missing %%MatrixMarket header")
        body = []
        for ln in lines[1:]:
            if ln.startswith("%"):
                if field is None and ln[1:].split()[:1] == ["field"]:
                    field = FieldSpec.parse(ln.split()[-1])
                continue
            body.append(ln.split())
        if field is None:
            field = FieldSpec()
        nrows, ncols, nnz = map(int, body[0])
        trip = [(int(i) - 1, int(j) - 1, Fraction(v)) for i, j, v in body[1:]]
        if len(trip) != nnz:
            raise ValueError(f"expected {nnz} entries, found {len(trip)}")
        return cls.from_triplets(nrows, ncols, field, trip)


# --------------------------------------------------------------------------
# rank over GF(p): Markowitz sparse phase, then dense Schur complement


def _dense_rank_mod(A: np.ndarray, p: int) -> int:
    """Rank of an int64 array with entries in [0, p); destroys ``A``."""
    m, n = A.shape
    if m == 0 or n == 0:
        return 0
    if m > n:
        A = np.ascontiguousarray(A.T)
        m, n = n, m
    r = 0
    for c in range(n):
        if r == m:
            break
        col = A[r:, c]
        nz = np.flatnonzero(col)
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        inv = pow(int(A[r, c]), -1, p)
        A[r, c:] = A[r, c:] * inv % p
        below = r + 1 + np.flatnonzero(A[r + 1:, c])
        if below.size:
            f = A[below, c][:, None]
            A[np.ix_(below, np.arange(c, n))] = (A[below, c:] - f * A[r, c:]) % p
        r += 1
    return r


def _sparse_rank_mod(rows: list[dict], ncols: int, p: int,
                     dense_threshold: float = 0.05, dense_min: int = 48) -> int:
    """Markowitz elimination over GF(p).

    Pivot choice: among active columns of minimal count, the row of minimal
    length (tie-break lowest column, then lowest row).  Once the active block
    has density above ``dense_threshold`` the remainder goes dense.
    """
    rows = [dict(r) for r in rows if r]
    colrows: dict[int, set[int]] = {}
    for i, r in enumerate(rows):
        for j in r:
            colrows.setdefault(j, set()).add(i)
    active = set(range(len(rows)))
    rank_ = 0
    nnz = sum(len(r) for r in rows)
    while active and colrows:
        nr, nc = len(active), len(colrows)
        if nr >= dense_min and nc >= dense_min and nnz > dense_threshold * nr * nc:
            break
        # Markowitz pivot: minimal (column count - 1) * (row length - 1)
        best = None
        min_cc = min(len(s) for s in colrows.values())
        for c in sorted(j for j, s in colrows.items() if len(s) == min_cc)[:8]:
            for i in sorted(colrows[c]):
                cost = (min_cc - 1) * (len(rows[i]) - 1)
                key = (cost, c, i)
                if best is None or key < best:
                    best = key
            if best[0] == 0:
                break
        _, c, i = best
        prow = rows[i]
        inv = pow(prow[c], -1, p)
        active.discard(i)
        for j in prow:
            colrows[j].discard(i)
        others = colrows.pop(c)
        for t in others:
            trow = rows[t]
            f = trow[c] * inv % p
            nnz -= len(trow)
            for j, v in prow.items():
                if j == c:
                    continue
                w = (trow.get(j, 0) - f * v) % p
                if w:
                    if j not in trow:
                        colrows[j].add(t)
                    trow[j] = w
                elif j in trow:
                    del trow[j]
                    colrows[j].discard(t)
            del trow[c]
            nnz += len(trow)
            if not trow:
                active.discard(t)
        nnz -= len(prow)
        rows[i] = {}
        for j in [j for j, s in colrows.items() if not s]:
            del colrows[j]
        rank_ += 1
    if not active:
        return rank_
    act_rows = sorted(t for t in active if rows[t])
    cols = sorted(colrows)
    if not act_rows or not cols:
        return rank_
    cidx = {j: k for k, j in enumerate(cols)}
    A = np.zeros((len(act_rows), len(cols)), dtype=np.int64)
    for a, t in enumerate(act_rows):
        for j, v in rows[t].items():
            A[a, cidx[j]] = v
    return rank_ + _dense_rank_mod(A, p)


def _sparse_rank_mod_pure(rows: list[dict], ncols: int, p: int) -> int:
    """Pure-Python fallback for primes too large for the numpy path."""
    return len(_echelon_rows(rows, ncols, FieldSpec(p), reduce_above=False)[1])


def _bareiss_rank(rows: list[dict], ncols: int) -> int:
    """Fraction-free rank of a rational matrix (rows cleared to integers)."""
    mat = []
    for r in rows:
        if not r:
            continue
        den = 1
        for v in r.values():
            den = den * v.denominator // math.gcd(den, v.denominator)
        dense = [0] * ncols
        for j, v in r.items():
            dense[j] = int(v * den)
        mat.append(dense)
    m = len(mat)
    if m == 0:
        return 0
    prev = 1
    k = 0
    for c in range(ncols):
        if k == m:
            break
        piv = next((i for i in range(k, m) if mat[i][c]), None)
        if piv is None:
            continue
        mat[k], mat[piv] = mat[piv], mat[k]
        pk = mat[k]
        a = pk[c]
        for i in range(k + 1, m):
            ri = mat[i]
            b = ri[c]
            for j in range(c + 1, ncols):
                ri[j] = (a * ri[j] - b * pk[j]) // prev
            ri[c] = 0
            if ri and max(abs(x) for x in ri).bit_length() > MAX_BAREISS_BITS:
                raise ResourceError("rational elimination exceeded the entry-size limit")
        prev = a
        k += 1
    return k


def rank(M: SparseMatrix) -> int:
    """Rank of ``M`` over its field."""
    F = M.field
    if M.nrows == 0 or M.ncols == 0:
        return 0
    if F.p is None:
        return _bareiss_rank(list(M.rows()), M.ncols)
    if F.p < _NUMPY_PRIME_LIMIT:
        return _sparse_rank_mod(list(M.rows()), M.ncols, F.p)
    return _sparse_rank_mod_pure(list(M.rows()), M.ncols, F.p)


def kernel_dim(M: SparseMatrix) -> int:
    """Dimension of the right kernel, ``ncols - rank``."""
    return M.ncols - rank(M)


# --------------------------------------------------------------------------
# reduced row echelon form, leftmost pivots


def _echelon_rows(rows, ncols, F: FieldSpec, reduce_above=True):
    """Gauss-Jordan on row dicts; returns (pivots, reduced rows sorted by pivot)."""
    piv_rows: dict[int, dict] = {}
    for r in rows:
        r = dict(r)
        # reduce against existing pivots in increasing column order
        while r:
            lead = min(r)
            pr = piv_rows.get(lead)
            if pr is None:
                break
            f = r[lead]
            for j, v in pr.items():
                w = F.sub(r.get(j, 0), F.mul(f, v))
                if w:
                    r[j] = w
                else:
                    r.pop(j, None)
        if not r:
            continue
        lead = min(r)
        inv = F.inv(r[lead])
        r = {j: F.mul(v, inv) for j, v in r.items()}
        piv_rows[lead] = r
    pivots = sorted(piv_rows)
    if reduce_above:
        for c in reversed(pivots):
            pr = piv_rows[c]
            for c2 in pivots:
                if c2 >= c:
                    break
                r2 = piv_rows[c2]
                f = r2.get(c)
                if f:
                    for j, v in pr.items():
                        w = F.sub(r2.get(j, 0), F.mul(f, v))
                        if w:
                            r2[j] = w
                        else:
                            r2.pop(j, None)
    return pivots, [piv_rows[c] for c in pivots]


def _dense_rref_mod(A: np.ndarray, p: int):
    m, n = A.shape
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        A[r] = A[r] * pow(int(A[r, c]), -1, p) % p
        others = np.flatnonzero(A[:, c])
        others = others[others != r]
        if others.size:
            f = A[others, c][:, None]
            A[others] = (A[others] - f * A[r]) % p
        pivots.append(c)
        r += 1
    return pivots, A[:r]


def row_echelon(M: SparseMatrix) -> tuple[list[int], SparseMatrix]:
    """Reduced row echelon form with leftmost pivots.

    Returns the pivot columns (ascending) and an ``rank x ncols`` matrix whose
    i-th row has a 1 in column ``pivots[i]`` and zeros in every other pivot
    column.  The result depends only on the row space of ``M``.
    """
    F = M.field
    if F.p is not None and F.p < _NUMPY_PRIME_LIMIT and M.nrows * M.ncols > 4096:
        A = np.zeros((M.nrows, M.ncols), dtype=np.int64)
        for i, r in enumerate(M.rows()):
            for j, v in r.items():
                A[i, j] = v
        pivots, R = _dense_rref_mod(A, F.p)
        rows = []
        for a in range(R.shape[0]):
            nz = np.flatnonzero(R[a])
            rows.append({int(j): int(R[a, j]) for j in nz})
        return pivots, SparseMatrix(len(rows), M.ncols, F, rows)
    pivots, rows = _echelon_rows(M.rows(), M.ncols, F)
    return pivots, SparseMatrix(len(rows), M.ncols, F, rows)
