"""Koszul cohomology ``K_{p,q}(X; L)`` and graded Betti tables.

The complex in degree ``p + q`` is

    wedge^{p+1} V (x) R_{q-1} -> wedge^p V (x) R_q -> wedge^{p-1} V (x) R_{q+1}

and only dimensions are needed, so every group is computed from two ranks:
``dim K_{p,q} = dim(wedge^p V (x) R_q) - rank d_{p,q} - rank d_{p+1,q-1}``.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field as dc_field
from itertools import combinations
from math import comb

from .exactla import FieldSpec, SparseMatrix, rank
from .gradedring import Presentation, graded_piece, mult_tensor

log = logging.getLogger(__name__)

DEFAULT_BUDGET_MB = 2048


class WedgeIndex:
    """Colexicographic ranking of ``p``-subsets of ``{0, ..., n-1}``.

    ``rank(S) = sum_k C(s_k, k + 1)`` for ``s_0 < s_1 < ...``.
    """

    def __init__(self, n: int, p: int):
        if p < 0 or n < 0:
            raise ValueError("n and p must be non-negative")
        self.n = n
        self.p = p

    def __len__(self):
        return comb(self.n, self.p)

    def rank(self, subset) -> int:
        s = sorted(subset)
        if len(s) != self.p or (s and (s[0] < 0 or s[-1] >= self.n)) or len(set(s)) != len(s):
            raise ValueError(f"{subset!r} is not a {self.p}-subset of range({self.n})")
        return sum(comb(x, k + 1) for k, x in enumerate(s))

    def unrank(self, r: int) -> tuple[int, ...]:
        if not 0 <= r < len(self):
            raise IndexError(r)
        out = []
        x = self.n - 1
        for k in range(self.p, 0, -1):
            while comb(x, k) > r:
                x -= 1
            out.append(x)
            r -= comb(x, k)
            x -= 1
        return tuple(reversed(out))

    def subsets(self):
        """All subsets in rank order."""
        return [self.unrank(r) for r in range(len(self))]


def koszul_differential(P: Presentation, p: int, q: int) -> SparseMatrix:
    """Matrix of ``d: wedge^p V (x) R_q -> wedge^{p-1} V (x) R_{q+1}``.

    Rows index the source as ``rank(I) * dim R_q + s``, columns the target as
    ``rank(J) * dim R_{q+1} + t``.  The sign of the term dropping the j-th
    smallest element of ``I`` is ``(-1)^j``.
    """
    n = P.nvars
    F = P.field
    if p < 1 or p > n:
        raise ValueError(f"p must be in 1..{n}")
    if q < 0:
        raise ValueError("q must be non-negative")
    Rq = graded_piece(P, q).dim
    Rq1 = graded_piece(P, q + 1).dim
    src = WedgeIndex(n, p)
    dst = WedgeIndex(n, p - 1)
    T = mult_tensor(P, q)
    rows = []
    minus = F.neg(F.one())
    for I in src.subsets():
        faces = []
        for j, i in enumerate(I):
            J = I[:j] + I[j + 1:]
            faces.append((i, dst.rank(J) * Rq1, j % 2 == 1))
        for s in range(Rq):
            row: dict = {}
            for i, off, neg in faces:
                for t, v in T[i][s].items():
                    row[off + t] = F.mul(minus, v) if neg else v
            rows.append(row)
    M = SparseMatrix(len(rows), len(dst) * Rq1, F, rows)
    if M.nrows != len(src) * Rq:
        raise AssertionError("koszul differential has the wrong number of rows")
    return M


def _cell_bytes(P: Presentation, p: int, q: int) -> int:
    """Worst-case dense footprint of the elimination for ``d_{p,q}``."""
    n = P.nvars
    return 8 * comb(n, p) * graded_piece(P, q).dim * comb(n, p - 1) * graded_piece(P, q + 1).dim


def differential_rank(P: Presentation, p: int, q: int) -> int:
    """Rank of ``d_{p,q}``, zero outside the range where it is defined."""
    if p < 1 or p > P.nvars or q < 0:
        return 0
    key = ("drank", p, q)
    if key not in P._cache:
        d = koszul_differential(P, p, q)
        P._cache[key] = rank(d)
        log.debug("rank d_{%d,%d} (%dx%d) = %d", p, q, d.nrows, d.ncols, P._cache[key])
    return P._cache[key]


def term_dim(P: Presentation, p: int, q: int) -> int:
    if p < 0 or q < 0 or p > P.nvars:
        return 0
    return comb(P.nvars, p) * graded_piece(P, q).dim


def kpq_dim(P: Presentation, p: int, q: int) -> int:
    """``dim K_{p,q}(X; L)`` for the coordinate ring of ``P``."""
    if p < 0 or q < 0:
        raise ValueError("p and q must be non-negative")
    if p > P.nvars:
        return 0
    return term_dim(P, p, q) - differential_rank(P, p, q) - differential_rank(P, p + 1, q - 1)


@dataclass
class BettiTable:
    """Koszul cohomology dimensions on ``0 <= p <= p_max``, ``0 <= q <= q_max``.

    Cells that could not be computed within the memory budget are listed in
    ``holes`` and absent from ``entries``.
    """

    entries: dict
    model: str
    field: str
    seed: int | None
    p_max: int
    q_max: int
    ambient_dim: int | None = None
    holes: list = dc_field(default_factory=list)

    def __getitem__(self, pq):
        if pq in self.entries:
            return self.entries[pq]
        p, q = pq
        if 0 <= p <= self.p_max and 0 <= q <= self.q_max:
            raise KeyError(f"cell {pq} is a hole (budget exceeded)")
        raise KeyError(f"cell {pq} outside computed range")

    def get(self, p, q, default=None):
        return self.entries.get((p, q), default)

    def covers(self, p, q) -> bool:
        return (p, q) in self.entries

    @property
    def complete(self) -> bool:
        return not self.holes

    def to_json(self) -> dict:
        d = {
            "model": self.model,
            "field": self.field,
            "seed": self.seed,
            "p_max": self.p_max,
            "q_max": self.q_max,
            "entries": [[p, q, v] for (p, q), v in sorted(self.entries.items())],
        }
        if self.ambient_dim is not None:
            d["ambient_dim"] = self.ambient_dim
        if self.holes:
            d["holes"] = [list(h) for h in self.holes]
        return d

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, d: dict) -> "BettiTable":
        return cls({(p, q): v for p, q, v in d["entries"]}, d["model"], d["field"], d.get("seed"),
                   d["p_max"], d["q_max"], d.get("ambient_dim"),
                   [tuple(h) for h in d.get("holes", [])])

    def render(self) -> str:
        """Betti diagram: columns p, rows q; ``-`` for zero, ``?`` for holes."""
        cols = list(range(self.p_max + 1))
        cells = {}
        for q in range(self.q_max + 1):
            for p in cols:
                v = self.entries.get((p, q))
                cells[p, q] = "?" if v is None else ("-" if v == 0 else str(v))
        w = max([len(c) for c in cells.values()] + [len(str(self.p_max))]) + 1
        lines = ["   " + "".join(str(p).rjust(w) for p in cols)]
        for q in range(self.q_max + 1):
            lines.append(f"{q}:".rjust(3) + "".join(cells[p, q].rjust(w) for p in cols))
        return "\n".join(lines)


def betti_table(P: Presentation, p_max: int, q_max: int = 3, *, seed=None,
                budget_mb: float = DEFAULT_BUDGET_MB) -> BettiTable:
    """All ``K_{p,q}`` with ``p <= p_max``, ``q <= q_max``.

    Each differential rank is computed once and shared by the two homology
    groups it touches.  A differential whose dense worst case exceeds
    ``budget_mb`` is not attempted; the cells depending on it become holes.
    """
    budget = budget_mb * 2 ** 20
    n = P.nvars
    p_max = min(p_max, n)
    ranks: dict = {}
    over: set = set()

    def drank(p, q):
        if p < 1 or p > n or q < 0:
            return 0
        if (p, q) in over:
            return None
        if (p, q) not in ranks:
            if _cell_bytes(P, p, q) > budget:
                over.add((p, q))
                return None
            ranks[p, q] = differential_rank(P, p, q)
        return ranks[p, q]

    entries = {}
    holes = []
    for q in range(q_max + 1):
        for p in range(p_max + 1):
            a = drank(p, q)
            b = drank(p + 1, q - 1)
            if a is None or b is None:
                holes.append((p, q))
                continue
            entries[p, q] = term_dim(P, p, q) - a - b
    if holes:
        log.warning("betti table for %s has %d holes (budget %.0f MB)", P.label, len(holes), budget_mb)
    return BettiTable(entries, P.label, str(P.field), seed, p_max, q_max, P.ambient_dim, holes)


def strand_euler_check(P: Presentation, table: BettiTable) -> list[tuple[int, int, int, bool]]:
    """Euler characteristic of every fully computed degree-``m`` strand.

    For each ``m`` whose cells ``(p, m - p)``, ``0 <= p <= min(m, r + 1)`` are
    all in the table, compares ``sum (-1)^p K_{p,m-p}`` with
    ``sum (-1)^p C(r + 1, p) dim R_{m-p}``.  Returns ``(m, lhs, rhs, ok)``.
    """
    n = P.nvars
    out = []
    for m in range(table.p_max + table.q_max + 1):
        ps = range(0, min(m, n) + 1)
        if not all(table.covers(p, m - p) for p in ps):
            continue
        lhs = sum((-1) ** p * table.entries[p, m - p] for p in ps)
        rhs = sum((-1) ** p * comb(n, p) * graded_piece(P, m - p).dim for p in ps)
        out.append((m, lhs, rhs, lhs == rhs))
    return out
