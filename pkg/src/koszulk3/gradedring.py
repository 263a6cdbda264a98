"""Graded pieces of a homogeneous coordinate ring, by linear algebra only.

A :class:`Presentation` is a list of homogeneous generators in ``r + 1``
variables.  The degree-``m`` piece of the ideal is the span of all products
``monomial * generator`` of total degree ``m``; echelonizing it (leftmost
pivots in graded-lex order) singles out the pivot monomials, and the
remaining monomials form the quotient basis of ``R_m``.

Polynomials are dicts ``{exponent tuple: coefficient}``.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
import warnings
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from math import comb
from pathlib import Path

from .exactla import FieldSpec, SparseMatrix, row_echelon

log = logging.getLogger(__name__)

Poly = dict  # {tuple[int, ...]: field element}


# --------------------------------------------------------------------------
# monomials


@lru_cache(maxsize=None)
def monomials(nvars: int, degree: int) -> tuple[tuple[int, ...], ...]:
    """All exponent vectors of the given degree, in lex-descending order.

    Index 0 is ``x0^degree``.  Within one degree this is graded lex.
    """
    if nvars == 0:
        return ((),) if degree == 0 else ()
    out = []
    for a in range(degree, -1, -1):
        for rest in monomials(nvars - 1, degree - a):
            out.append((a,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index(nvars: int, degree: int) -> dict:
    return {m: i for i, m in enumerate(monomials(nvars, degree))}


def add_exp(a, b):
    return tuple(x + y for x, y in zip(a, b))


def unit(nvars: int, i: int) -> tuple[int, ...]:
    e = [0] * nvars
    e[i] = 1
    return tuple(e)


def poly_degree(f: Poly) -> int:
    degs = {sum(e) for e in f}
    if len(degs) != 1:
        raise ValueError("polynomial is zero or not homogeneous")
    return degs.pop()


def poly_mul(f: Poly, g: Poly, F: FieldSpec) -> Poly:
    out: dict = {}
    for a, u in f.items():
        for b, v in g.items():
            e = add_exp(a, b)
            out[e] = F.add(out.get(e, F.zero()), F.mul(u, v))
    return {e: c for e, c in out.items() if c}


def poly_add(f: Poly, g: Poly, F: FieldSpec) -> Poly:
    out = dict(f)
    for e, c in g.items():
        out[e] = F.add(out.get(e, F.zero()), c)
    return {e: c for e, c in out.items() if c}


def poly_scale(f: Poly, c, F: FieldSpec) -> Poly:
    return {e: F.mul(v, c) for e, v in f.items() if F.mul(v, c)}


def substitute_linear(f: Poly, images: list[Poly], F: FieldSpec, nvars: int) -> Poly:
    """Replace variable ``i`` of ``f`` by the linear form ``images[i]``."""
    out: Poly = {}
    one = {(0,) * nvars: F.one()}
    pow_cache: dict = {}

    def power(i, k):
        key = (i, k)
        if key not in pow_cache:
            pow_cache[key] = one if k == 0 else poly_mul(power(i, k - 1), images[i], F)
        return pow_cache[key]

    for e, c in f.items():
        term = {(0,) * nvars: c}
        for i, k in enumerate(e):
            if k:
                term = poly_mul(term, power(i, k), F)
        out = poly_add(out, term, F)
    return out


def format_poly(f: Poly, names: list[str], F: FieldSpec) -> str:
    if not f:
        return "0"
    parts = []
    idx = monomial_index(len(names), poly_degree(f))
    for e in sorted(f, key=lambda m: idx[m]):
        c = f[e]
        if F.p is not None:
            c = c if c <= F.p // 2 else c - F.p
        c = Fraction(c)
        sign = "-" if c < 0 else "+"
        c = abs(c)
        mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
        if c == 1 and mono:
            body = mono
        else:
            body = f"{c}*{mono}" if mono else str(c)
        parts.append((sign, body))
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        s += f" {sign} {body}"
    return s


def parse_poly(text: str, names: list[str], F: FieldSpec) -> Poly:
    """Parse a polynomial string such as ``"x0*x2 - x1^2"``."""
    import sympy

    syms = sympy.symbols(names)
    local = {n: s for n, s in zip(names, syms)}
    expr = sympy.sympify(text.replace("^", "**"), locals=local)
    P = sympy.Poly(sympy.expand(expr), *syms)
    out: Poly = {}
    for e, c in P.terms():
        c = sympy.Rational(c)
        v = F(Fraction(int(c.p), int(c.q)))
        if v:
            out[tuple(int(x) for x in e)] = v
    return out


# --------------------------------------------------------------------------
# presentations


@dataclass(frozen=True, eq=False)
class Presentation:
    """Homogeneous ideal generators in ``r + 1`` variables."""

    ambient_dim: int
    generators: tuple
    field: FieldSpec
    label: str = ""
    variables: tuple = ()
    hilbert_hint: tuple | None = None
    meta: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        n = self.ambient_dim + 1
        if not self.variables:
            object.__setattr__(self, "variables", tuple(f"x{i}" for i in range(n)))
        if len(self.variables) != n:
            raise ValueError("variable count must be ambient_dim + 1")
        gens = []
        for g in self.generators:
            g = {tuple(e): c for e, c in dict(g).items() if c}
            if not g:
                raise ValueError("zero generator")
            if any(len(e) != n for e in g):
                raise ValueError("generator has wrong number of variables")
            d = poly_degree(g)
            if d < 1:
                raise ValueError("constant generator")
            gens.append(g)
        object.__setattr__(self, "generators", tuple(gens))
        object.__setattr__(self, "_cache", {})

    @property
    def nvars(self) -> int:
        return self.ambient_dim + 1

    @property
    def has_linear_generator(self) -> bool:
        return any(poly_degree(g) == 1 for g in self.generators)

    def to_json(self) -> dict:
        d = {
            "ambient_dim": self.ambient_dim,
            "variables": list(self.variables),
            "generators": [format_poly(g, list(self.variables), self.field) for g in self.generators],
            "field": str(self.field),
        }
        if self.label:
            d["label"] = self.label
        if self.hilbert_hint is not None:
            d["hilbert_hint"] = list(self.hilbert_hint)
        return d

    @classmethod
    def from_json(cls, doc: dict) -> "Presentation":
        F = FieldSpec.parse(doc.get("field", "gfp:65537"))
        r = int(doc["ambient_dim"])
        names = list(doc.get("variables") or [f"x{i}" for i in range(r + 1)])
        gens = [parse_poly(s, names, F) for s in doc.get("generators", [])]
        gens = [g for g in gens if g]
        hint = doc.get("hilbert_hint")
        return cls(r, tuple(gens), F, doc.get("label", ""), tuple(names),
                   tuple(hint) if hint is not None else None)

    def content_hash(self) -> str:
        """Hash of the ideal data (generators, field), independent of label."""
        doc = {
            "ambient_dim": self.ambient_dim,
            "field": str(self.field),
            "generators": [sorted((list(e), self.field.to_json(c)) for e, c in g.items())
                           for g in self.generators],
        }
        blob = json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()
        return hashlib.sha256(blob).hexdigest()


@dataclass(frozen=True)
class GradedPiece:
    """``R_m`` as a quotient of ``Sym^m V``.

    ``reduction[j]`` is the normal form of ambient monomial ``j``: a dict from
    quotient-basis position to coefficient.
    """

    degree: int
    ambient_monomial_count: int
    ideal_dim: int
    quotient_basis: tuple[int, ...]
    reduction: tuple[dict, ...]

    @property
    def dim(self) -> int:
        return self.ambient_monomial_count - self.ideal_dim

    def reduction_map(self, F: FieldSpec) -> SparseMatrix:
        """Matrix with one row per ambient monomial, columns the quotient basis."""
        return SparseMatrix(self.ambient_monomial_count, self.dim, F, [dict(r) for r in self.reduction])

    def to_json(self, F: FieldSpec) -> dict:
        return {
            "degree": self.degree,
            "ambient_monomial_count": self.ambient_monomial_count,
            "ideal_dim": self.ideal_dim,
            "quotient_basis": list(self.quotient_basis),
            "reduction": [[[j, F.to_json(v)] for j, v in sorted(r.items())] for r in self.reduction],
        }

    @classmethod
    def from_json(cls, d: dict, F: FieldSpec) -> "GradedPiece":
        return cls(d["degree"], d["ambient_monomial_count"], d["ideal_dim"],
                   tuple(d["quotient_basis"]),
                   tuple({j: F.from_json(v) for j, v in r} for r in d["reduction"]))


# --------------------------------------------------------------------------
# on-disk cache


def default_cache_dir() -> Path:
    env = os.environ.get("KOSZULK3_CACHE")
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(base) / "koszul"


class PieceCache:
    """JSON files keyed by (model hash, field, degree); atomic writes."""

    def __init__(self, root: str | os.PathLike):
        self.root = Path(root)

    def _path(self, P: Presentation, m: int) -> Path:
        return self.root / f"{P.content_hash()[:32]}_{str(P.field).replace(':', '')}_R{m}.json"

    def load(self, P: Presentation, m: int) -> GradedPiece | None:
        path = self._path(P, m)
        try:
            with open(path) as fh:
                return GradedPiece.from_json(json.load(fh), P.field)
        except (OSError, ValueError, KeyError):
            return None

    def store(self, P: Presentation, m: int, piece: GradedPiece) -> None:
        self.root.mkdir(parents=True, exist_ok=True)
        path = self._path(P, m)
        fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(piece.to_json(P.field), fh)
            os.replace(tmp, path)
        except BaseException:
            try:
                os.unlink(tmp)
            except OSError:
                pass
            raise


_cache: PieceCache | None = None


def set_cache(cache: PieceCache | str | os.PathLike | None) -> None:
    """Enable (or with ``None`` disable) the on-disk graded-piece cache."""
    global _cache
    if cache is None or isinstance(cache, PieceCache):
        _cache = cache
    else:
        _cache = PieceCache(cache)


# --------------------------------------------------------------------------
# degree pieces


def ideal_degree_piece(P: Presentation, m: int) -> tuple[list[int], SparseMatrix]:
    """Echelon basis of ``I_m`` inside ``Sym^m V``.

    Returns ``(pivots, rows)`` where ``rows`` is the reduced row echelon
    matrix over the degree-``m`` monomials (graded-lex order).
    """
    if m < 0:
        raise ValueError("degree must be non-negative")
    key = ("ideal", m)
    if key in P._cache:
        return P._cache[key]
    n = P.nvars
    F = P.field
    idx = monomial_index(n, m)
    rows = []
    if m >= 1:
        # x_i * I_{m-1} plus generators of degree exactly m
        prev_piv, prev = ideal_degree_piece(P, m - 1) if m >= 2 else ([], None)
        if prev is not None and prev.nrows:
            prev_monos = monomials(n, m - 1)
            for r in prev.rows():
                for i in range(n):
                    e_i = unit(n, i)
                    rows.append({idx[add_exp(prev_monos[j], e_i)]: v for j, v in r.items()})
        for g in P.generators:
            if poly_degree(g) == m:
                rows.append({idx[e]: c for e, c in g.items()})
    M = SparseMatrix(len(rows), len(idx), F, rows)
    result = row_echelon(M)
    P._cache[key] = result
    return result


def graded_piece(P: Presentation, m: int) -> GradedPiece:
    """``R_m = Sym^m V / I_m`` with its quotient basis and normal forms."""
    key = ("piece", m)
    if key in P._cache:
        return P._cache[key]
    if P.has_linear_generator and not P._cache.get("warned"):
        warnings.warn(f"presentation {P.label!r} has a linear generator; ambient space is not minimal",
                      stacklevel=2)
        P._cache["warned"] = True
    piece = _cache.load(P, m) if _cache is not None else None
    if piece is None:
        piece = _compute_piece(P, m)
        if _cache is not None:
            _cache.store(P, m, piece)
    P._cache[key] = piece
    return piece


def _compute_piece(P: Presentation, m: int) -> GradedPiece:
    F = P.field
    n = P.nvars
    N = comb(n - 1 + m, m)
    pivots, E = ideal_degree_piece(P, m)
    pivset = set(pivots)
    basis = tuple(j for j in range(N) if j not in pivset)
    pos = {j: a for a, j in enumerate(basis)}
    reduction: list[dict] = [{} for _ in range(N)]
    for j in basis:
        reduction[j] = {pos[j]: F.one()}
    # pivot monomial = -(non-pivot part of its echelon row)  mod I
    for c, r in zip(pivots, E.rows()):
        reduction[c] = {pos[j]: F.neg(v) for j, v in r.items() if j != c}
    return GradedPiece(m, N, len(pivots), basis, tuple(reduction))


def hilbert_function(P: Presentation, max_degree: int) -> list[int]:
    return [graded_piece(P, m).dim for m in range(max_degree + 1)]


def check_hilbert(P: Presentation, expected=None) -> list[tuple[int, int, int]]:
    """Compare ``dim R_m`` with a declared Hilbert function.

    Returns the list of mismatches ``(m, expected, computed)``; empty when
    everything agrees.  Uses ``P.hilbert_hint`` when ``expected`` is omitted.
    """
    expected = P.hilbert_hint if expected is None else expected
    if expected is None:
        return []
    bad = []
    for m, h in enumerate(expected):
        d = graded_piece(P, m).dim
        if d != h:
            bad.append((m, h, d))
    return bad


def mult_tensor(P: Presentation, a: int) -> list[list[dict]]:
    """Multiplication by each variable, ``R_a -> R_{a+1}``.

    ``T[i][s]`` is the normal form of ``x_i * b_s`` where ``b_s`` is the s-th
    quotient basis monomial of ``R_a``.
    """
    key = ("mult", a)
    if key in P._cache:
        return P._cache[key]
    n = P.nvars
    src = graded_piece(P, a)
    dst = graded_piece(P, a + 1)
    src_monos = monomials(n, a)
    idx = monomial_index(n, a + 1)
    T = []
    for i in range(n):
        e_i = unit(n, i)
        T.append([dst.reduction[idx[add_exp(src_monos[j], e_i)]] for j in src.quotient_basis])
    P._cache[key] = T
    return T


def mult_matrix(P: Presentation, a: int, i: int) -> SparseMatrix:
    """Matrix of multiplication by ``x_i`` (rows: basis of ``R_a``)."""
    T = mult_tensor(P, a)
    return SparseMatrix(len(T[i]), graded_piece(P, a + 1).dim, P.field, [dict(r) for r in T[i]])


def multiplication_map(P: Presentation, a: int) -> SparseMatrix:
    """``R_a (x) V -> R_{a+1}``; row ``s * n + i`` is ``b_s (x) x_i``."""
    T = mult_tensor(P, a)
    n = P.nvars
    rows = [dict(T[i][s]) for s in range(graded_piece(P, a).dim) for i in range(n)]
    return SparseMatrix(len(rows), graded_piece(P, a + 1).dim, P.field, rows)
