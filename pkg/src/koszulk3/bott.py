"""Borel-Weil-Bott on Grassmannians and partial flag varieties of quotients.

Conventions.  ``V`` has dimension ``n``.  A :class:`FlagSignature` with
quotient blocks ``(b_1, ..., b_s)`` describes flags of successive quotients
``V ->> Q_1 ->> ... `` read from the top: the first ``b_1`` weight entries
belong to the smallest quotient, the next ``b_2`` to the kernel of the next
step, ..., and the last ``n - sum(b)`` entries to the universal subbundle.

* Grassmannian of ``k``-dimensional quotients: blocks ``(k,)``; ``Q`` has
  weight ``(1, 0, .., 0 | 0, .., 0)`` and ``S^*`` has ``(0 .. | 0, .., -1)``.
* Incidence variety ``{(x, H)}`` over ``Grass_i(V)``: blocks ``(1, i - 1)``;
  the line block carries ``O_{P^r}(1)``.

Cohomology is computed by adding ``rho = (n-1, ..., 0)``, sorting, counting
inversions and subtracting ``rho``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

__all__ = [
    "FlagSignature", "BottResult", "bott_cohomology", "weyl_dim", "serre_dual",
    "canonical_weight", "wedge_Q_weight", "wedge_Sdual_weight", "verify_theorem25_terms",
    "parse_weight", "verify_remark26_dims",
]


@dataclass(frozen=True)
class FlagSignature:
    n: int
    blocks: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))
        if any(b <= 0 for b in self.blocks):
            raise ValueError("block sizes must be positive")
        if sum(self.blocks) > self.n:
            raise ValueError("blocks exceed dim V")

    @classmethod
    def grassmannian(cls, n: int, k: int) -> "FlagSignature":
        return cls(n, (k,))

    @classmethod
    def incidence(cls, n: int, i: int) -> "FlagSignature":
        """The incidence variety over ``Grass_i(V)`` (a ``P^{i-1}``-bundle)."""
        return cls(n, (1, i - 1)) if i > 1 else cls(n, (1,))

    @property
    def segments(self) -> tuple[int, ...]:
        """All block sizes including the subbundle block (possibly 0)."""
        return self.blocks + (self.n - sum(self.blocks),)

    @property
    def dimension(self) -> int:
        seg = self.segments
        return sum(seg[a] * seg[b] for a in range(len(seg)) for b in range(a + 1, len(seg)))

    def split(self, w) -> list[tuple[int, ...]]:
        out, pos = [], 0
        for b in self.segments:
            out.append(tuple(w[pos:pos + b]))
            pos += b
        return out

    def validate(self, w) -> tuple[int, ...]:
        w = tuple(int(x) for x in w)
        if len(w) != self.n:
            raise ValueError(f"weight has length {len(w)}, expected {self.n}")
        for seg in self.split(w):
            if any(a < b for a, b in zip(seg, seg[1:])):
                raise ValueError(f"weight {w} is not dominant within block {seg}")
        return w


@dataclass(frozen=True)
class BottResult:
    """Cohomology of an irreducible homogeneous bundle.

    ``degree is None`` means all cohomology vanishes.
    """

    degree: int | None
    weight: tuple[int, ...] | None
    dim: int

    @property
    def zero(self) -> bool:
        return self.degree is None

    def to_json(self) -> dict:
        if self.zero:
            return {"zero": True}
        return {"degree": self.degree, "weight": list(self.weight), "dim": self.dim}


def weyl_dim(weight, n: int | None = None) -> int:
    """Dimension of the irreducible ``GL_n`` representation of highest weight
    ``weight``, ``prod_{i<j} (l_i - l_j + j - i) / (j - i)``."""
    lam = [int(x) for x in weight]
    if n is not None and len(lam) != n:
        raise ValueError(f"weight has length {len(lam)}, expected {n}")
    if any(a < b for a, b in zip(lam, lam[1:])):
        raise ValueError(f"weight {tuple(lam)} is not dominant")
    num, den = 1, 1
    m = len(lam)
    for i in range(m):
        for j in range(i + 1, m):
            num *= lam[i] - lam[j] + j - i
            den *= j - i
    return num // den


def bott_cohomology(sig: FlagSignature, w) -> BottResult:
    w = sig.validate(w)
    n = sig.n
    v = [w[i] + n - 1 - i for i in range(n)]
    if len(set(v)) < n:
        return BottResult(None, None, 0)
    inv = sum(1 for a in range(n) for b in range(a + 1, n) if v[a] < v[b])
    s = sorted(v, reverse=True)
    lam = tuple(s[i] - (n - 1 - i) for i in range(n))
    return BottResult(inv, lam, weyl_dim(lam))


def canonical_weight(sig: FlagSignature) -> tuple[int, ...]:
    """Weight of the canonical bundle: on each block, (#entries before) minus
    (#entries after)."""
    out, before = [], 0
    for b in sig.segments:
        after = sig.n - before - b
        out += [before - after] * b
        before += b
    return tuple(out)


def dual_weight(sig: FlagSignature, w) -> tuple[int, ...]:
    out = []
    for seg in sig.split(tuple(w)):
        out += [-x for x in reversed(seg)]
    return tuple(out)


def serre_dual(sig: FlagSignature, w) -> tuple[int, ...]:
    """Weight of ``F^* (x) K`` for the bundle ``F`` of weight ``w``."""
    K = canonical_weight(sig)
    return tuple(a + b for a, b in zip(dual_weight(sig, w), K))


def wedge_Q_weight(n: int, k: int, i: int) -> tuple[int, ...]:
    """``wedge^i Q`` on ``Grass_k(V)``."""
    if not 0 <= i <= k:
        raise ValueError("need 0 <= i <= k")
    return (1,) * i + (0,) * (n - i)


def wedge_Sdual_weight(n: int, k: int, t: int) -> tuple[int, ...]:
    """``wedge^t S^*`` on ``Grass_k(V)`` (``S`` of rank ``n - k``)."""
    if not 0 <= t <= n - k:
        raise ValueError("need 0 <= t <= n - k")
    return (0,) * (n - t) + (-1,) * t


def parse_weight(text: str) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """``"1,1,0|0,0,0,0"`` -> (weight, block sizes before the last ``|``)."""
    parts = [p for p in text.replace(" ", "").split("|")]
    segs = [tuple(int(x) for x in p.split(",") if x != "") for p in parts]
    w = tuple(x for s in segs for x in s)
    return w, tuple(len(s) for s in segs[:-1])


# --------------------------------------------------------------------------
# term-level check of the geometric Koszul complex


def _chi_P(r: int, a: int) -> int:
    """``chi(P^r, O(a)) = C(r + a, r)`` as a polynomial in ``a``."""
    num = 1
    for t in range(1, r + 1):
        num *= a + t
    den = 1
    for t in range(1, r + 1):
        den *= t
    return num // den


def verify_theorem25_terms(i: int, r: int) -> dict:
    """Cohomology of every term of the geometric Koszul complex on
    ``P^r x Grass_i(V)``.

    Product terms ``K_j`` (``i <= j <= r + 1``) are
    ``O(-j) (x) wedge^{j-i} S (x) det S^{-1} = O(-j) (x) wedge^{r+1-j} S^*``;
    their Grassmannian cohomology must sit in degree 0 with dimension
    ``C(r + 1, j)``.

    Incidence terms ``K_j = O(-j) (x) wedge^j Q`` (``0 <= j < i``) live on the
    incidence variety.  ``wedge^j Q`` is filtered with graded pieces
    ``wedge^j K`` and ``wedge^{j-1} K (x) O(1)``, ``K`` the rank ``i - 1``
    kernel of ``Q ->> O(1)``.  Each piece is pushed to ``P^r`` fibrewise (Bott
    on ``Grass_{i-1}`` of an ``(n-1)``-space); if every piece sits in degree 0
    the pushed-forward rank is exact, otherwise only an Euler characteristic
    is certified.  The global Euler characteristic over the whole incidence
    variety (Bott on the flag) is compared with ``C(n, j) chi(P^r, O(-j))``.
    """
    if not 1 <= i <= r:
        raise ValueError("need 1 <= i <= r")
    n = r + 1
    grass = FlagSignature.grassmannian(n, i)
    terms = []
    for j in range(i, n + 1):
        t = n - j
        w = wedge_Sdual_weight(n, i, t)
        res = bott_cohomology(grass, w)
        expected = comb(n, j)
        ok = res.degree == 0 and res.dim == expected
        terms.append({"j": j, "kind": "product", "twist": -j, "weight": list(w),
                      "bott": res.to_json(), "expected_dim": expected,
                      "status": "pass" if ok else "fail"})
    flag = FlagSignature.incidence(n, i)
    fibre = FlagSignature.grassmannian(n - 1, i - 1) if i > 1 else None
    for j in range(0, i):
        pieces = []
        # (line twist from O(-j) and the O(1) factor, wedge power of K)
        for line, a in ((0, j), (1, j - 1)):
            if a < 0 or a > i - 1:
                continue
            if fibre is not None:
                fw = (1,) * a + (0,) * (n - 1 - a)
                rel = bott_cohomology(fibre, fw)
            else:
                rel = BottResult(0, (), 1) if a == 0 else BottResult(None, None, 0)
            gw = (line - j,) + (1,) * a + (0,) * (n - 1 - a)
            glob = bott_cohomology(flag, gw)
            pieces.append({"line_twist": line - j, "wedge_K": a, "relative": rel.to_json(),
                           "global": glob.to_json()})
        rel_degs = {p["relative"].get("degree") for p in pieces if not p["relative"].get("zero")}
        rel_rank = sum(p["relative"].get("dim", 0) for p in pieces)
        chi_glob = sum((-1) ** p["global"]["degree"] * p["global"]["dim"]
                       for p in pieces if not p["global"].get("zero"))
        chi_rr = comb(n, j) * _chi_P(r, -j)
        concentrated = rel_degs <= {0}
        ok = chi_glob == chi_rr and (not concentrated or rel_rank == comb(n, j))
        terms.append({"j": j, "kind": "incidence", "twist": -j, "pieces": pieces,
                      "concentrated": concentrated,
                      "pushforward_rank": rel_rank if concentrated else None,
                      "expected_dim": comb(n, j), "chi_bott": chi_glob, "chi_rr": chi_rr,
                      "certified": "exact" if concentrated else "euler-only",
                      "status": "pass" if ok else "fail"})
    terms.sort(key=lambda t: t["j"])
    product_ok = all(t["status"] == "pass" for t in terms if t["kind"] == "product")
    return {"claim": "thm25-terms", "i": i, "r": r, "terms": terms,
            "product_terms_green": product_ok,
            "all_green": all(t["status"] == "pass" for t in terms)}


def verify_remark26_dims(i: int, r: int, k: int, a: int) -> dict:
    """Dimension check for restricting ``O(a) (x) wedge^k Q`` from
    ``P^r x Grass_i`` to the incidence variety, ``k <= i - 1``, ``a >= 0``.

    Left: ``h^0(O(a)) * C(n, k)``.  Right: Euler characteristic on ``P^r`` of
    the pushed-forward pieces ``wedge^k W (a)`` and ``wedge^{k-1} W (a + 1)``,
    ``W = Omega(1)``, via Riemann-Roch.
    """
    from .chowrr import BundleDescriptor, euler_char, wedge_ch

    if not (0 <= k <= i - 1 and a >= 0):
        raise ValueError("need 0 <= k <= i - 1 and a >= 0")
    n = r + 1
    W = BundleDescriptor.from_resolution(r, [[(n, 0)], [(1, 1)]], "Omega(1)")
    rhs = euler_char(wedge_ch(W, k).twist(a))
    if k >= 1:
        rhs += euler_char(wedge_ch(W, k - 1).twist(a + 1))
    lhs = _chi_P(r, a) * comb(n, k)
    return {"claim": "rem26-dims", "i": i, "r": r, "k": k, "a": a, "lhs": lhs, "rhs": rhs,
            "status": "pass" if lhs == rhs else "fail"}
