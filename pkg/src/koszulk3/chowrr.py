"""Truncated Chow ring of P^n, Chern characters and Riemann-Roch.

Classes are polynomials in the hyperplane class ``h`` with rational
coefficients, truncated above ``h^n``.  Bundles carry their Chern character;
Chern classes are produced from it only when asked for (Newton identities).
Exterior powers use the lambda-ring recursion with Adams operations.

The bundles of interest live on ``P = P(H^0(E)^*)`` attached to a K3 surface
of genus ``g = 2k - sigma``:

* ``Q'``: ``0 -> O(-2) -> H^0(E) (x) O(-1) -> H^0(L) (x) O -> Q' -> 0``
* ``S'``: ``0 -> O(-2) -> H^0(E) (x) O(-1) -> S' -> 0``
* ``L_j``: ``0``, ``O``, ``Q'`` for ``j < 0, 0, 1``, and for ``j >= 2`` the
  push-forward with resolution
  ``H^0(L^{j-1}) O(-2) -> H^0(E L^{j-1}) O(-1) -> H^0(L^j) O``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .models import lm_invariants_for


@dataclass(frozen=True)
class ChowClass:
    """``sum c_i h^i`` in ``A(P^n) = Q[h]/h^{n+1}``."""

    n: int
    coeffs: tuple

    def __post_init__(self):
        c = [Fraction(x) for x in self.coeffs][: self.n + 1]
        c += [Fraction(0)] * (self.n + 1 - len(c))
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def zero(cls, n):
        return cls(n, ())

    @classmethod
    def const(cls, n, c):
        return cls(n, (c,))

    @classmethod
    def exp(cls, n, a) -> "ChowClass":
        """``ch(O(a)) = e^{a h}``."""
        return cls(n, tuple(Fraction(a) ** j / factorial(j) for j in range(n + 1)))

    def __getitem__(self, j):
        return self.coeffs[j] if 0 <= j <= self.n else Fraction(0)

    def _check(self, other):
        if not isinstance(other, ChowClass):
            return ChowClass.const(self.n, other)
        if other.n != self.n:
            raise ValueError("classes live on different projective spaces")
        return other

    def __add__(self, other):
        other = self._check(other)
        return ChowClass(self.n, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return ChowClass(self.n, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        if not isinstance(other, ChowClass):
            return ChowClass(self.n, tuple(a * Fraction(other) for a in self.coeffs))
        other = self._check(other)
        out = [Fraction(0)] * (self.n + 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j in range(self.n + 1 - i):
                    out[i + j] += a * other.coeffs[j]
        return ChowClass(self.n, tuple(out))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = ChowClass.const(self.n, 1)
        for _ in range(e):
            out = out * self
        return out

    def adams(self, t: int) -> "ChowClass":
        """``psi^t`` scales the degree-``j`` part by ``t^j``."""
        return ChowClass(self.n, tuple(c * t ** j for j, c in enumerate(self.coeffs)))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __str__(self):
        terms = [f"{c}*h^{j}" if j else str(c) for j, c in enumerate(self.coeffs) if c]
        return " + ".join(terms) or "0"


@lru_cache(maxsize=None)
@lru_cache(maxsize=None)
def todd(n: int) -> ChowClass:
    """``td(P^n) = (h / (1 - e^{-h}))^{n+1}``."""
    f = [Fraction((-1) ** j, factorial(j + 1)) for j in range(n + 1)]
    inv = [Fraction(0)] * (n + 1)
    inv[0] = Fraction(1)
    for j in range(1, n + 1):
        inv[j] = -sum(f[i] * inv[j - i] for i in range(1, j + 1))
    return ChowClass(n, tuple(inv)) ** (n + 1)


@dataclass(frozen=True)
class BundleDescriptor:
    """A (virtual) bundle on ``P^n`` given by its Chern character."""

    rank: int
    ch: ChowClass
    provenance: str = ""

    def __post_init__(self):
        if self.ch[0] != self.rank:
            raise ValueError(f"rank {self.rank} disagrees with ch_0 = {self.ch[0]}")

    @property
    def n(self) -> int:
        return self.ch.n

    @classmethod
    def line(cls, n: int, a: int = 0) -> "BundleDescriptor":
        return cls(1, ChowClass.exp(n, a), f"O({a})")

    @classmethod
    def from_resolution(cls, n: int, terms, provenance: str = "") -> "BundleDescriptor":
        """Cokernel of a resolution ``... -> F_1 -> F_0``.

        ``terms[l]`` lists ``(multiplicity, twist)`` pairs making up ``F_l``;
        ``ch = sum_l (-1)^l ch(F_l)``.
        """
        ch = ChowClass.zero(n)
        for l, part in enumerate(terms):
            for mult, a in part:
                ch = ch + ChowClass.exp(n, a) * ((-1) ** l * mult)
        if not provenance:
            provenance = " <- ".join(
                " + ".join(f"{m}O({a})" for m, a in part) or "0" for part in terms)
        return cls(int(ch[0]), ch, provenance)

    def __add__(self, other):
        return BundleDescriptor(self.rank + other.rank, self.ch + other.ch,
                                f"({self.provenance}) + ({other.provenance})")

    def tensor(self, other: "BundleDescriptor") -> "BundleDescriptor":
        return BundleDescriptor(self.rank * other.rank, self.ch * other.ch,
                                f"({self.provenance}) (x) ({other.provenance})")

    def twist(self, a: int) -> "BundleDescriptor":
        if a == 0:
            return self
        return BundleDescriptor(self.rank, self.ch * ChowClass.exp(self.n, a),
                                f"({self.provenance})({a})")

    def chern_classes(self) -> list[Fraction]:
        """``c_0 .. c_n`` (coefficients of ``h^j``) from ch via Newton."""
        n = self.n
        p = [self.ch[j] * factorial(j) for j in range(n + 1)]
        c = [Fraction(1)] + [Fraction(0)] * n
        for j in range(1, n + 1):
            c[j] = sum((-1) ** (i - 1) * c[j - i] * p[i] for i in range(1, j + 1)) / j
        return c

    def chern_classes_int(self) -> list[int]:
        c = self.chern_classes()
        if any(x.denominator != 1 for x in c):
            raise ArithmeticError(f"non-integral Chern classes {c} for {self.provenance}")
        return [int(x) for x in c]


def euler_char(B: BundleDescriptor) -> int:
    """Hirzebruch-Riemann-Roch: top coefficient of ``ch(B) td(P^n)``."""
    chi = (B.ch * todd(B.n))[B.n]
    if chi.denominator != 1:
        raise ArithmeticError(f"non-integral Euler characteristic {chi} for {B.provenance}")
    return int(chi)


@lru_cache(maxsize=256)
def _lambda_series(B: BundleDescriptor) -> tuple[ChowClass, ...]:
    """``ch(wedge^m B)`` for ``m = 0 .. rank B``."""
    psi = [None] + [B.ch.adams(t) for t in range(1, B.rank + 1)]
    lam = [ChowClass.const(B.n, 1)]
    for m in range(1, B.rank + 1):
        acc = ChowClass.zero(B.n)
        for t in range(1, m + 1):
            acc = acc + lam[m - t] * psi[t] * (-1) ** (t + 1)
        lam.append(acc * Fraction(1, m))
    return tuple(lam)


def wedge_ch(B: BundleDescriptor, i: int) -> BundleDescriptor:
    """``ch(wedge^i B)`` from
    ``i ch(wedge^i) = sum_{t=1}^{i} (-1)^{t+1} ch(wedge^{i-t}) psi^t(ch B)``."""
    if i < 0 or i > B.rank:
        raise ValueError(f"wedge power {i} out of range for rank {B.rank}")
    return BundleDescriptor(comb(B.rank, i), _lambda_series(B)[i], f"wedge^{i}({B.provenance})")


def chi_line(n: int, a: int) -> int:
    """``chi(P^n, O(a))`` by the binomial formula (independent of HRR)."""
    num = 1
    for t in range(1, n + 1):
        num *= a + t
    return num // factorial(n)


# --------------------------------------------------------------------------
# Lazarsfeld-Mukai bundles on P(H^0(E)^*)


def h0_L(g: int, j: int) -> int:
    """``h^0(X, jL)`` on a K3 of genus ``g``."""
    if j < 0:
        return 0
    return 1 if j == 0 else 2 + j * j * (g - 1)


def h0_E_twist(g: int, k: int, m: int) -> int:
    """``h^0(E (x) L^m)``, ``m >= 0``, from Riemann-Roch on the K3
    (``c_1 = (2m+1)L``, ``c_2 = k + 1 + (m + m^2) L^2``, no higher cohomology)."""
    if m < 0:
        raise ValueError("m must be non-negative")
    return 4 + (g - 1) * (2 * m * m + 2 * m + 1) - (k + 1)


def q_prime(k: int, sigma: int) -> BundleDescriptor:
    lm = lm_invariants_for(k, sigma)
    return BundleDescriptor.from_resolution(
        lm.dim_P, [[(lm.r + 1, 0)], [(lm.e, -1)], [(1, -2)]], "Q'")


def s_prime(k: int, sigma: int) -> BundleDescriptor:
    lm = lm_invariants_for(k, sigma)
    return BundleDescriptor.from_resolution(lm.dim_P, [[(lm.e, -1)], [(1, -2)]], "S'")


def l_j(k: int, sigma: int, j: int) -> BundleDescriptor:
    """The subsheaf ``L_j`` of ``pi_{2*} pi_1^* L^j`` reached by sections."""
    lm = lm_invariants_for(k, sigma)
    n, g = lm.dim_P, lm.g
    if j < 0:
        return BundleDescriptor(0, ChowClass.zero(n), "0")
    if j == 0:
        return BundleDescriptor.line(n, 0)
    if j == 1:
        return q_prime(k, sigma)
    return BundleDescriptor.from_resolution(
        n, [[(h0_L(g, j), 0)], [(h0_E_twist(g, k, j - 1), -1)], [(h0_L(g, j - 1), -2)]], f"L_{j}")


def wedge_q_resolution(k: int, sigma: int, i: int) -> list[list[tuple[int, int]]]:
    """Terms ``F_l`` (``l = 0 .. i + 1``) of the linear resolution of
    ``wedge^i Q'``: ``F_l`` is ``wedge^{i-l} H^0(L) (x) S^l H^0(E)`` (``l <= i``)
    plus ``wedge^{i-l+1} H^0(L) (x) S^{l-2} H^0(E)`` (``l >= 2``), all ``O(-l)``."""
    lm = lm_invariants_for(k, sigma)
    V, e = lm.r + 1, lm.e
    sym = lambda d: comb(e + d - 1, d) if d >= 0 else 0  # noqa: E731
    terms = []
    for l in range(i + 2):
        m = 0
        if l <= i:
            m += comb(V, i - l) * sym(l)
        if l >= 2:
            m += comb(V, i - l + 1) * sym(l - 2)
        terms.append([(m, -l)] if m else [])
    return terms


def chi_from_resolution(n: int, terms) -> int:
    """Alternating sum of ``chi`` of the resolution terms, via the binomial
    formula for line bundles."""
    return sum((-1) ** l * m * chi_line(n, a) for l, part in enumerate(terms) for m, a in part)


# --------------------------------------------------------------------------
# reports


def _entry(claim, lhs, rhs, justification=""):
    d = {"claim": claim, "lhs": _js(lhs), "rhs": _js(rhs), "status": "pass" if lhs == rhs else "fail"}
    if justification:
        d["justification"] = justification
    return d


def _js(x):
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else str(x)
    if isinstance(x, (list, tuple)):
        return [_js(y) for y in x]
    return x


def _report(name, params, entries):
    return {"check": name, **params, "entries": entries,
            "status": "pass" if all(e["status"] == "pass" for e in entries) else "fail"}


def verify_theorem44_dims(k: int, sigma: int, j_max: int = 3) -> dict:
    """Dimension identities behind the base-change bijections.

    * ``chi(wedge^i Q') = C(r+1, i)`` for ``i <= k - sigma``; for odd genus
      and ``i = k``, ``chi = C(2k, k) - dim S^{k-1} H^0(E)`` and
      ``wedge^k Q' = O(k-1)``.
    * ``chi(wedge^i Q' (x) L_j) = C(r+1, i) h^0(jL)`` for ``i <= k-2-sigma``.
    * Both Euler characteristics by Riemann-Roch on ch and by the alternating
      sum over the linear resolution.
    """
    if k < 2:
        raise ValueError("need k >= 2")
    lm = lm_invariants_for(k, sigma)
    n, V, e = lm.dim_P, lm.r + 1, lm.e
    Q = q_prime(k, sigma)
    out = [_entry("rank Q' = k", Q.rank, k)]
    reg = "h0 = chi: wedge^i Q' is 0-regular (char 0 or > i)"
    for i in range(k + 1):
        W = wedge_ch(Q, i)
        chi = euler_char(W)
        res = wedge_q_resolution(k, sigma, i)
        out.append(_entry(f"chi(wedge^{i} Q') RR = resolution", chi, chi_from_resolution(n, res)))
        Wres = BundleDescriptor.from_resolution(n, res)
        out.append(_entry(f"ch(wedge^{i} Q') lambda-ring = resolution", list(W.ch.coeffs),
                          list(Wres.ch.coeffs)))
        if i <= k - sigma:
            out.append(_entry(f"chi(wedge^{i} Q') = C({V},{i})", chi, comb(V, i), reg))
        else:
            ker = comb(e + k - 2, k - 1)
            out.append(_entry(f"chi(wedge^{k} Q') = C({V},{k}) - dim S^{k-1}H0(E)", chi,
                              comb(V, k) - ker, reg))
    if sigma == 1:
        det = wedge_ch(Q, k)
        out.append(_entry(f"wedge^{k} Q' = O({k - 1})", list(det.ch.coeffs),
                          list(ChowClass.exp(n, k - 1).coeffs)))
        out.append(_entry(f"C({2 * k},{k}) = C({2 * k - 1},{k - 1}) + h0(P^{k}, O({k - 1}))",
                          comb(2 * k, k), comb(2 * k - 1, k - 1) + chi_line(k, k - 1)))
    for i in range(0, k - 2 - sigma + 1):
        W = wedge_ch(Q, i)
        for j in range(0, j_max + 1):
            T = W.tensor(l_j(k, sigma, j))
            out.append(_entry(f"chi(wedge^{i} Q' (x) L_{j}) = C({V},{i}) h0({j}L)",
                              euler_char(T), comb(V, i) * h0_L(lm.g, j),
                              "h0 = chi: linear resolution ending in O(-i-3), i+3 <= dim P"))
    return _report("thm44", {"k": k, "sigma": sigma}, out)


def verify_tango_constraints(k: int) -> dict:
    """Chern-class constraints for ``Q'`` of rank ``k`` on ``P^{k+1}``."""
    lm = lm_invariants_for(k, 0)
    n = lm.dim_P
    S = s_prime(k, 0)
    Q = q_prime(k, 0)
    out = [
        _entry("dim P = k + 1", n, k + 1),
        _entry("rank S' = k + 1", S.rank, k + 1),
        _entry("rank Q' = (r+1) - e + 1 = k", Q.rank, k),
        _entry("c1(S') = -(e-2)", S.chern_classes_int()[1], -(lm.e - 2)),
    ]
    W = wedge_ch(S, 2).twist(2)
    c = W.chern_classes_int()
    for j in range(k + 1, n + 1):
        out.append(_entry(f"c{j}(wedge^2 S' (x) O(2)) = 0", c[j], 0))
    cq = Q.chern_classes_int()
    for j in range(k + 1, n + 1):
        out.append(_entry(f"c{j}(Q') = 0", cq[j], 0))
    # Q' (+) S' is the trivial bundle H^0(L) (x) O
    out.append(_entry("ch(Q') + ch(S') = r + 1", list((Q.ch + S.ch).coeffs),
                      list(ChowClass.const(n, lm.r + 1).coeffs)))
    return _report("tango", {"k": k, "sigma": 0}, out)


def prop43_euler_shadow(k: int, sigma: int = 0) -> dict:
    """Alternating sum of ``ch(wedge^{k-j} Q' (x) L_j)``, ``j = 0..k``; zero
    when the complex is exact."""
    Q = q_prime(k, sigma)
    n = Q.n
    total = ChowClass.zero(n)
    chi = 0
    for j in range(k + 1):
        T = wedge_ch(Q, k - j).tensor(l_j(k, sigma, j))
        total = total + T.ch * (-1) ** j
        chi += (-1) ** j * euler_char(T)
    out = [_entry("sum (-1)^j ch(wedge^{k-j} Q' (x) L_j) = 0", list(total.coeffs), [0] * (n + 1)),
           _entry("sum (-1)^j chi(wedge^{k-j} Q' (x) L_j) = 0", chi, 0)]
    return _report("prop43-shadow", {"k": k, "sigma": sigma,
                                     "note": "needs char not dividing k+1"}, out)
