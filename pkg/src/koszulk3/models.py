"""Explicit varieties: rational normal curves, Veronese surfaces, K3 models.

K3 surfaces of genus ``g`` come in the following flavours:

* ``ci_k3(2, 3)`` -- quadric and cubic in P^4 (g = 4)
* ``ci_k3(2, 2, 2)`` -- three quadrics in P^5 (g = 5)
* ``mukai_k3(6)`` -- G(2,5) cut by a random P^6 and one quadric
* ``mukai_k3(8)`` -- G(2,6) cut by a random P^8

All random coefficients come from a SplitMix64 stream seeded by
``ModelSpec.seed``, so a (kind, field, seed) triple fixes the model.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field, replace
from itertools import combinations
from math import comb

from .exactla import FieldSpec
from .gradedring import (Presentation, check_hilbert, monomials, poly_add, poly_degree,
                         poly_mul, substitute_linear, unit)

MASK64 = (1 << 64) - 1

# coefficient range for random models over QQ
QQ_RANGE = 16


class DegenerateModelError(RuntimeError):
    """A random choice produced a special model; regenerate with another seed."""


class SplitMix64:
    """The SplitMix64 generator (Steele, Lea, Flood), 64-bit outputs."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform integer in ``[0, bound)`` by rejection."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - (1 << 64) % bound
        while True:
            x = self.next()
            if x < limit:
                return x % bound

    def element(self, F: FieldSpec):
        if F.p is not None:
            return self.below(F.p)
        return F(self.below(2 * QQ_RANGE + 1) - QQ_RANGE)


def random_form(rng: SplitMix64, F: FieldSpec, nvars: int, degree: int) -> dict:
    f = {}
    for e in monomials(nvars, degree):
        c = rng.element(F)
        if c:
            f[e] = c
    return f


# --------------------------------------------------------------------------
# model specifications

KINDS = {
    "rnc": "rational normal curve of degree d in P^d (Eagon-Northcott test case)",
    "veronese": "degree-d Veronese embedding of P^n",
    "ci_k3": "complete-intersection K3: (2,3) in P^4 (g=4, k=2) or (2,2,2) in P^5 (g=5, k=3, odd genus)",
    "mukai_k3": "Mukai K3 model: genus 6 (k=3) or genus 8 (k=4), even genus",
    "hyperplane_section": "canonical curve obtained as a hyperplane section of a K3 model",
}

_CI_GENUS = {(2, 3): 4, (2, 2, 2): 5}


@dataclass(frozen=True)
class ModelSpec:
    kind: str
    params: tuple = ()
    field: FieldSpec = dc_field(default_factory=FieldSpec)
    seed: int = 0
    parent: "ModelSpec | None" = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown model kind {self.kind!r}")
        object.__setattr__(self, "params", tuple(self.params))
        if self.kind == "ci_k3" and tuple(sorted(self.params)) not in _CI_GENUS:
            raise ValueError("ci_k3 supports degrees (2,3) and (2,2,2)")
        if self.kind == "mukai_k3" and self.params not in ((6,), (8,)):
            raise ValueError("mukai_k3 supports genus 6 and 8")
        if self.kind == "hyperplane_section" and (self.parent is None or not self.parent.is_k3):
            raise ValueError("hyperplane_section needs a K3 parent")

    @classmethod
    def parse(cls, text: str, field: FieldSpec | None = None, seed: int = 0) -> "ModelSpec":
        """``rnc:3``, ``veronese:2,2``, ``ci_k3:2,3``, ``mukai_k3:6``, ``k3:6``,
        ``section:mukai_k3:6`` ..."""
        field = field or FieldSpec()
        t = text.strip().lower()
        if t.startswith(("section:", "hyperplane_section:")):
            parent = cls.parse(t.split(":", 1)[1], field, seed)
            return cls("hyperplane_section", (), field, seed, parent)
        kind, _, rest = t.partition(":")
        params = tuple(int(x) for x in rest.split(",") if x) if rest else ()
        if kind == "k3":
            g = params[0]
            return cls.for_genus(g, field, seed)
        return cls(kind, params, field, seed)

    @classmethod
    def for_genus(cls, g: int, field: FieldSpec | None = None, seed: int = 0) -> "ModelSpec":
        field = field or FieldSpec()
        table = {4: ("ci_k3", (2, 3)), 5: ("ci_k3", (2, 2, 2)), 6: ("mukai_k3", (6,)),
                 8: ("mukai_k3", (8,))}
        if g not in table:
            raise ValueError(f"no bundled K3 model of genus {g}")
        kind, params = table[g]
        return cls(kind, params, field, seed)

    def with_seed(self, seed: int) -> "ModelSpec":
        parent = self.parent.with_seed(seed) if self.parent else None
        return replace(self, seed=seed, parent=parent)

    def with_field(self, field: FieldSpec) -> "ModelSpec":
        parent = self.parent.with_field(field) if self.parent else None
        return replace(self, field=field, parent=parent)

    @property
    def is_k3(self) -> bool:
        return self.kind in ("ci_k3", "mukai_k3")

    @property
    def genus(self) -> int | None:
        if self.kind == "ci_k3":
            return _CI_GENUS[tuple(sorted(self.params))]
        if self.kind == "mukai_k3":
            return self.params[0]
        if self.kind == "hyperplane_section":
            return self.parent.genus
        return None

    @property
    def sigma(self) -> int | None:
        g = self.genus
        return None if g is None else g % 2

    @property
    def k(self) -> int | None:
        g = self.genus
        return None if g is None else (g + g % 2) // 2

    @property
    def ambient_dim(self) -> int:
        if self.kind == "rnc":
            return self.params[0]
        if self.kind == "veronese":
            n, d = self.params
            return comb(n + d, d) - 1
        if self.kind == "hyperplane_section":
            return self.parent.ambient_dim - 1
        return self.genus

    @property
    def label(self) -> str:
        if self.kind == "hyperplane_section":
            return f"section({self.parent.label})"
        return f"{self.kind}({','.join(map(str, self.params))})"

    def hilbert(self, max_degree: int = 3) -> list[int]:
        """Declared Hilbert function ``h^0(mL)``, ``m = 0..max_degree``."""
        out = []
        for m in range(max_degree + 1):
            if self.kind == "rnc":
                out.append(self.params[0] * m + 1)
            elif self.kind == "veronese":
                n, d = self.params
                out.append(comb(n + d * m, n))
            elif self.is_k3:
                out.append(1 if m == 0 else 2 + m * m * (self.genus - 1))
            else:
                g = self.genus
                out.append(1 if m == 0 else g if m == 1 else (2 * m - 1) * (g - 1))
        return out


# --------------------------------------------------------------------------
# ideals


def plucker_relations(m: int, F: FieldSpec) -> tuple[list[tuple[int, int]], list[dict]]:
    """Three-term Plucker quadrics of G(2, m) in ``C(m, 2)`` coordinates.

    Returns the coordinate labels ``(i, j)``, ``i < j``, and one quadric
    ``p_ij p_kl - p_ik p_jl + p_il p_jk`` per 4-subset ``i < j < k < l``.
    """
    coords = list(combinations(range(m), 2))
    pos = {c: a for a, c in enumerate(coords)}
    N = len(coords)

    def mono(a, b):
        e = [0] * N
        e[pos[a]] += 1
        e[pos[b]] += 1
        return tuple(e)

    rels = []
    one, minus = F.one(), F.neg(F.one())
    for i, j, k, l in combinations(range(m), 4):
        f = {}
        for e, c in ((mono((i, j), (k, l)), one), (mono((i, k), (j, l)), minus),
                     (mono((i, l), (j, k)), one)):
            f[e] = F.add(f.get(e, F.zero()), c)
        rels.append(f)
    return coords, rels


def _rnc_ideal(d: int, F: FieldSpec) -> list[dict]:
    """2x2 minors of [[x0 .. x_{d-1}], [x1 .. x_d]]."""
    n = d + 1
    gens = []
    for a, b in combinations(range(d), 2):
        # x_a * x_{b+1} - x_{a+1} * x_b
        f = poly_add({tuple(u + v for u, v in zip(unit(n, a), unit(n, b + 1))): F.one()},
                     {tuple(u + v for u, v in zip(unit(n, a + 1), unit(n, b))): F.neg(F.one())}, F)
        gens.append(f)
    return gens


def _veronese_ideal(nv: int, d: int, F: FieldSpec) -> list[dict]:
    """Binomial quadrics ``y_a y_b - y_c y_e`` with ``a + b = c + e``, one
    basis per fibre of the multiplication map."""
    mons = monomials(nv + 1, d)
    N = len(mons)
    classes: dict = {}
    for a in range(N):
        for b in range(a, N):
            s = tuple(u + v for u, v in zip(mons[a], mons[b]))
            classes.setdefault(s, []).append((a, b))
    gens = []
    for pairs in classes.values():
        a0, b0 = pairs[0]
        for a, b in pairs[1:]:
            f = poly_add({tuple(u + v for u, v in zip(unit(N, a0), unit(N, b0))): F.one()},
                         {tuple(u + v for u, v in zip(unit(N, a), unit(N, b))): F.neg(F.one())}, F)
            gens.append(f)
    return gens


def _linear_slice(gens: list[dict], nv_total: int, nv_keep: int, rng: SplitMix64, F: FieldSpec):
    """Restrict to the linear subspace where the last ``nv_total - nv_keep``
    coordinates are random linear forms in the first ``nv_keep``."""
    images = [{unit(nv_keep, i): F.one()} for i in range(nv_keep)]
    for _ in range(nv_total - nv_keep):
        images.append({unit(nv_keep, i): c for i in range(nv_keep)
                       if (c := rng.element(F))})
    out = []
    for g in gens:
        h = substitute_linear(g, images, F, nv_keep)
        if not h:
            raise DegenerateModelError("a generator vanished on the random slice; regenerate seed")
        out.append(h)
    return out


def _raw_build(spec: ModelSpec) -> Presentation:
    F = spec.field
    rng = SplitMix64(spec.seed)
    kind = spec.kind
    g = spec.genus
    if kind == "rnc":
        d = spec.params[0]
        gens = _rnc_ideal(d, F)
        return Presentation(d, tuple(gens), F, spec.label)
    if kind == "veronese":
        nv, d = spec.params
        gens = _veronese_ideal(nv, d, F)
        return Presentation(spec.ambient_dim, tuple(gens), F, spec.label)
    if kind == "ci_k3":
        r = g
        gens = [random_form(rng, F, r + 1, deg) for deg in sorted(spec.params)]
        if any(not f for f in gens):
            raise DegenerateModelError("random form is zero; regenerate seed")
        return Presentation(r, tuple(gens), F, spec.label)
    if kind == "mukai_k3":
        m = {6: 5, 8: 6}[g]
        _, rels = plucker_relations(m, F)
        gens = _linear_slice(rels, comb(m, 2), g + 1, rng, F)
        if g == 6:
            q = random_form(rng, F, g + 1, 2)
            if not q:
                raise DegenerateModelError("random quadric is zero; regenerate seed")
            gens.append(q)
        return Presentation(g, tuple(gens), F, spec.label)
    if kind == "hyperplane_section":
        parent = build(spec.parent)
        return hyperplane_section(parent, spec.seed, label=spec.label)
    raise ValueError(kind)


def build(spec: ModelSpec) -> Presentation:
    """Construct the model and check its Hilbert function in degrees <= 3.

    Raises :class:`DegenerateModelError` on mismatch.
    """
    P = _raw_build(spec)
    h = spec.hilbert(3)
    bad = check_hilbert(P, h)
    if bad:
        raise DegenerateModelError(
            f"{spec.label} seed {spec.seed}: Hilbert function mismatch "
            + ", ".join(f"h({m}) expected {a} got {b}" for m, a, b in bad)
            + "; regenerate seed")
    hint = tuple(spec.hilbert(4))
    return Presentation(P.ambient_dim, P.generators, P.field, P.label, P.variables, hint,
                        {"kind": spec.kind, "params": list(spec.params), "seed": spec.seed,
                         "genus": spec.genus})


def hyperplane_section(P: Presentation, seed: int, label: str | None = None) -> Presentation:
    """Intersect with a random hyperplane ``x_r = sum a_i x_i``.

    The last variable is eliminated, so the result lives in ``r`` variables.
    Zero or duplicate generators after substitution are dropped.
    """
    F = P.field
    n = P.nvars
    rng = SplitMix64(seed ^ 0x5EC7105EC7105EC7)
    images = [{unit(n - 1, i): F.one()} for i in range(n - 1)]
    images.append({unit(n - 1, i): c for i in range(n - 1) if (c := rng.element(F))})
    gens = []
    for g in P.generators:
        h = substitute_linear(g, images, F, n - 1)
        if h:
            gens.append(h)
    if not gens and P.generators:
        raise DegenerateModelError("hyperplane section killed every generator; regenerate seed")
    C = Presentation(P.ambient_dim - 1, tuple(gens), F, label or f"section({P.label})")
    genus = P.meta.get("genus")
    if genus is not None:
        expected = [1, genus] + [(2 * m - 1) * (genus - 1) for m in range(2, 4)]
        bad = check_hilbert(C, expected)
        if bad:
            raise DegenerateModelError(f"hyperplane section is degenerate {bad}; regenerate seed")
        C = Presentation(C.ambient_dim, C.generators, F, C.label, C.variables,
                         tuple(expected + [7 * (genus - 1)]), {"genus": genus, "section_seed": seed})
    return C


def build_with_retry(spec: ModelSpec, attempts: int = 8) -> tuple[Presentation, int]:
    """Build, moving to ``seed + 1, seed + 2, ...`` on degenerate draws.

    Returns the presentation and the seed that worked.
    """
    last = None
    for t in range(attempts):
        s = (spec.seed + t) & MASK64
        try:
            return build(spec.with_seed(s)), s
        except DegenerateModelError as exc:
            last = exc
    raise last


# --------------------------------------------------------------------------
# Lazarsfeld-Mukai numerology


@dataclass(frozen=True)
class LMInvariants:
    """Integers attached to the rank-2 Lazarsfeld-Mukai bundle ``E``.

    ``e = h^0(E) = h^0(A) + h^1(A)`` for a minimal pencil ``A`` of degree
    ``k + 1`` on a hyperplane-section curve; ``P = P(H^0(E)^*)`` has
    dimension ``e - 1``; ``Q'`` has rank ``k`` and ``S'`` rank ``dim P``.
    """

    g: int
    k: int
    sigma: int
    r: int
    pencil_degree: int
    h0_A: int
    h1_A: int
    e: int
    dim_P: int
    rank_Q: int
    rank_S: int
    c2_E: int
    span_dim: int  # a section's k+1 zeros span a (k-1)-plane

    def to_json(self) -> dict:
        return dict(self.__dict__)


def lm_invariants_for(k: int, sigma: int) -> LMInvariants:
    if sigma not in (0, 1) or k < 1:
        raise ValueError("need k >= 1 and sigma in {0, 1}")
    g = 2 * k - sigma
    h0A = 2
    h1A = g - k  # Riemann-Roch: h^0 - h^1 = (k + 1) + 1 - g
    e = h0A + h1A
    return LMInvariants(g=g, k=k, sigma=sigma, r=g, pencil_degree=k + 1, h0_A=h0A, h1_A=h1A,
                        e=e, dim_P=e - 1, rank_Q=(g + 1) - e + 1, rank_S=e - 1,
                        c2_E=k + 1, span_dim=k - 1)


def lm_invariants(spec: ModelSpec) -> LMInvariants:
    if not spec.is_k3:
        raise ValueError(f"{spec.kind} is not a K3 model")
    return lm_invariants_for(spec.k, spec.sigma)


def model_catalog() -> list[dict]:
    """Bundled models and the role each plays in the checks."""
    return [
        {"model": "rnc:d", "role": KINDS["rnc"]},
        {"model": "veronese:n,d", "role": KINDS["veronese"]},
        {"model": "ci_k3:2,3", "genus": 4, "k": 2, "sigma": 0,
         "role": "k=2 case of K_{k-2,2}=0 and K_{k,1}=0"},
        {"model": "ci_k3:2,2,2", "genus": 5, "k": 3, "sigma": 1,
         "role": "odd genus bookkeeping for the kernel complex"},
        {"model": "mukai_k3:6", "genus": 6, "k": 3, "sigma": 0,
         "role": "k=3: K_{1,2}=0, K_{2,1}=5, K_{3,1}=0"},
        {"model": "mukai_k3:8", "genus": 8, "k": 4, "sigma": 0,
         "role": "k=4: K_{2,2}=0, K_{3,1}=21, K_{4,1}=0"},
        {"model": "section:<k3 model>", "role": KINDS["hyperplane_section"]},
    ]
