"""Named reproductions of the K3 syzygy statements on explicit models.

Every report lists ``(assertion, expected, computed, status)`` rows.  A
failing row on a K3 model is tagged ``special-member-candidate``: the
statements concern general members, so one failing seed says something about
that member, not about the statement.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field as dc_field
from math import comb

from .chowrr import BundleDescriptor, euler_char, q_prime, wedge_ch
from .exactla import FieldSpec
from .gradedring import Presentation
from .koszul import BettiTable, betti_table, kpq_dim
from .models import ModelSpec, build_with_retry, hyperplane_section, lm_invariants_for

THM45_MODELS = {2: ("ci_k3", (2, 3)), 3: ("mukai_k3", (6,)), 4: ("mukai_k3", (8,))}


@dataclass
class VerificationReport:
    claim: str
    model: str
    field: str
    seeds: list
    assertions: list = dc_field(default_factory=list)
    data: dict = dc_field(default_factory=dict)
    wall_clock: float = 0.0

    def add(self, assertion: str, expected, computed, seed=None, on_fail="fail"):
        status = "pass" if expected == computed else on_fail
        row = {"assertion": assertion, "expected": expected, "computed": computed, "status": status}
        if seed is not None:
            row["seed"] = seed
        self.assertions.append(row)
        return status == "pass"

    @property
    def passed(self) -> bool:
        return all(a["status"] == "pass" for a in self.assertions)

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def failing_seeds(self) -> list:
        return sorted({a.get("seed") for a in self.assertions if a["status"] != "pass"} - {None})

    def to_json(self) -> dict:
        return {"claim": self.claim, "model": self.model, "field": self.field, "seeds": self.seeds,
                "status": self.status, "assertions": self.assertions, "data": self.data,
                "wall_clock": round(self.wall_clock, 3)}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1)


def _check_characteristic(field: FieldSpec, k: int):
    p = field.characteristic
    if p and (p <= k or (k + 1) % p == 0):
        raise ValueError(f"characteristic {p} must be 0 or exceed {k} and not divide {k + 1}")


def verify_theorem45(k: int, field: FieldSpec | None = None, seeds=(0,)) -> VerificationReport:
    """``K_{k-2,2} = 0``, ``K_{k-1,1} = C(2k-1, k-2)`` and ``K_{k,1} = 0`` on the
    even-genus model with ``g = 2k``."""
    if k not in THM45_MODELS:
        raise ValueError("k must be 2, 3 or 4")
    field = field or FieldSpec()
    _check_characteristic(field, k)
    kind, params = THM45_MODELS[k]
    t0 = time.perf_counter()
    rep = VerificationReport(f"thm45-k{k}", f"{kind}({','.join(map(str, params))})", str(field),
                             list(seeds))
    expected_mid = comb(2 * k - 1, k - 2)
    used = {}
    for s in seeds:
        P, s_used = build_with_retry(ModelSpec(kind, params, field, s))
        used[s] = s_used
        tag = "special-member-candidate"
        rep.add(f"K_{{{k - 2},2}} = 0", 0, kpq_dim(P, k - 2, 2), s, tag)
        rep.add(f"K_{{{k - 1},1}} = C({2 * k - 1},{k - 2}) = dim S^{k - 2} H0(E)", expected_mid,
                kpq_dim(P, k - 1, 1), s, tag)
        rep.add(f"K_{{{k},1}} = 0", 0, kpq_dim(P, k, 1), s, tag)
    rep.data["seeds_used"] = {str(a): b for a, b in used.items()}
    rep.data["lm_invariants"] = lm_invariants_for(k, 0).to_json()
    rep.wall_clock = time.perf_counter() - t0
    return rep


def verify_remark46(field: FieldSpec | None = None, seeds=(0,)) -> VerificationReport:
    """Odd genus ``g = 5`` (``k = 3``): dimensions around the kernel complex
    ``0 -> S^{k-1}H0(E) -> M -> S^{k-3}H0(E) (x) H0(L) -> 0``.

    Only the binomial identities and ``K_{1,1} = 3`` are asserted; the
    surjectivity of ``M -> S^{k-3}H0(E) (x) H0(L)`` is reported as data.
    """
    field = field or FieldSpec()
    k, sigma = 3, 1
    lm = lm_invariants_for(k, sigma)
    e, V = lm.e, lm.r + 1
    sym = lambda d: comb(e + d - 1, d) if d >= 0 else 0  # noqa: E731
    t0 = time.perf_counter()
    rep = VerificationReport("rem46", "ci_k3(2,2,2)", str(field), list(seeds))
    dim_S_km1 = sym(k - 1)
    dim_target = sym(k - 3) * V
    # M resolved by  S^{k-2}E (x) E -> (H0(L) (x) S^{k-3}E) + S^{k-1}E + (S^{k-2}E (x) E)
    dim_M = V * sym(k - 3) + sym(k - 1) + sym(k - 2) * e - sym(k - 2) * e
    implied_coker = dim_target - (dim_M - dim_S_km1)
    rep.add(f"dim S^{k - 1} H0(E) = C({e + k - 2},{k - 1})", comb(e + k - 2, k - 1), dim_S_km1)
    rep.add(f"dim wedge^{k} H0(L) = C({V},{k})", comb(2 * k, k), comb(V, k))
    h0_top = euler_char(BundleDescriptor.line(k, k - 1))
    rep.add(f"h0(P^{k}, O({k - 1})) = C({2 * k - 1},{k})", comb(2 * k - 1, k), h0_top)
    rep.add(f"chi(wedge^{k} Q') = h0(P^{k}, O({k - 1}))", h0_top, euler_char(wedge_ch(q_prime(k, 1), k)))
    rep.add("wedge^k H0(L) = S^{k-1}H0(E) + H0(wedge^k Q')", comb(2 * k, k), dim_S_km1 + h0_top)
    rep.data.update({"k": k, "e": e, "dim_M": dim_M, "dim_S^{k-1}H0(E)": dim_S_km1,
                     "dim_S^{k-3}H0(E)xH0(L)": dim_target,
                     "euler_implied_coker_dim": implied_coker, "per_seed": {}})
    for s in seeds:
        P, s_used = build_with_retry(ModelSpec("ci_k3", (2, 2, 2), field, s))
        k11 = kpq_dim(P, k - 2, 1)
        rep.add(f"K_{{{k - 2},1}} = 3 (quadrics through X)", 3, k11, s)
        rep.data["per_seed"][str(s)] = {
            "seed_used": s_used,
            f"K_{{{k - 2},1}}": k11,
            f"K_{{{k},1}}": kpq_dim(P, k, 1),
            f"K_{{{k - 1},1}}": kpq_dim(P, k - 1, 1),
            "coker_matches_K": implied_coker == k11,
        }
    rep.data["note"] = "surjectivity of M -> S^{k-3}H0(E) (x) H0(L) is not asserted"
    rep.wall_clock = time.perf_counter() - t0
    return rep


def verify_duality(table: BettiTable) -> VerificationReport:
    """``dim K_{p,1} = dim K_{r-2-p,2}`` on every pair of computed cells."""
    r = table.ambient_dim
    if r is None:
        raise ValueError("table does not record the ambient dimension")
    rep = VerificationReport("duality", table.model, table.field, [table.seed])
    skipped = []
    for p in range(0, r - 1):
        a, b = (p, 1), (r - 2 - p, 2)
        if table.covers(*a) and table.covers(*b):
            rep.add(f"K_{{{p},1}} = K_{{{r - 2 - p},2}}", table.entries[a], table.entries[b],
                    table.seed)
        else:
            skipped.append([a, b])
    rep.data["skipped"] = skipped
    return rep


def verify_hyperplane_principle(spec: ModelSpec, seed: int = 0, p_max: int | None = None,
                                q_max: int = 3) -> VerificationReport:
    """Betti tables of the K3 model and of a hyperplane-section canonical curve
    agree cell by cell."""
    if not spec.is_k3:
        raise ValueError("hyperplane principle needs a K3 model")
    t0 = time.perf_counter()
    X, used = build_with_retry(spec)
    C = hyperplane_section(X, seed)
    if p_max is None:
        p_max = spec.genus - 2
    TX = betti_table(X, p_max, q_max, seed=used)
    TC = betti_table(C, p_max, q_max, seed=seed)
    rep = VerificationReport("hyperplane", spec.label, str(spec.field), [used])
    for cell in sorted(set(TX.entries) & set(TC.entries)):
        rep.add(f"K_{{{cell[0]},{cell[1]}}}(X) = K(C)", TX.entries[cell], TC.entries[cell], used)
    rep.data["surface"] = TX.to_json()
    rep.data["curve"] = TC.to_json()
    rep.wall_clock = time.perf_counter() - t0
    return rep


def table_for(spec: ModelSpec, p_max: int, q_max: int = 3) -> tuple[Presentation, BettiTable]:
    P, used = build_with_retry(spec)
    return P, betti_table(P, p_max, q_max, seed=used)
