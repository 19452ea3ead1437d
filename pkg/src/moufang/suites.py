"""Verification suites: per-loop checks swept over a corpus.

Each suite has a public name (used on the command line) and a per-loop
check function yielding :class:`Check` records.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator

from .congruence import (
    abelian_3div,
    abelian_moufang,
    abelian_oracle,
    find_triality_seed,
    is_classically_solvable,
    is_congruence_solvable,
)
from .corpus import Entry
from .errors import CrossCheckError, EmptyCore, NotExtendable, UnknownSuite
from .loopcore import (
    FiniteLoop,
    all_subloops,
    is_abelian_group,
    is_associative,
    is_d_divisible,
    is_moufang,
    normal_subloops,
    nuclei,
    subloop_table,
)
from .mltgrp import build_mlt, coset_kernel, cube_shift_violation, mlt_rel, t_group, t_inverse_violation
from .permgrp import DEFAULT_CAP, PermGroup, center, is_normal, is_p_group, p_core, prime_factors
from .psa import autotopism_triple_violation, prop_d2_hom, psa_identity_violation, verify_series
from .triality import (
    abelian_from_triality,
    build_semidirect,
    extend_triality,
    find_normal_triality_p_subgroup,
    is_triality_subgroup,
    orbit_subloop,
)

SHIFT_RANGE = (-1, 0, 1, 2)
HOM_PAIR_LIMIT = 6000  # |C(Q,S)| above which the all-pairs check is skipped


@dataclass(frozen=True)
class Check:
    loop: str
    item: str
    ok: bool
    witness: tuple | None = None

    def as_dict(self):
        return {"loop": self.loop, "item": self.item, "ok": self.ok, "witness": _plain(self.witness)}


@dataclass
class SuiteResult:
    name: str
    checks: list[Check] = field(default_factory=list)
    skipped: list[tuple[str, str]] = field(default_factory=list)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    @property
    def deficient(self) -> bool:
        return not self.checks

    @property
    def ok(self) -> bool:
        return not self.deficient and not self.failures

    def as_dict(self):
        return {
            "suite": self.name,
            "ok": self.ok,
            "deficient": self.deficient,
            "checks": len(self.checks),
            "failures": [c.as_dict() for c in self.failures],
            "skipped": [list(s) for s in self.skipped],
        }


def _plain(w):
    if w is None:
        return None
    if isinstance(w, (tuple, list)):
        return [_plain(v) for v in w]
    if isinstance(w, (int, str, bool)):
        return w
    return str(w)


class Skip(Exception):
    """Raised by a per-loop check when the loop is outside its scope."""


def _verdict(name, item, v) -> Check:
    return Check(name, item, bool(v), getattr(v, "witness", None))


def _normal(Q):
    return normal_subloops(Q)


def _require_moufang(Q):
    if not is_moufang(Q):
        raise Skip("not Moufang")


def _require_3div(Q):
    _require_moufang(Q)
    if not is_d_divisible(Q, 3):
        raise Skip("not 3-divisible")


def _label(S) -> str:
    return "{" + ",".join(map(str, S.elements)) + "}"


# --- per-loop checks ------------------------------------------------------------


def moufang_criterion(name: str, Q: FiniteLoop, cap: int) -> Iterator[Check]:
    _require_moufang(Q)
    for X in _normal(Q):
        a, b = abelian_moufang(Q, X), abelian_oracle(Q, X)
        yield Check(name, f"X={_label(X)}", a.ok == b.ok, None if a.ok == b.ok else (a.ok, b.ok))


def three_divisible_criterion(name, Q, cap):
    _require_3div(Q)
    for X in _normal(Q):
        a, b = abelian_3div(Q, X), abelian_oracle(Q, X)
        yield Check(name, f"X={_label(X)}", a.ok == b.ok, None if a.ok == b.ok else (a.ok, b.ok))


def cube_shift_identities(name, Q, cap):
    _require_moufang(Q)
    ctx = build_mlt(Q, cap)
    for i in SHIFT_RANGE:
        for j in SHIFT_RANGE:
            bad = cube_shift_violation(ctx, i, j)
            yield Check(name, f"i={i},j={j}", bad is None, bad)


def inner_by_t(name, Q, cap):
    _require_3div(Q)
    ctx = build_mlt(Q, cap)
    T = t_group(ctx)
    yield Check(name, "Inn(Q) = <T_u>", T == ctx.inn, (T.order, ctx.inn.order))


def psa_identities(name, Q, cap):
    _require_moufang(Q)
    ctx = build_mlt(Q, cap)
    bad = psa_identity_violation(ctx)
    yield Check(name, "pseudoautomorphism and commutator identities", bad is None, bad)
    bad = autotopism_triple_violation(ctx)
    yield Check(name, "autotopism triples", bad is None, bad)
    bad = t_inverse_violation(ctx)
    yield Check(name, "T_x^-1 = T_{x^-1}", bad is None, bad)


def companion_hom(name, Q, cap):
    _require_moufang(Q)
    if is_associative(Q):
        raise Skip("associative")
    ctx = build_mlt(Q, cap)
    for S in _normal(Q):
        C = coset_kernel(ctx, S)
        if C.order > HOM_PAIR_LIMIT:
            continue
        try:
            f = prop_d2_hom(ctx, S)
            yield Check(name, f"S={_label(S)}", True, (C.order, f.kernel.order))
        except CrossCheckError as exc:
            yield Check(name, f"S={_label(S)}", False, (str(exc),))


def series_chain(name, Q, cap):
    _require_moufang(Q)
    ctx = build_mlt(Q, cap)
    for S in _normal(Q):
        if not is_d_divisible(subloop_table(Q, S), 3):
            continue
        rep = verify_series(ctx, S)
        yield Check(name, f"S={_label(S)}", rep.ok, rep.orders if rep.ok else rep.contained + rep.normal)


def _triality(Q, cap):
    ctx = build_mlt(Q, cap)
    key = ("triality", cap)
    if key not in Q._cache:
        try:
            Q._cache[key] = extend_triality(ctx)
        except NotExtendable:
            Q._cache[key] = None
    t = Q._cache[key]
    if t is None:
        raise Skip("triality automorphisms do not extend")
    return t


def _normal_subgroup_candidates(Q, cap) -> list[PermGroup]:
    """Normal subgroups of Mlt(Q) met along the way: Mlt_Q(S), C(Q,S), p-cores."""
    t = _triality(Q, cap)
    ctx = t.ctx
    out: dict[frozenset, PermGroup] = {}
    for S in _normal(Q):
        for U in (mlt_rel(ctx, S), coset_kernel(ctx, S)):
            out.setdefault(U.element_set, U)
    semi = build_semidirect(t)
    for p in prime_factors(semi.order):
        for U in (p_core(ctx.mlt, p), semi.restrict(p_core(semi.group, p))):
            out.setdefault(U.element_set, U)
    return sorted(out.values(), key=lambda U: (U.order, sorted(U.images)))


def orbit_subloop_check(name, Q, cap):
    _require_moufang(Q)
    t = _triality(Q, cap)
    for U in _normal_subgroup_candidates(Q, cap):
        if not is_normal(U, t.ctx.mlt):
            continue
        try:
            invariant = is_triality_subgroup(t, U)
        except CrossCheckError as exc:
            yield Check(name, f"|U|={U.order} invariance", False, (str(exc),))
            continue
        if invariant:
            try:
                S = orbit_subloop(t, U)
                yield Check(name, f"|U|={U.order}", True, (len(S.elements),))
            except CrossCheckError as exc:
                yield Check(name, f"|U|={U.order}", False, (str(exc),))


def commutative_triality(name, Q, cap):
    _require_3div(Q)
    t = _triality(Q, cap)
    seen = set()
    for U in _normal_subgroup_candidates(Q, cap):
        for V in (U, center(U)):
            if V.element_set in seen or V.is_trivial() or not V.is_abelian():
                continue
            seen.add(V.element_set)
            if not is_normal(V, t.ctx.mlt) or not is_triality_subgroup(t, V):
                continue
            try:
                X = abelian_from_triality(t, V)
                yield Check(name, f"|U|={V.order}", True, (len(X.elements),))
            except CrossCheckError as exc:
                yield Check(name, f"|U|={V.order}", False, (str(exc),))


def p_subloops(name, Q, cap):
    _require_moufang(Q)
    ctx = build_mlt(Q, cap)
    for S in all_subloops(Q):
        k = len(S.elements)
        ps = prime_factors(k)
        if len(ps) != 1:
            continue
        M = mlt_rel(ctx, S)
        yield Check(name, f"S={_label(S)} p={ps[0]}", is_p_group(M, ps[0]), (M.order,))


def nuclear_abelian(name, Q, cap):
    _require_moufang(Q)
    nuc = nuclei(Q).nucleus.as_set
    for X in _normal(Q):
        if X.as_set <= nuc and is_abelian_group(subloop_table(Q, X)):
            v = abelian_oracle(Q, X)
            yield _verdict(name, f"X={_label(X)}", v)


def triality_pipeline(name, Q, cap):
    _require_3div(Q)
    if Q.n == 1:
        raise Skip("trivial loop")
    if not nuclei(Q).nucleus.is_trivial:
        raise Skip("nontrivial nucleus")
    t = _triality(Q, cap)
    p, S, _ = find_triality_seed(Q)
    try:
        E = find_normal_triality_p_subgroup(t, S, p)
    except (EmptyCore, CrossCheckError) as exc:
        yield Check(name, f"p={p} S={_label(S)}", False, (str(exc),))
        return
    X = abelian_from_triality(t, E)
    yield Check(name, f"p={p} S={_label(S)}", bool(abelian_oracle(Q, X)), (E.order, len(X.elements)))


def solvability_agree(name, Q, cap):
    _require_3div(Q)
    a, b = is_classically_solvable(Q), is_congruence_solvable(Q)
    yield Check(name, "classical = congruence", a.solvable == b.solvable, (a.solvable, b.solvable))


def negative_control(name, Q, cap):
    """Commutative normal subgroups that do not induce abelian congruences (expected to exist)."""
    for X in _normal(Q):
        if is_abelian_group(subloop_table(Q, X)) and not abelian_oracle(Q, X):
            yield Check(name, f"X={_label(X)}", True, abelian_oracle(Q, X).witness)


SUITES: dict[str, Callable] = {
    "thm-2.2": moufang_criterion,
    "thm-2.5": three_divisible_criterion,
    "prop-2.3": cube_shift_identities,
    "prop-2.4": inner_by_t,
    "eq-3.5": psa_identities,
    "prop-3.4": companion_hom,
    "cor-3.6": series_chain,
    "lem-4.1": orbit_subloop_check,
    "prop-4.2": commutative_triality,
    "thm-5.2": p_subloops,
    "prop-5.5": nuclear_abelian,
    "prop-5.6": triality_pipeline,
    "thm-5.7": solvability_agree,
    "negative-control": negative_control,
}


def run_suite(name: str, corpus: tuple[Entry, ...], cap: int = DEFAULT_CAP) -> SuiteResult:
    if name not in SUITES:
        raise UnknownSuite(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    fn = SUITES[name]
    result = SuiteResult(name)
    for entry in corpus:
        try:
            result.checks.extend(fn(entry.name, entry.loop, cap))
        except Skip as why:
            result.skipped.append((entry.name, str(why)))
        except CrossCheckError as exc:
            result.checks.append(Check(entry.name, "cross-check", False, (str(exc),)))
    return result


def loop_checks(name: str, Q: FiniteLoop, cap: int = DEFAULT_CAP) -> dict[str, dict]:
    """Every applicable suite on a single loop."""
    out = {}
    for suite, fn in SUITES.items():
        try:
            checks = list(fn(name, Q, cap))
        except Skip:
            continue
        except CrossCheckError as exc:
            checks = [Check(name, "cross-check", False, (str(exc),))]
        if suite == "negative-control":
            out[suite] = {"found": len(checks)}
            continue
        out[suite] = {
            "ok": all(c.ok for c in checks),
            "checks": len(checks),
            "failures": [c.as_dict() for c in checks if not c.ok],
        }
    return out
