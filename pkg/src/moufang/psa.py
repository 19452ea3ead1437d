"""Left pseudoautomorphisms with companions, autotopisms and the series
``Mlt_Q(S) <= C_0(Q,S) <= C(Q,S) <= Mlt(Q)``.

A pair ``(c, phi)`` is a left pseudoautomorphism with companion ``c`` when
``c phi(x) . phi(y) = c phi(xy)`` for all ``x, y``. Pairs multiply by
``(c, phi)(d, psi) = (c phi(d), phi psi)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BetaDoesNotFixIdentity, CertificationFailed, CrossCheckError, NoCompanion, NotThreeDivisible
from .loopcore import (
    FiniteLoop,
    SubloopHandle,
    commutator as loop_commutator,
    is_d_divisible,
    join,
    nuclei,
    quotient,
    require_normal,
    subloop_table,
)
from .mltgrp import MltContext, coset_kernel, decompose_lsigma, decompose_rsigma, mlt_rel
from .permgrp import Perm, PermGroup, commutator, is_normal, is_subgroup, subgroup_from_elements


def _loop(obj) -> FiniteLoop:
    return obj.loop if isinstance(obj, MltContext) else obj


def _arr(phi: Perm) -> np.ndarray:
    return np.frombuffer(phi.img, dtype=np.uint8).astype(np.int64)


def psa_defect(Q: FiniteLoop, c: int, phi: Perm):
    """First ``(x, y)`` with ``c phi(x) . phi(y) != c phi(xy)``, or None."""
    t = Q.table
    f = _arr(phi)
    lhs = t[t[c, f][:, None], f[None, :]]
    rhs = t[c, f[t]]
    bad = np.argwhere(lhs != rhs)
    return None if not len(bad) else (int(bad[0][0]), int(bad[0][1]))


@dataclass(frozen=True)
class PsaPair:
    """A certified element of ``Psa_l(Q)``; construction fails on a bad pair."""

    loop: FiniteLoop
    c: int
    phi: Perm

    def __post_init__(self):
        if self.phi.degree != self.loop.n:
            raise CertificationFailed("degree mismatch")
        bad = psa_defect(self.loop, self.c, self.phi)
        if bad is not None:
            raise CertificationFailed(f"({self.c}, phi) is not a left pseudoautomorphism", witness=bad)

    @classmethod
    def identity(cls, Q: FiniteLoop) -> "PsaPair":
        return cls(Q, 0, Perm.identity(Q.n))

    def key(self):
        return (self.c, self.phi.img)


def is_psa_pair(Q: FiniteLoop, c: int, phi: Perm) -> bool:
    return psa_defect(Q, c, phi) is None


def companions(obj, phi: Perm) -> frozenset[int]:
    """Every ``c`` making ``(c, phi)`` a left pseudoautomorphism.

    The result is empty or a coset ``Nuc_l(Q) c``; anything else raises
    ``CrossCheckError``.
    """
    Q = _loop(obj)
    t = Q.table
    f = _arr(phi)
    tf = t[:, f]  # tf[c, x] = c phi(x)
    lhs = t[tf[:, :, None], f[None, None, :]]
    rhs = tf[:, t]  # rhs[c, x, y] = c phi(xy)
    ok = (lhs == rhs).all(axis=(1, 2))
    found = frozenset(int(c) for c in np.flatnonzero(ok))
    if found:
        c0 = min(found)
        coset = frozenset(Q.mul[a][c0] for a in nuclei(Q).left_nucleus.elements)
        if coset != found:
            raise CrossCheckError("companions do not form a coset of the left nucleus", witness=(c0,))
    return found


def psa_mul(a: PsaPair, b: PsaPair) -> PsaPair:
    if a.loop is not b.loop and a.loop != b.loop:
        raise CertificationFailed("pairs over different loops")
    return PsaPair(a.loop, a.loop.mul[a.c][a.phi(b.c)], a.phi * b.phi)


def psa_inv(a: PsaPair) -> PsaPair:
    """``(phi^-1(c\\1), phi^-1)``."""
    inv = a.phi.inverse()
    return PsaPair(a.loop, inv(a.loop.ldiv[a.c][0]), inv)


# --- autotopisms -------------------------------------------------------------


def autotopism_defect(Q: FiniteLoop, alpha: Perm, beta: Perm, gamma: Perm):
    t = Q.table
    a, b, g = _arr(alpha), _arr(beta), _arr(gamma)
    bad = np.argwhere(t[a[:, None], b[None, :]] != g[t])
    return None if not len(bad) else (int(bad[0][0]), int(bad[0][1]))


def is_autotopism(Q: FiniteLoop, alpha: Perm, beta: Perm, gamma: Perm) -> bool:
    return autotopism_defect(Q, alpha, beta, gamma) is None


@dataclass(frozen=True)
class Autotopism:
    """A certified triple with ``alpha(x) beta(y) = gamma(xy)``."""

    loop: FiniteLoop
    alpha: Perm
    beta: Perm
    gamma: Perm

    def __post_init__(self):
        bad = autotopism_defect(self.loop, self.alpha, self.beta, self.gamma)
        if bad is not None:
            raise CertificationFailed("triple is not an autotopism", witness=bad)


def _left(Q: FiniteLoop, c: int) -> Perm:
    return Perm._raw(bytes(Q.mul[c]))


def psa_to_atp(a: PsaPair) -> Autotopism:
    """``(c, phi) -> (L_c phi, phi, L_c phi)``."""
    lc = _left(a.loop, a.c) * a.phi
    return Autotopism(a.loop, lc, a.phi, lc)


def atp_to_psa(t: Autotopism) -> PsaPair:
    """An autotopism with ``beta(1) = 1`` has ``alpha = gamma = L_c beta``; returns ``(c, beta)``."""
    if t.beta(0) != 0:
        raise BetaDoesNotFixIdentity("beta must fix the identity", witness=(t.beta(0),))
    c = t.alpha(0)
    if t.alpha != t.gamma or t.alpha != _left(t.loop, c) * t.beta:
        raise CertificationFailed("autotopism with beta(1) = 1 must have alpha = gamma = L_c beta")
    return PsaPair(t.loop, c, t.beta)


def conj_psa(obj, x: int, a: PsaPair) -> PsaPair:
    """``(c^{phi(x^-1)}, L_{phi(x)}^-1 phi L_x)`` with ``c^y = y^-1 c y``."""
    Q = _loop(obj)
    y = a.phi(Q.inv(x))
    c = Q.mul[Q.inv(y)][Q.mul[a.c][y]]
    phi = _left(Q, a.phi(x)).inverse() * a.phi * _left(Q, x)
    return PsaPair(Q, c, phi)


def is_semiautomorphism(obj, phi: Perm) -> bool:
    """``phi(1) = 1`` and ``phi(x . yx) = phi(x) . phi(y)phi(x)``."""
    Q = _loop(obj)
    if phi(0) != 0:
        return False
    t = Q.table
    f = _arr(phi)
    X = np.arange(Q.n)[:, None]
    Y = np.arange(Q.n)[None, :]
    lhs = f[t[X, t[Y, X]]]
    rhs = t[f[X], t[f[Y], f[X]]]
    return bool((lhs == rhs).all())


# --- identity sweeps ---------------------------------------------------------


def psa_identity_violation(ctx: MltContext):
    """Check ``(x^-3, T_x)`` and ``([x, y^-1], [L_x, R_y])`` as pseudoautomorphisms, and

    ``L_{x,y} = [L_x, R_y^-1] = [R_x^-1, L_y]``, ``R_{x,y} = [L_y^-1, R_x] = [R_y, L_x^-1]``
    with ``[a, b] = a^-1 b^-1 a b``. Returns ``(name, x, y)`` on failure, else None.
    """
    Q = ctx.loop
    L, R = ctx.L, ctx.R
    for x in range(Q.n):
        if not is_psa_pair(Q, Q.power(x, -3), ctx.T(x)):
            return ("x^-3,T_x", x, None)
        for y in range(Q.n):
            lr = commutator(L[x], R[y])
            if not is_psa_pair(Q, loop_commutator(Q, x, Q.inv(y)), lr):
                return ("[x,y^-1],[L_x,R_y]", x, y)
            # the same pair, written with the opposite commutator convention
            if not is_psa_pair(Q, loop_commutator(Q, Q.inv(x), y), L[x] * R[y] * L[x].inverse() * R[y].inverse()):
                return ("[x^-1,y],L_xR_yL_x^-1R_y^-1", x, y)
            Lxy, Rxy = ctx.standard[("L", x, y)], ctx.standard[("R", x, y)]
            if Lxy != commutator(L[x], R[y].inverse()) or Lxy != commutator(R[x].inverse(), L[y]):
                return ("L_{x,y}", x, y)
            if Rxy != commutator(L[y].inverse(), R[x]) or Rxy != commutator(R[y], L[x].inverse()):
                return ("R_{x,y}", x, y)
    return None


def autotopism_triples(ctx: MltContext, x: int):
    """``(L_x, R_x, M_x)``, ``(M_x, L_x^-1, L_x)`` and ``(R_x^-1, M_x, R_x)``."""
    L, R, M = ctx.L[x], ctx.R[x], ctx.M(x)
    return [(L, R, M), (M, L.inverse(), L), (R.inverse(), M, R)]


def autotopism_triple_violation(ctx: MltContext):
    for x in range(ctx.n):
        for k, triple in enumerate(autotopism_triples(ctx, x)):
            if not is_autotopism(ctx.loop, *triple):
                return (k, x)
    return None


# --- C_0(Q,S) and the homomorphism f -----------------------------------------


def _sigma_companions(ctx: MltContext, sigmas) -> dict[bytes, frozenset[int]]:
    out = {}
    for img in sigmas:
        if img not in out:
            out[img] = companions(ctx.loop, Perm._raw(img))
    return out


def c0_subgroup(ctx: MltContext, S: SubloopHandle, form: str = "L") -> PermGroup:
    """``C_0(Q,S)``: the ``phi = L_s sigma`` in ``C(Q,S)`` whose ``sigma`` has a companion in ``S``.

    ``form="R"`` uses ``phi = R_s sigma`` instead. The result is checked to
    be a subgroup, normal in ``C(Q,S)``.
    """
    require_normal(ctx.loop, S)
    C = coset_kernel(ctx, S)
    decompose = decompose_lsigma if form == "L" else decompose_rsigma
    sigmas = [decompose(ctx, S, phi)[1] for phi in C.elements]
    comp = _sigma_companions(ctx, (s.img for s in sigmas))
    members = S.as_set
    keep = []
    for phi, sigma in zip(C.images, sigmas):
        cs = comp[sigma.img]
        if not cs:
            raise NoCompanion("inner mapping without companion", witness=(C.index(phi),))
        if cs & members:
            keep.append(phi)
    C0 = subgroup_from_elements(keep, ctx.n)
    if not is_normal(C0, C):
        raise CrossCheckError("C_0(Q,S) is not normal in C(Q,S)")
    return C0


def _base(E: np.ndarray) -> list[int]:
    """Points whose images separate the rows of ``E``, chosen greedily."""
    base: list[int] = []
    count = 1
    while count < len(E):
        best, best_count = None, count
        for b in range(E.shape[1]):
            if b in base:
                continue
            k = len(np.unique(E[:, base + [b]], axis=0))
            if k > best_count:
                best, best_count = b, k
        if best is None:
            raise CrossCheckError("rows are not distinct")
        base.append(best)
        count = best_count
    return base


@dataclass(frozen=True)
class Homomorphism:
    """``f: C(Q,S) -> Q/(Nuc(Q) S)`` with values aligned to ``domain.images``."""

    domain: PermGroup
    target: FiniteLoop
    values: tuple[int, ...]
    kernel: PermGroup

    def __call__(self, phi) -> int:
        return self.values[self.domain.index(phi)]


def prop_d2_hom(ctx: MltContext, S: SubloopHandle, pair_chunk: int = 256) -> Homomorphism:
    """Map ``L_s sigma`` to the coset of a companion of ``sigma`` modulo ``Nuc(Q) S``.

    Asserts independence of the companion, the homomorphism property on all
    pairs, and that the kernel is ``C_0(Q,S)``.
    """
    Q = ctx.loop
    require_normal(Q, S)
    C = coset_kernel(ctx, S)
    NS = join(Q, nuclei(Q).nucleus, S)
    F, proj = quotient(Q, NS)
    comp_cache: dict[bytes, frozenset[int]] = {}
    values = []
    for phi in C.elements:
        _, sigma = decompose_lsigma(ctx, S, phi)
        cs = comp_cache.get(sigma.img)
        if cs is None:
            cs = comp_cache[sigma.img] = companions(Q, sigma)
        if not cs:
            raise NoCompanion("inner mapping without companion", witness=(C.index(phi),))
        labels = {proj[c] for c in cs}
        if len(labels) != 1:
            raise CrossCheckError("f depends on the companion chosen", witness=tuple(sorted(cs)))
        values.append(proj[min(cs)])
    vals = np.array(values, dtype=np.int64)

    # homomorphism on all pairs, locating products by their images on a base
    n = ctx.n
    E = np.frombuffer(b"".join(C.images), dtype=np.uint8).reshape(C.order, n).astype(np.int64)
    base = _base(E)
    weights = n ** np.arange(len(base), dtype=np.int64)
    codes = E[:, base] @ weights
    if n ** len(base) <= 1 << 24:
        dense = np.full(n ** len(base), -1, dtype=np.int64)
        dense[codes] = np.arange(C.order)

        def locate(c):
            return dense[c]

    else:
        order = np.argsort(codes)
        sorted_codes = codes[order]

        def locate(c):
            pos = np.clip(np.searchsorted(sorted_codes, c), 0, len(codes) - 1)
            return np.where(sorted_codes[pos] == c, order[pos], -1)

    ft = F.table
    for lo in range(0, C.order, pair_chunk):
        blk = E[lo:lo + pair_chunk]
        # (phi psi)(b) = phi(psi(b)) for phi in blk, psi in C
        prod = blk[:, E[:, base]]  # shape (chunk, |C|, |base|)
        idx = locate(prod @ weights)
        if (idx < 0).any():
            raise CrossCheckError("C(Q,S) is not closed under composition")
        expect = ft[vals[lo:lo + pair_chunk][:, None], vals[None, :]]
        bad = np.argwhere(vals[idx] != expect)
        if len(bad):
            i, j = bad[0]
            raise CrossCheckError("f is not a homomorphism", witness=(lo + int(i), int(j)))
    kernel = subgroup_from_elements([e for e, v in zip(C.images, values) if v == 0], n)
    if kernel != c0_subgroup(ctx, S):
        raise CrossCheckError("kernel of f differs from C_0(Q,S)")
    return Homomorphism(C, F, tuple(values), kernel)


# --- the series ----------------------------------------------------------------


@dataclass(frozen=True)
class SeriesReport:
    orders: tuple[int, int, int, int]
    contained: tuple[bool, bool, bool]
    normal: tuple[bool, bool, bool]

    @property
    def ok(self) -> bool:
        return all(self.contained) and all(self.normal)


def verify_series(ctx: MltContext, S: SubloopHandle) -> SeriesReport:
    """Build ``Mlt_Q(S), C_0(Q,S), C(Q,S), Mlt(Q)`` and test each containment and normality."""
    Q = ctx.loop
    require_normal(Q, S)
    if not is_d_divisible(subloop_table(Q, S), 3):
        raise NotThreeDivisible("S must be 3-divisible", witness=S.elements)
    M = mlt_rel(ctx, S)
    C = coset_kernel(ctx, S)
    C0 = c0_subgroup(ctx, S)
    chain = (M, C0, C, ctx.mlt)
    return SeriesReport(
        orders=tuple(G.order for G in chain),
        contained=tuple(is_subgroup(a, b) for a, b in zip(chain, chain[1:])),
        normal=tuple(is_normal(a, b) for a, b in zip(chain, chain[1:])),
    )


def series_chain(ctx: MltContext, S: SubloopHandle) -> list[PermGroup]:
    """``[Mlt(Q), C(Q,S), C_0(Q,S), Mlt_Q(S)]``, the descending subnormal chain."""
    return [ctx.mlt, coset_kernel(ctx, S), c0_subgroup(ctx, S), mlt_rel(ctx, S)]


__all__ = [
    "Autotopism",
    "Homomorphism",
    "PsaPair",
    "SeriesReport",
    "atp_to_psa",
    "autotopism_defect",
    "autotopism_triple_violation",
    "autotopism_triples",
    "c0_subgroup",
    "companions",
    "conj_psa",
    "is_autotopism",
    "is_psa_pair",
    "is_semiautomorphism",
    "prop_d2_hom",
    "psa_defect",
    "psa_identity_violation",
    "psa_inv",
    "psa_mul",
    "psa_to_atp",
    "series_chain",
    "verify_series",
]
