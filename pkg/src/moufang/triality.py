"""Triality automorphisms of ``Mlt(Q)``, the semidirect product ``Mlt(Q) x| S_3``
and the passage from normal ``p``-subloops to abelian congruences.

``sigma`` extends ``L_x -> R_x^-1, R_x -> L_x^-1`` and ``rho`` extends
``L_x -> R_x, R_x -> M_x^-1``. Both are stored as index maps on the
enumerated ``Mlt(Q)``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .errors import (
    CrossCheckError,
    EmptyCore,
    InputError,
    NotCommutative,
    NotExtendable,
    NotMoufang,
    NotNormal,
    NotThreeDivisible,
    NotTriality,
    OrbitTrivial,
)
from .congruence import abelian_3div, abelian_oracle
from .loopcore import SubloopHandle, is_d_divisible, is_moufang, is_normal_subloop, require_normal
from .mltgrp import MltContext, mlt_rel
from .psa import verify_series
from .permgrp import (
    DEFAULT_CAP,
    Perm,
    PermGroup,
    _compose,
    center,
    close,
    elementary_abelian_socle,
    is_normal,
    is_p_group,
    is_prime_power,
    is_subgroup,
    p_core,
    require_subgroup,
    subgroup_from_elements,
)

# S_3 on three symbols; points are composed right to left like everything else
S3_ELEMENTS = tuple(sorted(itertools.permutations(range(3))))
S3_SIGMA = (1, 0, 2)
S3_RHO = (1, 2, 0)


def _s3_mul(a, b):
    return tuple(a[b[i]] for i in range(3))


def _s3_inv(a):
    out = [0, 0, 0]
    for i, v in enumerate(a):
        out[v] = i
    return tuple(out)


def extend_automorphism(ctx: MltContext, assign: dict[bytes, bytes], name: str = "map") -> tuple[int, ...]:
    """Extend ``assign`` (translation image -> image) to an automorphism of ``Mlt(Q)``.

    Images are propagated along the breadth-first enumeration words; the
    result is then checked on every (element, generator) edge, on every
    translation and for bijectivity. A failed edge check proves that no
    extension exists and raises ``NotExtendable`` with the two words.
    """
    G = ctx.mlt
    gen_img = [assign[g.img] for g in G.gens]
    images = [bytes(range(ctx.n))]
    for i in range(1, G.order):
        par, k = G.parent(i)
        images.append(_compose(gen_img[k], images[par]))
    index = G._index
    for img in images:
        if img not in index:
            raise NotExtendable(f"{name}: image leaves Mlt(Q)")
    for i, e in enumerate(G.images):
        for k, g in enumerate(G.gens):
            j = index[_compose(g.img, e)]
            if images[j] != _compose(gen_img[k], images[i]):
                raise NotExtendable(
                    f"{name} does not extend to a homomorphism",
                    witness=(tuple(G.word(G.images[j])), tuple([k] + G.word(e))),
                )
    for src, dst in assign.items():
        if images[index[src]] != dst:
            raise NotExtendable(f"{name}: prescribed translation image not met", witness=(G.word(src),))
    result = tuple(index[img] for img in images)
    if len(set(result)) != G.order:
        raise NotExtendable(f"{name} is not injective")
    return result


def sigma_assignment(ctx: MltContext) -> dict[bytes, bytes]:
    out: dict[bytes, bytes] = {}
    for x in range(ctx.n):
        for src, dst in ((ctx.L[x], ctx.R[x].inverse()), (ctx.R[x], ctx.L[x].inverse())):
            if out.setdefault(src.img, dst.img) != dst.img:
                raise NotExtendable("sigma: one translation gets two images", witness=(x,))
    return out


def rho_assignment(ctx: MltContext) -> dict[bytes, bytes]:
    out: dict[bytes, bytes] = {}
    for x in range(ctx.n):
        for src, dst in ((ctx.L[x], ctx.R[x]), (ctx.R[x], ctx.M(x).inverse())):
            if out.setdefault(src.img, dst.img) != dst.img:
                raise NotExtendable("rho: one translation gets two images", witness=(x,))
    return out


def _compose_maps(a, b):
    """``a o b`` for index maps."""
    return tuple(a[i] for i in b)


@dataclass(frozen=True, eq=False)
class TrialityAction:
    """``sigma`` and ``rho`` as index maps on ``ctx.mlt``."""

    ctx: MltContext
    sigma: tuple[int, ...]
    rho: tuple[int, ...]
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def group(self) -> PermGroup:
        return self.ctx.mlt

    @property
    def alpha(self) -> tuple[int, ...]:
        return _compose_maps(self.sigma, self.rho)

    @property
    def beta(self) -> tuple[int, ...]:
        return _compose_maps(self.sigma, _compose_maps(self.rho, self.rho))

    def apply(self, amap, g: Perm) -> Perm:
        G = self.group
        return G.element(amap[G.index(g)])

    def relations_hold(self) -> bool:
        ident = tuple(range(self.group.order))
        s, r = self.sigma, self.rho
        rinv = _compose_maps(r, r)
        return (
            _compose_maps(s, s) == ident
            and _compose_maps(r, _compose_maps(r, r)) == ident
            and _compose_maps(s, _compose_maps(r, s)) == rinv
        )

    def image_set(self, amap, elements) -> frozenset:
        G = self.group
        return frozenset(G.images[amap[G.index(e)]] for e in elements)


def extend_triality(ctx: MltContext) -> TrialityAction:
    """Extend both triality assignments; raises ``NotExtendable`` if either fails."""
    sigma = extend_automorphism(ctx, sigma_assignment(ctx), "sigma")
    rho = extend_automorphism(ctx, rho_assignment(ctx), "rho")
    t = TrialityAction(ctx, sigma, rho)
    if not t.relations_hold():
        raise CrossCheckError("sigma and rho do not satisfy the S_3 relations")
    return t


def extendable(ctx: MltContext) -> dict[str, bool]:
    """Which of ``sigma``, ``rho`` extend to automorphisms."""
    out = {}
    for name, fn in (("sigma", sigma_assignment), ("rho", rho_assignment)):
        try:
            extend_automorphism(ctx, fn(ctx), name)
            out[name] = True
        except NotExtendable:
            out[name] = False
    return out


# --- the semidirect product ---------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SemidirectGroup:
    """``Mlt(Q) x| S_3`` with ``(g, w)(h, v) = (g w(h), wv)``.

    Realized faithfully on ``Q x S_3`` (``6n`` points, ``(x, v)`` at
    ``v_index * n + x``) by ``P(g)(x, v) = (A_v(g)(x), v)`` and
    ``w^(x, v) = (x, v w^-1)``, so that ``(g, w) -> P(g) w^`` is an
    isomorphism onto ``group``.
    """

    action: TrialityAction
    actions: dict  # S_3 element -> index map on Mlt
    group: PermGroup

    @property
    def n(self):
        return self.action.ctx.n

    @property
    def order(self):
        return self.group.order

    def encode(self, g: int, w) -> bytes:
        """Permutation of the pair ``(Mlt element index g, w)``."""
        return _compose(self._P(g), self._hat(w))

    def _P(self, g: int) -> bytes:
        n = self.n
        G = self.action.group
        out = bytearray(6 * n)
        for vi, v in enumerate(S3_ELEMENTS):
            img = G.images[self.actions[v][g]]
            for x in range(n):
                out[vi * n + x] = vi * n + img[x]
        return bytes(out)

    def _hat(self, w) -> bytes:
        n = self.n
        winv = _s3_inv(w)
        out = bytearray(6 * n)
        for vi, v in enumerate(S3_ELEMENTS):
            ti = S3_ELEMENTS.index(_s3_mul(v, winv))
            for x in range(n):
                out[vi * n + x] = ti * n + x
        return bytes(out)

    def decode(self, p: bytes) -> tuple[int, tuple]:
        n = self.n
        # w^ sends block v to block v w^-1; P(g) keeps blocks
        winv = S3_ELEMENTS[p[0] // n]
        w = _s3_inv(winv)
        P = _compose(p, self._hat(winv))  # p w^-1^ = P(g)
        g = bytes(P[x] for x in range(n))
        return self.action.group.index(g), w

    def mul_pairs(self, a, b):
        (g, w), (h, v) = a, b
        G = self.action.group
        wh = self.actions[w][h]
        return G.index(_compose(G.images[g], G.images[wh])), _s3_mul(w, v)

    def check_product(self, samples: int = 200, seed: int = 0) -> None:
        """Compare the pair product with the permutation product on random pairs."""
        rng = random.Random(seed)
        m = self.action.group.order
        for _ in range(samples):
            a = (rng.randrange(m), rng.choice(S3_ELEMENTS))
            b = (rng.randrange(m), rng.choice(S3_ELEMENTS))
            lhs = _compose(self.encode(*a), self.encode(*b))
            if lhs != self.encode(*self.mul_pairs(a, b)):
                raise CrossCheckError("pair product disagrees with the permutation model", witness=(a, b))
            if self.decode(lhs) != self.mul_pairs(a, b):
                raise CrossCheckError("decode is not inverse to encode", witness=(a, b))

    def mlt_part(self) -> PermGroup:
        """``Mlt(Q) x {id}`` inside ``group``."""
        ident = S3_ELEMENTS[0]
        return subgroup_from_elements(
            [self.encode(g, ident) for g in range(self.action.group.order)], 6 * self.n
        )

    def embed(self, U: PermGroup) -> PermGroup:
        ident = S3_ELEMENTS[0]
        G = self.action.group
        return subgroup_from_elements([self.encode(G.index(e), ident) for e in U.images], 6 * self.n)

    def restrict(self, V: PermGroup) -> PermGroup:
        """``V & (Mlt(Q) x {id})`` as a subgroup of ``Mlt(Q)``."""
        ident = S3_ELEMENTS[0]
        G = self.action.group
        keep = []
        for p in V.images:
            g, w = self.decode(p)
            if w == ident:
                keep.append(G.images[g])
        return subgroup_from_elements(keep, self.n)


def _s3_actions(t: TrialityAction) -> dict:
    """Homomorphism ``S_3 -> <sigma, rho>`` with the fixed generators."""
    ident_map = tuple(range(t.group.order))
    acts = {S3_ELEMENTS[0]: ident_map}
    frontier = [S3_ELEMENTS[0]]
    gens = ((S3_SIGMA, t.sigma), (S3_RHO, t.rho))
    while frontier:
        nxt = []
        for w in frontier:
            for s, smap in gens:
                sw = _s3_mul(s, w)
                img = _compose_maps(smap, acts[w])
                if sw in acts:
                    if acts[sw] != img:
                        raise CrossCheckError("S_3 action is not well defined", witness=(sw,))
                else:
                    acts[sw] = img
                    nxt.append(sw)
        frontier = nxt
    for a, b in itertools.product(S3_ELEMENTS, repeat=2):
        if acts[_s3_mul(a, b)] != _compose_maps(acts[a], acts[b]):
            raise CrossCheckError("S_3 action is not a homomorphism", witness=(a, b))
    return acts


def build_semidirect(t: TrialityAction, cap: int = DEFAULT_CAP) -> SemidirectGroup:
    if "semidirect" in t._cache:
        return t._cache["semidirect"]
    acts = _s3_actions(t)
    shell = SemidirectGroup(t, acts, None)
    G = t.group
    ident = S3_ELEMENTS[0]
    gens = [shell.encode(G.index(g), ident) for g in G.gens]
    gens += [shell.encode(0, S3_SIGMA), shell.encode(0, S3_RHO)]
    group = close([Perm._raw(g) for g in gens], cap=cap, degree=6 * t.ctx.n, what="Mlt x| S3")
    if group.order != 6 * G.order:
        raise CrossCheckError(f"semidirect product has order {group.order}, expected {6 * G.order}")
    S = SemidirectGroup(t, acts, group)
    S.check_product()
    t._cache["semidirect"] = S
    return S


# --- triality subgroups and the pipeline -----------------------------------------


def is_triality_subgroup(t: TrialityAction, U: PermGroup, check_semidirect: bool = True) -> bool:
    """``sigma(U) = U`` and ``rho(U) = U``.

    For ``U`` normal in ``Mlt(Q)`` the answer is compared with normality of
    ``U`` in the semidirect product.
    """
    require_subgroup(U, t.group)
    elems = U.element_set
    inv = t.image_set(t.sigma, elems) == elems and t.image_set(t.rho, elems) == elems
    if check_semidirect and is_normal(U, t.group):
        S = build_semidirect(t)
        if is_normal(S.embed(U), S.group) != inv:
            raise CrossCheckError("triality invariance and normality in Mlt x| S3 disagree")
    return inv


def orbit_subloop(t: TrialityAction, U: PermGroup) -> SubloopHandle:
    """``S = U(1)``; checked to be normal in ``Q`` with ``Mlt_Q(S) <= U``."""
    if not is_normal(U, t.group):
        raise NotNormal("U is not normal in Mlt(Q)")
    if not is_triality_subgroup(t, U):
        raise NotTriality("U is not invariant under sigma and rho")
    Q = t.ctx.loop
    S = SubloopHandle.of(e[0] for e in U.images)
    if not is_normal_subloop(Q, S):
        raise CrossCheckError("orbit of 1 is not a normal subloop", witness=S.elements)
    if not is_subgroup(mlt_rel(t.ctx, S), U):
        raise CrossCheckError("Mlt_Q(S) is not contained in U", witness=S.elements)
    return S


def abelian_from_triality(t: TrialityAction, U: PermGroup) -> SubloopHandle:
    """``X = U(1)`` for a nontrivial commutative normal triality subgroup ``U``;
    ``X`` is re-verified to induce an abelian congruence.
    """
    Q = t.ctx.loop
    if not is_moufang(Q):
        raise NotMoufang("Q is not Moufang")
    if not is_d_divisible(Q, 3):
        raise NotThreeDivisible(f"order {Q.n} is divisible by 3")
    if not U.is_abelian():
        raise NotCommutative("U is not commutative")
    if U.is_trivial():
        raise InputError("U must be nontrivial")
    X = orbit_subloop(t, U)
    if X.is_trivial:
        raise OrbitTrivial("nontrivial U with trivial orbit of 1")
    if not abelian_3div(Q, X) or not abelian_oracle(Q, X):
        raise CrossCheckError("orbit of a commutative triality subgroup is not abelian", witness=X.elements)
    return X


def find_normal_triality_p_subgroup(t: TrialityAction, S: SubloopHandle, p: int) -> PermGroup:
    """Nontrivial elementary abelian normal triality ``p``-subgroup of ``Mlt(Q)``.

    ``U_0`` is the ``p``-core of ``Mlt(Q) x| S_3``, ``U_1 = U_0 & Mlt(Q)``
    and the result is the ``p``-socle of ``Z(U_1)``.
    """
    ctx = t.ctx
    Q = ctx.loop
    if ctx.mlt.order % p:
        raise EmptyCore(f"{p} does not divide |Mlt(Q)| = {ctx.mlt.order}")
    if p == 3:
        raise InputError("p must differ from 3")
    if not is_d_divisible(Q, 3):
        raise NotThreeDivisible(f"order {Q.n} is divisible by 3")
    require_normal(Q, S)
    if S.is_trivial or not is_prime_power(len(S.elements), p):
        raise InputError(f"S must be a nontrivial {p}-subloop")
    if not is_p_group(mlt_rel(ctx, S), p):
        raise CrossCheckError("Mlt_Q(S) is not a p-group", witness=S.elements)
    report = verify_series(ctx, S)
    if not report.ok:
        raise CrossCheckError("series Mlt_Q(S) <= C_0 <= C <= Mlt fails", witness=report.orders)
    semi = build_semidirect(t)
    U0 = p_core(semi.group, p)
    if U0.is_trivial():
        raise EmptyCore("p-core of Mlt x| S3 is trivial")
    U1 = semi.restrict(U0)
    if U1.is_trivial():
        raise EmptyCore("p-core of Mlt x| S3 meets Mlt(Q) trivially", witness=(U0.order,))
    E = elementary_abelian_socle(center(U1), p)
    if E.is_trivial() or not E.is_abelian() or not is_normal(E, ctx.mlt) or not is_triality_subgroup(t, E):
        raise CrossCheckError("socle of Z(U_1) lacks an asserted property", witness=(E.order,))
    return E
