"""Multiplication groups, inner mapping groups and coset centralizers of loops.

Maps compose right to left throughout: ``L_{u,v} = L_{uv}^-1 L_u L_v``
applies ``L_v`` first.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CrossCheckError, NotInKernel
from .loopcore import FiniteLoop, SubloopHandle, inner_generators, quotient, require_normal
from .permgrp import DEFAULT_CAP, Perm, PermGroup, _compose, close, subgroup_from_elements


@dataclass(frozen=True, eq=False)
class MltContext:
    """``Mlt(Q)`` and ``Inn(Q)`` enumerated, with tagged standard generators.

    ``standard`` maps ``("T", u)``, ``("L", u, v)`` and ``("R", u, v)`` to the
    corresponding inner mapping.
    """

    loop: FiniteLoop
    L: tuple[Perm, ...]
    R: tuple[Perm, ...]
    mlt: PermGroup
    inn: PermGroup
    standard: dict = field(repr=False)
    cap: int = DEFAULT_CAP

    @property
    def n(self):
        return self.loop.n

    def M(self, x: int) -> Perm:
        """``M_x = L_x R_x``."""
        return self.L[x] * self.R[x]

    def T(self, u: int) -> Perm:
        return self.standard[("T", u)]

    def translation_tags(self) -> dict[bytes, tuple]:
        """First tag ``("L", u)`` / ``("R", u)`` for each distinct translation."""
        tags = {}
        for u in range(self.n):
            tags.setdefault(self.L[u].img, ("L", u))
        for u in range(self.n):
            tags.setdefault(self.R[u].img, ("R", u))
        return tags


def translations(Q: FiniteLoop):
    Ls = tuple(Perm(Q.left_translation(u)) for u in range(Q.n))
    Rs = tuple(Perm(Q.right_translation(u)) for u in range(Q.n))
    return Ls, Rs


def build_mlt(Q: FiniteLoop, cap: int = DEFAULT_CAP) -> MltContext:
    """Enumerate ``Mlt(Q)`` and ``Inn(Q)``.

    ``Inn(Q)`` is closed from the standard generators and compared with the
    stabilizer of 0 filtered out of ``Mlt(Q)``.
    """
    key = ("mlt", cap)
    if key in Q._cache:
        return Q._cache[key]
    Ls, Rs = translations(Q)
    mlt = close(Ls + Rs, cap=cap, what="Mlt")
    standard = {tag: Perm._raw(bytes(img)) for tag, img in inner_generators(Q).items()}
    inn = close(sorted(set(standard.values())), cap=cap, what="Inn")
    stab = [e for e in mlt.images if e[0] == 0]
    if any(g not in mlt for g in inn.gens) or inn.element_set != frozenset(stab):
        raise CrossCheckError(
            f"<standard generators> has order {inn.order}, stabilizer of 1 has order {len(stab)}"
        )
    if mlt.order != Q.n * inn.order:
        raise CrossCheckError("|Mlt| != |Q| |Inn|")
    ctx = MltContext(Q, Ls, Rs, mlt, inn, standard, cap)
    Q._cache[key] = ctx
    return ctx


def mlt_rel(ctx: MltContext, S: SubloopHandle) -> PermGroup:
    """``Mlt_Q(S) = <L_s, R_s : s in S>``."""
    gens = [ctx.L[s] for s in S.elements] + [ctx.R[s] for s in S.elements]
    return close(gens, cap=ctx.cap, degree=ctx.n, what="Mlt_Q(S)")


def _block_labels(Q: FiniteLoop, S: SubloopHandle) -> tuple[int, ...]:
    return quotient(Q, S)[1]


def centralizes_cosets(perm: bytes, proj) -> bool:
    return all(proj[perm[u]] == proj[u] for u in range(len(perm)))


def inner_of_quotient(ctx: MltContext, S: SubloopHandle):
    """Quotient loop, projection and ``Mlt(Q/S)``."""
    F, proj = quotient(ctx.loop, S)
    Fl, Fr = translations(F)
    return F, proj, close(Fl + Fr, cap=ctx.cap, degree=F.n, what="Mlt(Q/S)")


def induced_images(ctx: MltContext, S: SubloopHandle):
    """Image in ``Mlt(Q/S)`` of every element of ``Mlt(Q)`` (list aligned with ``mlt.images``).

    Built along the enumeration words from ``L_x -> L_{xS}``, ``R_x -> R_{xS}``
    and compared with the action of each element on the cosets.
    """
    F, proj, mltF = inner_of_quotient(ctx, S)
    Fl, Fr = translations(F)
    tags = ctx.translation_tags()
    gen_img = []
    for g in ctx.mlt.gens:
        kind, u = tags[g.img]
        gen_img.append((Fl if kind == "L" else Fr)[proj[u]].img)
    blocks = {}
    for u in range(ctx.n):
        blocks.setdefault(proj[u], u)
    reps = [blocks[c] for c in range(F.n)]
    images = [bytes(range(F.n))]
    for i in range(1, ctx.mlt.order):
        par, k = ctx.mlt.parent(i)
        img = _compose(gen_img[k], images[par])
        phi = ctx.mlt.images[i]
        if any(proj[phi[reps[c]]] != img[c] for c in range(F.n)):
            raise CrossCheckError("induced map disagrees with the action on cosets", witness=(i,))
        images.append(img)
    return F, proj, mltF, images


def coset_kernel(ctx: MltContext, S: SubloopHandle) -> PermGroup:
    """``C(Q,S)``: elements of ``Mlt(Q)`` fixing every coset of ``S``.

    Computed by filtering and compared elementwise with the kernel of
    ``Mlt(Q) -> Mlt(Q/S)``; the image must be all of ``Mlt(Q/S)``.
    """
    require_normal(ctx.loop, S)
    key = ("C", S.elements)
    cache = ctx.loop._cache.setdefault(("ctx", id(ctx)), {})
    if key in cache:
        return cache[key]
    F, proj, mltF, images = induced_images(ctx, S)
    ident = bytes(range(F.n))
    filtered = [e for e in ctx.mlt.images if centralizes_cosets(e, proj)]
    kernel = [e for e, img in zip(ctx.mlt.images, images) if img == ident]
    if set(filtered) != set(kernel):
        raise CrossCheckError("coset filter and homomorphism kernel differ")
    if set(images) != mltF.element_set:
        raise CrossCheckError("image of Mlt(Q) is not Mlt(Q/S)")
    if ctx.mlt.order != len(kernel) * mltF.order:
        raise CrossCheckError("|Mlt(Q)| != |C(Q,S)| |Mlt(Q/S)|")
    C = subgroup_from_elements(filtered, ctx.n)
    cache[key] = C
    return C


def decompose_lsigma(ctx: MltContext, S: SubloopHandle, phi: Perm) -> tuple[int, Perm]:
    """Write ``phi in C(Q,S)`` as ``L_s sigma`` with ``s = phi(1)``.

    Raises ``NotInKernel`` when ``phi`` does not centralize the cosets of
    ``S``; ``s in S`` and ``sigma in Inn(Q) & C(Q,S)`` are asserted.
    """
    proj = _block_labels(ctx.loop, S)
    if phi not in ctx.mlt or not centralizes_cosets(phi.img, proj):
        raise NotInKernel("map is not in C(Q,S)")
    s = phi(0)
    sigma = ctx.L[s].inverse() * phi
    if s not in S or sigma(0) != 0 or sigma not in ctx.inn or not centralizes_cosets(sigma.img, proj):
        raise CrossCheckError("decomposition L_s sigma failed", witness=(s,))
    return s, sigma


def decompose_rsigma(ctx: MltContext, S: SubloopHandle, phi: Perm) -> tuple[int, Perm]:
    """Right-translation form ``R_s sigma`` with ``s = phi(1)``."""
    proj = _block_labels(ctx.loop, S)
    if phi not in ctx.mlt or not centralizes_cosets(phi.img, proj):
        raise NotInKernel("map is not in C(Q,S)")
    s = phi(0)
    sigma = ctx.R[s].inverse() * phi
    if s not in S or sigma not in ctx.inn:
        raise CrossCheckError("decomposition R_s sigma failed", witness=(s,))
    return s, sigma


def t_group(ctx: MltContext) -> PermGroup:
    """``<T_u : u in Q>``."""
    return close([ctx.T(u) for u in range(ctx.n)], cap=ctx.cap, degree=ctx.n, what="<T_u>")


# --- identities in terms of translations -------------------------------------


def t_inverse_violation(ctx: MltContext):
    """Some ``x`` with ``T_x^-1 != T_{x^-1}``, or None."""
    Q = ctx.loop
    for x in range(ctx.n):
        if ctx.T(x).inverse() != ctx.T(Q.inv(x)):
            return (x,)
    return None


def _t_powers(ctx: MltContext, exponents):
    out = {}
    for u in range(ctx.n):
        T = ctx.T(u)
        for k in exponents:
            out[(u, k)] = np.frombuffer((T ** k).img, dtype=np.uint8).astype(np.int64)
    return out


def cube_shift_violation(ctx: MltContext, i: int, j: int, y_exponent: int | None = None):
    """A triple ``(u, x, y)`` breaking
    ``u^{3i}x . u^{3j}y = u^{3(i+j)} . T_u^{-i-2j}(T_u^{i-j}(x) T_u^{k}(y))``, or None.

    ``k`` defaults to ``i + 2j``. With ``k = i - j`` the identity already
    fails in nonabelian groups whenever ``u^{3j}`` is not central; both
    choices agree at ``j = 0``.
    """
    Q = ctx.loop
    t = Q.table
    k = i + 2 * j if y_exponent is None else y_exponent
    pw = _t_powers(ctx, {i - j, k, -i - 2 * j})
    X = np.arange(ctx.n)[:, None]
    Y = np.arange(ctx.n)[None, :]
    for u in range(ctx.n):
        a, b, c = Q.power(u, 3 * i), Q.power(u, 3 * j), Q.power(u, 3 * (i + j))
        lhs = t[t[a, X], t[b, Y]]
        rhs = t[c, pw[(u, -i - 2 * j)][t[pw[(u, i - j)][X], pw[(u, k)][Y]]]]
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            return (u, int(bad[0][0]), int(bad[0][1]))
    return None
