"""Abelian congruences of loops, abelian extensions and solvability.

A normal subloop ``X`` of ``Q`` induces an abelian congruence exactly when
every inner mapping restricts to an automorphism of ``X`` and
``[x,y] = [x,y,u] = [x,u,y] = [u,x,y] = 1``, ``[x,u,v] = [x,u,w]`` for all
``x, y in X`` and ``u, v, w in Q`` with ``vX = wX``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .errors import (
    BadTransversal,
    CrossCheckError,
    NotAbelianCongruence,
    NotMoufang,
    NotThreeDivisible,
    NucleusNotTrivial,
    NotSolvable,
)
from .loopcore import (
    PASS,
    ExtensionData,
    FiniteLoop,
    SubloopHandle,
    Verdict,
    cosets,
    distinct_inner_generators,
    inner_generators,
    is_abelian_group,
    is_d_divisible,
    is_moufang,
    normal_closure,
    normal_subloops,
    nuclei,
    preimage,
    quotient,
    require_normal,
    subloop_table,
)
from .permgrp import p_component, prime_factors

ORACLE_SAMPLES = 100


def _assoc_table(Q: FiniteLoop) -> np.ndarray:
    """``A[x, y, z] = ((xy . z) / (yz)) / x``."""
    t = Q.table
    rd = np.asarray(Q.rdiv, dtype=np.int64)
    n = Q.n
    X = np.arange(n)[:, None, None]
    Y = np.arange(n)[None, :, None]
    Z = np.arange(n)[None, None, :]
    return rd[rd[t[t[X, Y], Z], t[Y, Z]], np.broadcast_to(X, (n, n, n))]


def associator_table(Q: FiniteLoop) -> np.ndarray:
    return Q.cached("associator_table", lambda: _assoc_table(Q))


def _restriction_defect(Q: FiniteLoop, img, elems: np.ndarray):
    """First ``(x, y)`` in ``X`` with ``f(xy) != f(x) f(y)``, or a point mapped out of ``X``."""
    t = Q.table
    f = np.asarray(img, dtype=np.int64)
    members = np.zeros(Q.n, dtype=bool)
    members[elems] = True
    out = np.flatnonzero(~members[f[elems]])
    if len(out):
        return (int(elems[out[0]]),)
    lhs = f[t[elems[:, None], elems[None, :]]]
    rhs = t[f[elems][:, None], f[elems][None, :]]
    bad = np.argwhere(lhs != rhs)
    if len(bad):
        return (int(elems[bad[0][0]]), int(elems[bad[0][1]]))
    return None


def _tagged_generators(Q: FiniteLoop) -> dict[tuple, tuple[int, ...]]:
    """One tag per distinct nonidentity standard generator."""

    def compute():
        firsts = {}
        for tag, img in inner_generators(Q).items():
            firsts.setdefault(img, tag)
        firsts.pop(tuple(range(Q.n)), None)
        return {tag: img for img, tag in firsts.items()}

    return Q.cached("inner_gens_tagged", compute)


def _generator_clause(Q: FiniteLoop, X: SubloopHandle) -> Verdict:
    elems = np.array(X.elements, dtype=np.int64)
    for tag, img in _tagged_generators(Q).items():
        bad = _restriction_defect(Q, img, elems)
        if bad is not None:
            return Verdict(False, f"inner mapping {tag} is not an automorphism of X", tag[1:] + bad)
    return PASS


def _random_inner_words(Q: FiniteLoop, count: int, seed: int):
    gens = distinct_inner_generators(Q)
    rng = random.Random(seed)
    for _ in range(count):
        img = list(range(Q.n))
        for _ in range(rng.randint(1, 12)):
            g = rng.choice(gens) if gens else tuple(range(Q.n))
            img = [g[v] for v in img]
        yield tuple(img)


def abelian_oracle(Q: FiniteLoop, X: SubloopHandle, samples: int = ORACLE_SAMPLES, seed: int = 0) -> Verdict:
    """Whether ``X`` induces an abelian congruence of ``Q``.

    Inner mappings are tested on the standard generators; ``samples`` random
    products of generators are tested as well and must agree.
    """
    require_normal(Q, X)

    def compute():
        verdict = _oracle(Q, X)
        if verdict:
            elems = np.array(X.elements, dtype=np.int64)
            for img in _random_inner_words(Q, samples, seed):
                if _restriction_defect(Q, img, elems) is not None:
                    raise CrossCheckError("a product of generators fails on X while the generators pass")
            if not is_abelian_group(subloop_table(Q, X)):
                raise CrossCheckError("abelian congruence on a non-commutative-group subloop", witness=X.elements)
        return verdict

    return Q.cached(("oracle", X.elements, samples, seed), compute)


def _oracle(Q: FiniteLoop, X: SubloopHandle) -> Verdict:
    v = _generator_clause(Q, X)
    if not v:
        return v
    A = associator_table(Q)
    xs = np.array(X.elements, dtype=np.int64)
    rd = np.asarray(Q.rdiv, dtype=np.int64)
    t = Q.table
    comm = rd[rd[t[xs[:, None], xs[None, :]], xs[:, None]], xs[None, :]]
    bad = np.argwhere(comm != 0)
    if len(bad):
        return Verdict(False, "[x,y] = 1", (int(xs[bad[0][0]]), int(xs[bad[0][1]])))
    every = np.arange(Q.n)
    for name, axes in (
        ("[x,y,u] = 1", (xs, xs, every)),
        ("[x,u,y] = 1", (xs, every, xs)),
        ("[u,x,y] = 1", (every, xs, xs)),
    ):
        bad = np.argwhere(A[np.ix_(*axes)] != 0)
        if len(bad):
            return Verdict(False, name, tuple(int(ax[i]) for ax, i in zip(axes, bad[0])))
    # [x,u,v] = [x,u,w] whenever vX = wX: compare with v the least element of its coset
    _, proj = quotient(Q, X)
    reps = {}
    for w in range(Q.n):
        reps.setdefault(proj[w], w)
    rep_of = np.array([reps[proj[w]] for w in range(Q.n)], dtype=np.int64)
    sub = A[xs]  # sub[i, u, w] = [x_i, u, w]
    bad = np.argwhere(sub != sub[:, :, rep_of])
    if len(bad):
        i, u, w = bad[0]
        return Verdict(False, "[x,u,v] = [x,u,w]", (int(xs[i]), int(u), int(rep_of[w]), int(w)))
    return PASS


def abelian_moufang(Q: FiniteLoop, X: SubloopHandle) -> Verdict:
    """Moufang criterion: generators restrict to automorphisms and ``u . xy = uy . x``."""
    if not is_moufang(Q):
        raise NotMoufang("Q is not Moufang", witness=is_moufang(Q).witness)
    require_normal(Q, X)
    v = _generator_clause(Q, X)
    return v if not v else _uxy_clause(Q, X)


def _uxy_clause(Q: FiniteLoop, X: SubloopHandle) -> Verdict:
    t = Q.table
    xs = np.array(X.elements, dtype=np.int64)
    U = np.arange(Q.n)[:, None, None]
    lhs = t[U, t[xs[:, None], xs[None, :]][None]]
    rhs = t[t[U, xs[None, None, :]], xs[None, :, None]]
    bad = np.argwhere(lhs != rhs)
    if len(bad):
        u, i, j = bad[0]
        return Verdict(False, "u . xy = uy . x", (int(u), int(xs[i]), int(xs[j])))
    return PASS


def abelian_3div(Q: FiniteLoop, X: SubloopHandle) -> Verdict:
    """3-divisible Moufang criterion: only ``u . xy = uy . x``."""
    if not is_moufang(Q):
        raise NotMoufang("Q is not Moufang", witness=is_moufang(Q).witness)
    if not is_d_divisible(Q, 3):
        raise NotThreeDivisible(f"order {Q.n} is divisible by 3")
    require_normal(Q, X)
    return _uxy_clause(Q, X)


# --- abelian extensions --------------------------------------------------------


def default_transversal(Q: FiniteLoop, X: SubloopHandle) -> tuple[int, ...]:
    """Least element of each coset, in coset-label order."""
    return tuple(block[0] for block in cosets(Q, X))


def extract_extension(Q: FiniteLoop, X: SubloopHandle, transversal=None) -> ExtensionData:
    """Read off ``(phi, psi, theta)`` with ``rx . sy = t . phi_{r,s}(x) psi_{r,s}(y) theta_{r,s}``.

    ``transversal[r]`` represents coset ``r`` of ``Q/X`` (labels as in
    :func:`quotient`). The data is normalized, each map is an automorphism
    of ``X``, and the reconstruction identity holds at every point. For
    Moufang ``Q``, ``psi_{r,s}`` is compared with ``L_{r,s}`` and
    ``phi_{r,s}`` with ``L_{r,s} T_s^-1 L_{s^-1,r}`` on ``X``.
    """
    verdict = abelian_oracle(Q, X)
    if not verdict:
        raise NotAbelianCongruence(f"X does not induce an abelian congruence ({verdict.clause})", witness=verdict.witness)
    F, proj = quotient(Q, X)
    T = default_transversal(Q, X) if transversal is None else tuple(transversal)
    if len(T) != F.n or sorted(proj[r] for r in T) != list(range(F.n)):
        raise BadTransversal("transversal must meet every coset exactly once")
    if T[0] != 0 or any(proj[r] != i for i, r in enumerate(T)):
        raise BadTransversal("transversal[i] must lie in coset i and transversal[0] must be 1")
    Xl = subloop_table(Q, X)
    pos = {x: i for i, x in enumerate(X.elements)}
    k = Xl.n
    mul, ld = Q.mul, Q.ldiv

    def coord(r_label, q):
        return pos[ld[T[r_label]][q]]

    phi, psi, theta = [], [], []
    for r in range(F.n):
        prow, qrow, trow = [], [], []
        for s in range(F.n):
            rs = F.mul[r][s]

            def z(x, y):
                return coord(rs, mul[mul[T[r]][X.elements[x]]][mul[T[s]][X.elements[y]]])

            th = z(0, 0)
            inv_th = Xl.inv(th)
            f = tuple(Xl.mul[z(x, 0)][inv_th] for x in range(k))
            g = tuple(Xl.mul[z(0, y)][inv_th] for y in range(k))
            for x in range(k):
                for y in range(k):
                    if z(x, y) != Xl.mul[Xl.mul[f[x]][g[y]]][th]:
                        raise CrossCheckError("reconstruction identity fails", witness=(T[r], T[s], x, y))
            prow.append(f)
            qrow.append(g)
            trow.append(th)
        phi.append(tuple(prow))
        psi.append(tuple(qrow))
        theta.append(tuple(trow))
    data = ExtensionData(Xl, F, T, tuple(phi), tuple(psi), tuple(theta))
    data.validate()
    if is_moufang(Q):
        _closed_form_check(Q, X, data)
    return data


def _closed_form_check(Q: FiniteLoop, X: SubloopHandle, data: ExtensionData) -> None:
    gens = inner_generators(Q)
    T = data.transversal
    for r in range(data.factor.n):
        for s in range(data.factor.n):
            a, b = T[r], T[s]
            Lab = gens[("L", a, b)]
            Tb = gens[("T", b)]
            Tb_inv = [0] * Q.n
            for i, v in enumerate(Tb):
                Tb_inv[v] = i
            Lbr = gens[("L", Q.inv(b), a)]
            for i, x in enumerate(X.elements):
                if X.elements[data.psi[r][s][i]] != Lab[x]:
                    raise CrossCheckError("psi differs from L_{r,s} on X", witness=(a, b, x))
                if X.elements[data.phi[r][s][i]] != Lab[Tb_inv[Lbr[x]]]:
                    raise CrossCheckError("phi differs from L_{r,s} T_s^-1 L_{s^-1,r} on X", witness=(a, b, x))


def extension_pairing(data: ExtensionData, Q: FiniteLoop, X: SubloopHandle) -> tuple[int, ...]:
    """Index ``r * |X| + x`` of the built extension to the element ``t_r x`` of ``Q``."""
    return tuple(Q.mul[t][x] for t in data.transversal for x in X.elements)


# --- solvability -----------------------------------------------------------------


def _commutators_and_associators(Q: FiniteLoop, S: SubloopHandle) -> set[int]:
    xs = np.array(S.elements, dtype=np.int64)
    A = associator_table(Q)[np.ix_(xs, xs, xs)]
    rd = np.asarray(Q.rdiv, dtype=np.int64)
    t = Q.table
    comm = rd[rd[t[xs[:, None], xs[None, :]], xs[:, None]], xs[None, :]]
    return set(np.unique(A).tolist()) | set(np.unique(comm).tolist())


def derived_subloop(Q: FiniteLoop, S: SubloopHandle | None = None) -> SubloopHandle:
    """Normal closure in ``Q`` of the commutators and associators of ``S`` (default ``Q``)."""
    S = SubloopHandle(tuple(range(Q.n))) if S is None else S
    return normal_closure(Q, _commutators_and_associators(Q, S))


@dataclass(frozen=True)
class SolvabilityResult:
    solvable: bool
    series: tuple[SubloopHandle, ...]

    def __bool__(self):
        return self.solvable

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(S.elements) for S in self.series)


def classical_series(Q: FiniteLoop) -> tuple[SubloopHandle, ...]:
    """``Q >= D(Q) >= D^2(Q) >= ...`` until it stabilizes."""
    series = [SubloopHandle(tuple(range(Q.n)))]
    while True:
        nxt = derived_subloop(Q, series[-1])
        if nxt == series[-1]:
            return tuple(series)
        series.append(nxt)


def is_classically_solvable(Q: FiniteLoop) -> SolvabilityResult:
    """Solvable iff the derived chain reaches 1; each factor is checked to be a commutative group."""

    def compute():
        series = classical_series(Q)
        for upper, lower in zip(series, series[1:]):
            sub = subloop_table(Q, upper)
            pos = {x: i for i, x in enumerate(upper.elements)}
            low = SubloopHandle(tuple(pos[x] for x in lower.elements))
            F, _ = quotient(sub, low)
            if not is_abelian_group(F):
                raise CrossCheckError("derived factor is not a commutative group", witness=lower.elements)
        return SolvabilityResult(series[-1].is_trivial, series)

    return Q.cached("classical", compute)


def abelian_normal_subloops(Q: FiniteLoop) -> list[SubloopHandle]:
    """Nontrivial normal subloops inducing abelian congruences, ascending by size."""
    return [X for X in normal_subloops(Q) if not X.is_trivial and abelian_oracle(Q, X)]


def _minimal(family: list[SubloopHandle]) -> list[SubloopHandle]:
    return [X for X in family if not any(Y != X and Y.as_set < X.as_set for Y in family)]


def is_congruence_solvable(Q: FiniteLoop) -> SolvabilityResult:
    """Recursive search: peel off a minimal abelian-inducing ``X`` and recurse on ``Q/X``.

    If the first choice fails, every other minimal choice is tried; a later
    success would contradict choice-independence and raises ``CrossCheckError``.
    """

    def compute():
        top = SubloopHandle(tuple(range(Q.n)))
        if Q.n == 1:
            return SolvabilityResult(True, (top,))
        candidates = _minimal(abelian_normal_subloops(Q))
        if not candidates:
            return SolvabilityResult(False, (top,))
        first = None
        for i, X in enumerate(candidates):
            F, proj = quotient(Q, X)
            sub = is_congruence_solvable(F)
            if i == 0:
                first = (X, proj, sub)
                if sub:
                    break
            elif sub:
                raise CrossCheckError("congruence solvability depends on the chosen subloop", witness=X.elements)
        X, proj, sub = first
        lifted = tuple(preimage(proj, S) for S in sub.series)
        return SolvabilityResult(sub.solvable, lifted + ((SubloopHandle((0,)),) if sub.solvable else ()))

    return Q.cached("congruence", compute)


def find_triality_seed(Q: FiniteLoop, require_trivial_nucleus: bool = True):
    """``(p, S, A)``: ``A`` the last nontrivial term of the classical series,
    ``p`` the least prime dividing ``|A|`` and ``S`` its ``p``-primary part.
    """
    if require_trivial_nucleus and not nuclei(Q).nucleus.is_trivial:
        raise NucleusNotTrivial("Q has a nontrivial nucleus", witness=nuclei(Q).nucleus.elements)
    result = is_classically_solvable(Q)
    if not result:
        raise NotSolvable("Q is not classically solvable", witness=result.series[-1].elements)
    if Q.n == 1:
        raise NotSolvable("the trivial loop has no nontrivial normal subloop")
    A = result.series[-2]
    p = prime_factors(len(A.elements))[0]
    if p == 3 and is_moufang(Q) and is_d_divisible(Q, 3):
        raise CrossCheckError("p = 3 in a 3-divisible loop")
    S = p_component(A, p, loop=Q)
    require_normal(Q, S)
    return p, S, A
