"""Normal subloops, normal closures, subloop enumeration and quotients."""

from __future__ import annotations

from typing import Iterable

from ..errors import CrossCheckError, InputError, NotNormal
from .loop import FiniteLoop, SubloopHandle, _from_rows, generate_subloop, is_subloop

ALL_SUBLOOPS_MAX_ORDER = 24


def inner_generators(L: FiniteLoop) -> dict[tuple, tuple[int, ...]]:
    """Point images of ``T_u``, ``L_{u,v}``, ``R_{u,v}`` keyed by their tag.

    Tags are ``("T", u)``, ``("L", u, v)`` and ``("R", u, v)``; maps compose
    right to left, so ``T_u(x) = (ux)/u``, ``L_{u,v}(x) = (uv)\\(u(vx))`` and
    ``R_{u,v}(x) = ((xu)v)/(uv)``.
    """

    def compute():
        n, mul, ld, rd = L.n, L.mul, L.ldiv, L.rdiv
        gens = {}
        for u in range(n):
            gens[("T", u)] = tuple(rd[mul[u][x]][u] for x in range(n))
        for u in range(n):
            for v in range(n):
                uv = mul[u][v]
                gens[("L", u, v)] = tuple(ld[uv][mul[u][mul[v][x]]] for x in range(n))
                gens[("R", u, v)] = tuple(rd[mul[mul[x][u]][v]][uv] for x in range(n))
        return gens

    return L.cached("inner_gens", compute)


def distinct_inner_generators(L: FiniteLoop) -> list[tuple[int, ...]]:
    """Deduplicated nonidentity standard generators, in first-occurrence order."""

    def compute():
        ident = tuple(range(L.n))
        seen = {ident}
        out = []
        for img in inner_generators(L).values():
            if img not in seen:
                seen.add(img)
                out.append(img)
        return out

    return L.cached("inner_gens_distinct", compute)


def normal_closure(L: FiniteLoop, elements: Iterable[int]) -> SubloopHandle:
    """Smallest normal subloop containing ``elements``.

    One worklist closes under multiplication, both divisions and every
    standard inner generator at once.
    """
    mul, ld, rd = L.mul, L.ldiv, L.rdiv
    gens = distinct_inner_generators(L)
    S = {0}
    work = []

    def add(z):
        if z not in S:
            S.add(z)
            work.append(z)

    for x in elements:
        add(x)
    while work:
        x = work.pop()
        for g in gens:
            add(g[x])
        for y in list(S):
            add(mul[x][y])
            add(mul[y][x])
            add(ld[x][y])
            add(ld[y][x])
            add(rd[x][y])
            add(rd[y][x])
    return SubloopHandle(tuple(sorted(S)))


def is_invariant(L: FiniteLoop, S: SubloopHandle) -> bool:
    """Whether every standard inner generator maps ``S`` into itself."""
    s = S.as_set
    return all(g[x] in s for g in distinct_inner_generators(L) for x in S.elements)


def is_normal_subloop(L: FiniteLoop, S: SubloopHandle) -> bool:
    return L.cached(("normal", S.elements), lambda: is_subloop(L, S.elements) and is_invariant(L, S))


def require_normal(L: FiniteLoop, S: SubloopHandle) -> None:
    if not is_normal_subloop(L, S):
        raise NotNormal(f"{S!r} is not a normal subloop")


def join(L: FiniteLoop, A: SubloopHandle, B: SubloopHandle) -> SubloopHandle:
    """Normal subloop generated by two normal subloops."""
    return normal_closure(L, A.as_set | B.as_set)


def normal_subloops(L: FiniteLoop) -> list[SubloopHandle]:
    """Every normal subloop, ascending by size then by elements.

    Every normal subloop is a join of normal closures of singletons, so the
    family is seeded with those closures and closed under pairwise joins.
    """

    def compute():
        family = {normal_closure(L, (x,)) for x in range(L.n)}
        pending = list(family)
        while pending:
            A = pending.pop()
            for B in list(family):
                J = join(L, A, B)
                if J not in family:
                    family.add(J)
                    pending.append(J)
        out = sorted(family, key=lambda S: (len(S), S.elements))
        for S in out:
            if not is_invariant(L, S):
                raise CrossCheckError(f"enumerated {S!r} is not invariant", witness=S.elements)
        return out

    return L.cached("normal_subloops", compute)


def all_subloops(L: FiniteLoop) -> list[SubloopHandle]:
    """Every subloop, found by adjoining single elements to known subloops.

    Exponential in the worst case, so restricted to ``n <= 24``.
    """
    if L.n > ALL_SUBLOOPS_MAX_ORDER:
        raise InputError(f"all_subloops is limited to order <= {ALL_SUBLOOPS_MAX_ORDER}")

    def compute():
        trivial = SubloopHandle((0,))
        found = {trivial}
        frontier = [trivial]
        while frontier:
            nxt = []
            for H in frontier:
                for x in range(L.n):
                    if x in H:
                        continue
                    K = generate_subloop(L, H.as_set | {x})
                    if K not in found:
                        found.add(K)
                        nxt.append(K)
            frontier = nxt
        return sorted(found, key=lambda S: (len(S), S.elements))

    return L.cached("all_subloops", compute)


def cosets(L: FiniteLoop, X: SubloopHandle) -> list[tuple[int, ...]]:
    """Left cosets ``uX`` ordered by their least element (``X`` itself first)."""
    seen = set()
    out = []
    for u in range(L.n):
        if u in seen:
            continue
        c = tuple(sorted({L.mul[u][x] for x in X.elements}))
        if seen.intersection(c):
            raise NotNormal("left cosets overlap", witness=(u,))
        seen.update(c)
        out.append(c)
    return out


def quotient(L: FiniteLoop, X: SubloopHandle) -> tuple[FiniteLoop, tuple[int, ...]]:
    """``L/X`` and the projection ``u -> label of uX``.

    Cosets are labeled in order of their least element, so ``X`` gets label 0.
    """
    return L.cached(("quotient", X.elements), lambda: _quotient(L, X))


def _quotient(L: FiniteLoop, X: SubloopHandle):
    require_normal(L, X)
    blocks = cosets(L, X)
    proj = [0] * L.n
    for label, block in enumerate(blocks):
        for u in block:
            proj[u] = label
    reps = [b[0] for b in blocks]
    k = len(blocks)
    rows = [tuple(proj[L.mul[reps[i]][reps[j]]] for j in range(k)) for i in range(k)]
    for a in range(L.n):
        for b in range(L.n):
            if proj[L.mul[a][b]] != rows[proj[a]][proj[b]]:
                raise CrossCheckError("coset product not well defined", witness=(a, b))
    return _from_rows(rows), tuple(proj)


def preimage(proj: tuple[int, ...], S: SubloopHandle) -> SubloopHandle:
    """Full preimage of a subloop of the quotient under ``proj``."""
    return SubloopHandle(tuple(u for u, c in enumerate(proj) if c in S))
