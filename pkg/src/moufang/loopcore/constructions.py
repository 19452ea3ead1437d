"""Corpus constructors: built-in groups, products, Chein doubles, abelian extensions."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

from ..errors import CrossCheckError, InputError, NotAGroup, NotALoop, NotLatinSquare
from .loop import (
    FiniteLoop,
    associator_violation,
    generate_subloop,
    is_abelian_group,
    is_associative,
    is_moufang,
    validate_loop,
)


def _table(elements, op):
    index = {e: i for i, e in enumerate(elements)}
    return [[index[op(a, b)] for b in elements] for a in elements]


def cyclic(n: int) -> FiniteLoop:
    if n < 1:
        raise InputError("cyclic group order must be >= 1")
    return validate_loop([[(i + j) % n for j in range(n)] for i in range(n)])


def dihedral(order: int) -> FiniteLoop:
    """Dihedral group of the given (even) order; order 4 is the Klein group."""
    if order < 2 or order % 2:
        raise InputError("dihedral group order must be even and >= 2")
    m = order // 2
    elements = [(k, f) for f in (0, 1) for k in range(m)]

    def op(x, y):
        (a, f), (b, g) = x, y
        return ((a + (b if f == 0 else -b)) % m, f ^ g)

    return validate_loop(_table(elements, op))


def quaternion(order: int) -> FiniteLoop:
    """Dicyclic group of order ``4m`` (generalized quaternion when ``m`` is a power of 2)."""
    if order < 8 or order % 4:
        raise InputError("quaternion (dicyclic) group order must be a multiple of 4, >= 8")
    m = order // 4
    elements = [(k, f) for f in (0, 1) for k in range(2 * m)]

    # a^k x^f with x a x^-1 = a^-1 and x^2 = a^m
    def op(p, q):
        (a, f), (b, g) = p, q
        if f == 0:
            return ((a + b) % (2 * m), g)
        k = (a - b) % (2 * m)
        return (k, 1) if g == 0 else ((k + m) % (2 * m), 0)

    return validate_loop(_table(elements, op))


def symmetric(order: int) -> FiniteLoop:
    """Symmetric group ``S_k`` with ``k! == order`` (orders 1, 2, 6, 24)."""
    degree = {1: 1, 2: 2, 6: 3, 24: 4}.get(order)
    if degree is None:
        raise InputError("symmetric group order must be one of 1, 2, 6, 24")
    elements = sorted(itertools.permutations(range(degree)))
    return validate_loop(_table(elements, lambda p, q: tuple(p[i] for i in q)))


BUILTIN_GROUPS = {
    "cyclic": cyclic,
    "dihedral": dihedral,
    "quaternion": quaternion,
    "symmetric": symmetric,
}

BUILTIN_MAX_ORDER = 24


def builtin_group(kind: str, order: int) -> FiniteLoop:
    if kind not in BUILTIN_GROUPS:
        raise InputError(f"unknown group family {kind!r}; choose from {sorted(BUILTIN_GROUPS)}")
    if order > BUILTIN_MAX_ORDER:
        raise InputError(f"built-in groups are limited to order <= {BUILTIN_MAX_ORDER}")
    return BUILTIN_GROUPS[kind](order)


def direct_product(A: FiniteLoop, B: FiniteLoop) -> FiniteLoop:
    """``A x B`` with ``(a, b)`` stored at index ``a * |B| + b``."""
    nb = B.n
    rows = [
        [A.mul[a1][a2] * nb + B.mul[b1][b2] for a2 in range(A.n) for b2 in range(nb)]
        for a1 in range(A.n)
        for b1 in range(nb)
    ]
    return validate_loop(rows)


def chein_double(G: FiniteLoop) -> FiniteLoop:
    """The Moufang loop ``M(G, 2)`` on ``G`` (indices ``g``) and ``Gu`` (indices ``n + g``).

    ``g.h = gh``, ``g.(hu) = (hg)u``, ``(gu).h = (gh^-1)u``, ``(gu).(hu) = h^-1 g``.
    """
    if not is_associative(G):
        raise NotAGroup("Chein doubling needs a group", witness=associator_violation(G))
    n, mul = G.n, G.mul
    inv = [G.inv(g) for g in range(n)]
    rows = [[0] * (2 * n) for _ in range(2 * n)]
    for g in range(n):
        for h in range(n):
            rows[g][h] = mul[g][h]
            rows[g][n + h] = n + mul[h][g]
            rows[n + g][h] = n + mul[g][inv[h]]
            rows[n + g][n + h] = mul[inv[h]][g]
    Q = validate_loop(rows)
    if not is_moufang(Q):
        raise CrossCheckError("Chein double is not Moufang", witness=is_moufang(Q).witness)
    return Q


# --- isomorphisms ------------------------------------------------------------


def _generating_sequence(L: FiniteLoop) -> list[int]:
    gens = []
    span = generate_subloop(L, ())
    for x in range(L.n):
        if x not in span:
            gens.append(x)
            span = generate_subloop(L, gens)
            if len(span) == L.n:
                break
    return gens


def _spanning_words(L: FiniteLoop, gens):
    """Build order: each entry is ``(element, op, a, b)`` where ``element = a op b``."""
    known = [0] + list(gens)
    words = []
    have = set(known)
    ops = (("*", L.mul), ("\\", L.ldiv), ("/", L.rdiv))
    changed = True
    while changed:
        changed = False
        for a, b in itertools.product(list(known), repeat=2):
            for name, tbl in ops:
                z = tbl[a][b]
                if z not in have:
                    have.add(z)
                    known.append(z)
                    words.append((z, name, a, b))
                    changed = True
    return words


def _signature(L, x):
    # cheap isomorphism invariant: size of the subloop generated by x
    return len(generate_subloop(L, (x,)))


def isomorphisms(A: FiniteLoop, B: FiniteLoop) -> Iterator[tuple[int, ...]]:
    """All isomorphisms ``A -> B`` as image tuples, by backtracking over generators."""
    if A.n != B.n:
        return
    gens = _generating_sequence(A)
    words = _spanning_words(A, gens)
    sig_a = [_signature(A, x) for x in range(A.n)]
    sig_b = [_signature(B, x) for x in range(B.n)]
    if sorted(sig_a) != sorted(sig_b):
        return
    ops_b = {"*": B.mul, "\\": B.ldiv, "/": B.rdiv}
    candidates = [[y for y in range(B.n) if sig_b[y] == sig_a[g] and y != 0] for g in gens]
    for images in itertools.product(*candidates):
        f = {0: 0}
        ok = True
        for g, y in zip(gens, images):
            if g in f and f[g] != y:
                ok = False
                break
            f[g] = y
        if not ok:
            continue
        for z, op, a, b in words:
            f[z] = ops_b[op][f[a]][f[b]]
        if len(set(f.values())) != A.n:
            continue
        if all(f[A.mul[x][y]] == B.mul[f[x]][f[y]] for x in range(A.n) for y in range(A.n)):
            yield tuple(f[x] for x in range(A.n))


def find_isomorphism(A: FiniteLoop, B: FiniteLoop) -> tuple[int, ...] | None:
    return next(isomorphisms(A, B), None)


def automorphisms(A: FiniteLoop) -> list[tuple[int, ...]]:
    return sorted(isomorphisms(A, A))


# --- abelian extensions ------------------------------------------------------


@dataclass(frozen=True)
class ExtensionData:
    """Data ``(X, F, t, phi, psi, theta)`` of an abelian extension of ``X`` by ``F``.

    ``phi[r][s]`` and ``psi[r][s]`` are automorphisms of ``X`` (image tuples),
    ``theta[r][s]`` is an element of ``X`` and ``transversal[r]`` is the
    element of the extension chosen for ``r in F`` (``transversal[0] == 0``).
    The product is ``rx . sy = t . phi(x) psi(y) theta`` with ``t`` the
    transversal element over ``rs``.
    """

    base: FiniteLoop
    factor: FiniteLoop
    transversal: tuple[int, ...]
    phi: tuple[tuple[tuple[int, ...], ...], ...]
    psi: tuple[tuple[tuple[int, ...], ...], ...]
    theta: tuple[tuple[int, ...], ...]

    def validate(self) -> None:
        X, F = self.base, self.factor
        if not is_abelian_group(X):
            raise InputError("extension base must be a commutative group")
        ident = tuple(range(X.n))
        if self.transversal[0] != 0:
            raise InputError("transversal must send the identity to 0")
        for r in range(F.n):
            for s in range(F.n):
                for name, f in (("phi", self.phi[r][s]), ("psi", self.psi[r][s])):
                    if sorted(f) != list(ident) or any(
                        f[X.mul[x][y]] != X.mul[f[x]][f[y]] for x in range(X.n) for y in range(X.n)
                    ):
                        raise InputError(f"{name}[{r}][{s}] is not an automorphism of the base")
        for r in range(F.n):
            if self.phi[r][0] != ident or self.psi[0][r] != ident:
                raise InputError(f"need phi[{r}][1] = psi[1][{r}] = id")
            if self.psi[r][0] != ident:
                # x = 1 in the product formula forces r.y = r.psi_{r,1}(y)
                raise InputError(f"need psi[{r}][1] = id")
            if self.theta[r][0] != 0 or self.theta[0][r] != 0:
                raise InputError(f"need theta[{r}][1] = theta[1][{r}] = 1")


def build_abelian_extension(data: ExtensionData) -> FiniteLoop:
    """Loop on pairs ``(r, x)``, stored at index ``r * |X| + x``."""
    data.validate()
    X, F = data.base, data.factor
    k = X.n
    xm = X.mul
    rows = []
    for r in range(F.n):
        for x in range(k):
            row = []
            for s in range(F.n):
                t = F.mul[r][s]
                fx = data.phi[r][s][x]
                th = data.theta[r][s]
                ps = data.psi[r][s]
                for y in range(k):
                    row.append(t * k + xm[xm[fx][ps[y]]][th])
            rows.append(row)
    try:
        return validate_loop(rows)
    except NotLatinSquare as exc:
        raise NotALoop(f"extension data do not give a Latin square: {exc}", witness=exc.witness) from exc


def trivial_extension_data(X: FiniteLoop, F: FiniteLoop) -> ExtensionData:
    ident = tuple(range(X.n))
    ids = tuple(tuple(ident for _ in range(F.n)) for _ in range(F.n))
    return ExtensionData(
        base=X,
        factor=F,
        transversal=tuple(r * X.n for r in range(F.n)),
        phi=ids,
        psi=ids,
        theta=tuple(tuple(0 for _ in range(F.n)) for _ in range(F.n)),
    )


def random_extension_data(X: FiniteLoop, F: FiniteLoop, rng) -> ExtensionData:
    """Random data satisfying every normalization; ``rng`` is a ``random.Random``."""
    auts = automorphisms(X)
    ident = tuple(range(X.n))
    phi, psi, theta = [], [], []
    for r in range(F.n):
        prow, qrow, trow = [], [], []
        for s in range(F.n):
            edge = r == 0 or s == 0
            prow.append(ident if s == 0 else rng.choice(auts))
            qrow.append(ident if edge else rng.choice(auts))
            trow.append(0 if edge else rng.randrange(X.n))
        phi.append(tuple(prow))
        psi.append(tuple(qrow))
        theta.append(tuple(trow))
    return ExtensionData(
        base=X,
        factor=F,
        transversal=tuple(r * X.n for r in range(F.n)),
        phi=tuple(phi),
        psi=tuple(psi),
        theta=tuple(theta),
    )

