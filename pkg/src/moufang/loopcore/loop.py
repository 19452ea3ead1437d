"""Finite loops stored as Cayley tables, plus the exhaustive predicates on them."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ..errors import CrossCheckError, NoIdentity, NotLatinSquare, NotPowerAssociative


@dataclass(frozen=True)
class Verdict:
    """Outcome of an exhaustive check; falsy when the check failed.

    ``clause`` names the violated condition and ``witness`` holds the
    offending tuple of element indices.
    """

    ok: bool
    clause: str | None = None
    witness: tuple | None = None

    def __bool__(self):
        return self.ok


PASS = Verdict(True)


class FiniteLoop:
    """A loop on ``{0, ..., n-1}`` with identity 0.

    Build instances with :func:`validate_loop`; the constructor trusts its
    arguments. ``mul[x][y]`` is ``x*y``, ``ldiv[x][y]`` is ``x\\y`` and
    ``rdiv[x][y]`` is ``x/y``.
    """

    __slots__ = ("n", "mul", "ldiv", "rdiv", "_cache")

    def __init__(self, mul, ldiv, rdiv):
        self.n = len(mul)
        self.mul = mul
        self.ldiv = ldiv
        self.rdiv = rdiv
        self._cache = {}

    def __repr__(self):
        return f"FiniteLoop(n={self.n})"

    def __eq__(self, other):
        return isinstance(other, FiniteLoop) and self.mul == other.mul

    def __hash__(self):
        return hash(self.mul)

    def __len__(self):
        return self.n

    @property
    def elements(self):
        return range(self.n)

    def m(self, x, y):
        return self.mul[x][y]

    def inv(self, x):
        """Right inverse ``x\\1``; the two-sided inverse in IP loops."""
        return self.ldiv[x][0]

    def power(self, x, k):
        """``x**k`` by repeated left multiplication (meaningful when power associative)."""
        if k < 0:
            x, k = self.inv(x), -k
        r = 0
        for _ in range(k):
            r = self.mul[x][r]
        return r

    def order_of(self, x):
        k, r = 1, x
        while r != 0:
            r = self.mul[x][r]
            k += 1
        return k

    @property
    def table(self):
        """Multiplication table as a read-only ``numpy`` array."""
        t = self._cache.get("np")
        if t is None:
            t = np.array(self.mul, dtype=np.int64)
            t.setflags(write=False)
            self._cache["np"] = t
        return t

    def left_translation(self, u):
        return self.mul[u]

    def right_translation(self, u):
        return tuple(row[u] for row in self.mul)

    def cached(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]


@dataclass(frozen=True)
class SubloopHandle:
    """Sorted element indices of a subloop; always contains 0."""

    elements: tuple[int, ...]

    def __post_init__(self):
        if not self.elements or self.elements[0] != 0:
            raise ValueError("a subloop handle must contain the identity 0")

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self._set

    @property
    def _set(self):
        s = self.__dict__.get("_s")
        if s is None:
            s = frozenset(self.elements)
            object.__setattr__(self, "_s", s)
        return s

    @property
    def as_set(self) -> frozenset:
        return self._set

    @property
    def is_trivial(self):
        return len(self.elements) == 1

    @classmethod
    def of(cls, elements: Iterable[int]) -> "SubloopHandle":
        return cls(tuple(sorted(set(elements) | {0})))

    def __repr__(self):
        if len(self.elements) <= 8:
            return f"SubloopHandle({list(self.elements)})"
        return f"SubloopHandle(|S|={len(self.elements)})"


def _check_square(table):
    n = len(table)
    if n == 0:
        raise NotLatinSquare("empty table")
    rows = []
    for i, row in enumerate(table):
        row = tuple(int(v) for v in row)
        if len(row) != n:
            raise NotLatinSquare(f"row {i} has {len(row)} entries, expected {n}", witness=(i,))
        for j, v in enumerate(row):
            if not 0 <= v < n:
                raise NotLatinSquare(f"entry ({i},{j}) = {v} out of range", witness=(i, j))
        rows.append(row)
    return rows


def _check_latin(rows):
    n = len(rows)
    for i, row in enumerate(rows):
        seen = {}
        for j, v in enumerate(row):
            if v in seen:
                raise NotLatinSquare(
                    f"cell ({i},{j}): row {i} repeats {v} (first at column {seen[v]})", witness=(i, j)
                )
            seen[v] = j
    for j in range(n):
        seen = {}
        for i in range(n):
            v = rows[i][j]
            if v in seen:
                raise NotLatinSquare(
                    f"cell ({i},{j}): column {j} repeats {v} (first at row {seen[v]})", witness=(i, j)
                )
            seen[v] = i


def validate_loop(table: Sequence[Sequence[int]]) -> FiniteLoop:
    """Check a Cayley table and return the loop with its division tables.

    If the identity is some element ``e != 0`` the labels ``0`` and ``e`` are
    swapped so that the result always has identity 0.
    """
    rows = _check_square(table)
    _check_latin(rows)
    n = len(rows)
    ident = None
    for e in range(n):
        if all(rows[e][x] == x and rows[x][e] == x for x in range(n)):
            ident = e
            break
    if ident is None:
        raise NoIdentity("no two-sided identity element")
    if ident != 0:
        swap = list(range(n))
        swap[0], swap[ident] = ident, 0
        new = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                new[swap[i]][swap[j]] = swap[rows[i][j]]
        rows = [tuple(r) for r in new]
    return _from_rows(rows)


def _from_rows(rows) -> FiniteLoop:
    n = len(rows)
    ldiv = [[0] * n for _ in range(n)]
    rdiv = [[0] * n for _ in range(n)]
    for x in range(n):
        row = rows[x]
        for y in range(n):
            xy = row[y]
            ldiv[x][xy] = y
            rdiv[xy][y] = x
    L = FiniteLoop(tuple(rows), tuple(map(tuple, ldiv)), tuple(map(tuple, rdiv)))
    for x in range(n):
        for y in range(n):
            if not (
                L.ldiv[x][L.mul[x][y]] == y
                and L.mul[x][L.ldiv[x][y]] == y
                and L.rdiv[L.mul[y][x]][x] == y
                and L.mul[L.rdiv[y][x]][x] == y
            ):
                raise CrossCheckError("division identities fail", witness=(x, y))
    return L


def division_identities_hold(L: FiniteLoop) -> bool:
    n, mul, ld, rd = L.n, L.mul, L.ldiv, L.rdiv
    return all(
        ld[x][mul[x][y]] == y
        and mul[x][ld[x][y]] == y
        and rd[mul[y][x]][x] == y
        and mul[rd[y][x]][x] == y
        for x in range(n)
        for y in range(n)
    )


# --- identities ------------------------------------------------------------

MOUFANG_IDENTITIES = ("x(y(xz))=((xy)x)z", "((zx)y)x=z(x(yx))", "x((yz)x)=(xy)(zx)", "(x(yz))x=(xy)(zx)")


def _moufang_sides(L, k):
    t = L.table
    X = np.arange(L.n)[:, None, None]
    Y = np.arange(L.n)[None, :, None]
    Z = np.arange(L.n)[None, None, :]
    if k == 0:
        return t[X, t[Y, t[X, Z]]], t[t[t[X, Y], X], Z]
    if k == 1:
        return t[t[t[Z, X], Y], X], t[Z, t[X, t[Y, X]]]
    if k == 2:
        return t[X, t[t[Y, Z], X]], t[t[X, Y], t[Z, X]]
    return t[t[X, t[Y, Z]], X], t[t[X, Y], t[Z, X]]


def moufang_violation(L: FiniteLoop, identity: int = 0):
    """First ``(x, y, z)`` violating Moufang identity number ``identity`` (0-3), or None."""
    lhs, rhs = _moufang_sides(L, identity)
    bad = np.argwhere(lhs != rhs)
    if len(bad) == 0:
        return None
    return tuple(int(v) for v in bad[0])


def is_moufang(L: FiniteLoop) -> Verdict:
    def compute():
        w = moufang_violation(L, 0)
        return PASS if w is None else Verdict(False, MOUFANG_IDENTITIES[0], w)

    return L.cached("moufang", compute)


def associator_violation(L: FiniteLoop, elements=None):
    """A triple from ``elements`` (default: all) with ``(xy)z != x(yz)``, or None."""
    t = L.table
    idx = np.arange(L.n) if elements is None else np.asarray(sorted(elements))
    X, Y, Z = idx[:, None, None], idx[None, :, None], idx[None, None, :]
    bad = np.argwhere(t[t[X, Y], Z] != t[X, t[Y, Z]])
    if len(bad) == 0:
        return None
    i, j, k = bad[0]
    return int(idx[i]), int(idx[j]), int(idx[k])


def is_associative(L: FiniteLoop) -> bool:
    return L.cached("assoc", lambda: associator_violation(L) is None)


def is_commutative(L: FiniteLoop) -> bool:
    t = L.table
    return bool((t == t.T).all())


def is_group(L: FiniteLoop) -> bool:
    return is_associative(L)


def is_abelian_group(L: FiniteLoop) -> bool:
    return is_associative(L) and is_commutative(L)


def generate_subloop(L: FiniteLoop, gens: Iterable[int]) -> SubloopHandle:
    """Smallest subloop containing ``gens`` (closure under all three operations)."""
    mul, ld, rd = L.mul, L.ldiv, L.rdiv
    S = {0}
    work = []
    for g in gens:
        if g not in S:
            S.add(g)
            work.append(g)
    while work:
        x = work.pop()
        for y in list(S):
            for z in (mul[x][y], mul[y][x], ld[x][y], ld[y][x], rd[x][y], rd[y][x]):
                if z not in S:
                    S.add(z)
                    work.append(z)
    return SubloopHandle(tuple(sorted(S)))


def is_subloop(L: FiniteLoop, elements: Iterable[int]) -> bool:
    S = set(elements)
    if 0 not in S:
        return False
    mul, ld, rd = L.mul, L.ldiv, L.rdiv
    return all(
        mul[x][y] in S and ld[x][y] in S and rd[x][y] in S for x in S for y in S
    )


def as_subloop(L: FiniteLoop, elements: Iterable[int]) -> SubloopHandle:
    S = SubloopHandle.of(elements)
    if not is_subloop(L, S.elements):
        raise ValueError(f"{S!r} is not closed under the loop operations")
    return S


def subloop_table(L: FiniteLoop, S: SubloopHandle) -> FiniteLoop:
    """``S`` as a loop in its own right, elements relabeled by rank in ``S``."""
    pos = {x: i for i, x in enumerate(S.elements)}
    rows = [tuple(pos[L.mul[x][y]] for y in S.elements) for x in S.elements]
    return _from_rows(rows)


@dataclass(frozen=True)
class IdentityReport:
    inverse_property: bool
    power_associative: bool
    diassociative: bool
    flexible: bool


def has_inverse_property(L: FiniteLoop) -> bool:
    mul = L.mul
    for x in range(L.n):
        xi = L.inv(x)
        for y in range(L.n):
            if mul[xi][mul[x][y]] != y or mul[mul[y][x]][xi] != y:
                return False
    return True


def is_flexible(L: FiniteLoop) -> bool:
    mul = L.mul
    return all(mul[x][mul[y][x]] == mul[mul[x][y]][x] for x in range(L.n) for y in range(L.n))


def _closures_associative(L, gen_sets) -> bool:
    seen = {}
    for gens in gen_sets:
        S = generate_subloop(L, gens)
        if S not in seen:
            seen[S] = associator_violation(L, S.elements) is None
        if not seen[S]:
            return False
    return True


def is_power_associative(L: FiniteLoop) -> bool:
    return L.cached("powassoc", lambda: _closures_associative(L, ((x,) for x in range(L.n))))


def is_diassociative(L: FiniteLoop) -> bool:
    def compute():
        pairs = ((x, y) for x in range(L.n) for y in range(x, L.n))
        return _closures_associative(L, pairs)

    return L.cached("diassoc", compute)


def check_identity_suite(L: FiniteLoop) -> IdentityReport:
    return IdentityReport(
        inverse_property=has_inverse_property(L),
        power_associative=is_power_associative(L),
        diassociative=is_diassociative(L),
        flexible=is_flexible(L),
    )


def power_map(L: FiniteLoop, d: int) -> tuple[int, ...]:
    return tuple(L.power(x, d) for x in range(L.n))


def is_d_divisible(L: FiniteLoop, d: int) -> bool:
    """Whether ``x -> x**d`` is onto.

    For Moufang loops and ``d == 3`` the answer is compared with
    ``gcd(|L|, 3) == 1``; a mismatch raises ``CrossCheckError``.
    """
    if d < 1:
        raise ValueError("d must be a positive integer")
    if not is_power_associative(L):
        raise NotPowerAssociative("x -> x**d is not well defined")
    onto = len(set(power_map(L, d))) == L.n
    if d == 3 and is_moufang(L) and onto != (math.gcd(L.n, 3) == 1):
        raise CrossCheckError(
            f"cube map onto={onto} but gcd({L.n}, 3)={math.gcd(L.n, 3)}", witness=(L.n,)
        )
    return onto


def commutator(L: FiniteLoop, x: int, y: int) -> int:
    """``[x, y] = ((xy)/x)/y``."""
    rd = L.rdiv
    return rd[rd[L.mul[x][y]][x]][y]


def associator(L: FiniteLoop, x: int, y: int, z: int) -> int:
    """``[x, y, z] = ((xy.z)/(yz))/x``."""
    mul, rd = L.mul, L.rdiv
    return rd[rd[mul[mul[x][y]][z]][mul[y][z]]][x]


@dataclass(frozen=True)
class Nuclei:
    nucleus: SubloopHandle
    left_nucleus: SubloopHandle
    center: SubloopHandle


def nuclei(L: FiniteLoop) -> Nuclei:
    """Nucleus, left nucleus and center by exhaustive membership tests.

    For Moufang loops the nucleus and left nucleus are asserted equal.
    """

    def compute():
        t = L.table
        U = np.arange(L.n)[:, None]
        V = np.arange(L.n)[None, :]
        left, middle, right = [], [], []
        for a in range(L.n):
            if (t[a, t[U, V]] == t[t[a, U], V]).all():
                left.append(a)
            if (t[U, t[a, V]] == t[t[U, a], V]).all():
                middle.append(a)
            if (t[U, t[V, a]] == t[t[U, V], a]).all():
                right.append(a)
        nuc = sorted(set(left) & set(middle) & set(right))
        center = [a for a in nuc if (t[a, :] == t[:, a]).all()]
        res = Nuclei(SubloopHandle(tuple(nuc)), SubloopHandle(tuple(left)), SubloopHandle(tuple(center)))
        if is_moufang(L) and res.nucleus != res.left_nucleus:
            raise CrossCheckError("Moufang loop with Nuc != left nucleus", witness=(len(nuc), len(left)))
        return res

    return L.cached("nuclei", compute)
