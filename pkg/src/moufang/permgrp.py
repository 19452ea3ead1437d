"""Permutation groups by full enumeration.

Permutations have degree at most 256 and store their image sequence as
``bytes``, so composition is a single ``bytes.translate`` call. Products are
read right to left: ``(a * b)(x) == a(b(x))``.

Groups are always enumerated completely; there is no stabilizer-chain
machinery. ``DEFAULT_CAP`` bounds every enumeration.
"""

from __future__ import annotations

import math
from collections import deque
from typing import Iterable, Sequence

from .errors import CapExceeded, CrossCheckError, NotASubgroup, NotCommutative

DEFAULT_CAP = 200_000
MAX_DEGREE = 256

_tails: dict[int, bytes] = {}


def _pad(img: bytes) -> bytes:
    m = len(img)
    tail = _tails.get(m)
    if tail is None:
        tail = _tails[m] = bytes(range(m, 256))
    return img + tail


def _compose(a: bytes, b: bytes) -> bytes:
    """Image sequence of ``a * b`` (apply ``b`` first)."""
    return b.translate(_pad(a))


def _invert(a: bytes) -> bytes:
    inv = bytearray(len(a))
    for i, x in enumerate(a):
        inv[x] = i
    return bytes(inv)


class Perm:
    """A bijection of ``{0, ..., m-1}``; hashed and compared by image sequence."""

    __slots__ = ("img",)

    def __init__(self, img: Sequence[int] | bytes):
        if isinstance(img, Perm):
            img = img.img
        if len(img) > MAX_DEGREE:
            raise ValueError(f"degree {len(img)} exceeds {MAX_DEGREE}")
        b = bytes(img)
        if sorted(b) != list(range(len(b))):
            raise ValueError("image sequence is not a bijection")
        self.img = b

    @classmethod
    def _raw(cls, b: bytes) -> "Perm":
        p = object.__new__(cls)
        p.img = b
        return p

    @classmethod
    def identity(cls, degree: int) -> "Perm":
        return cls._raw(bytes(range(degree)))

    @property
    def degree(self) -> int:
        return len(self.img)

    def __call__(self, x: int) -> int:
        return self.img[x]

    def __mul__(self, other: "Perm") -> "Perm":
        return Perm._raw(_compose(self.img, other.img))

    def inverse(self) -> "Perm":
        return Perm._raw(_invert(self.img))

    def __invert__(self) -> "Perm":
        return self.inverse()

    def __pow__(self, k: int) -> "Perm":
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = Perm.identity(self.degree)
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        return isinstance(other, Perm) and self.img == other.img

    def __hash__(self):
        return hash(self.img)

    def __lt__(self, other):
        return self.img < other.img

    def is_identity(self) -> bool:
        return self.img == bytes(range(len(self.img)))

    def order(self) -> int:
        seen = bytearray(len(self.img))
        result = 1
        for i in range(len(self.img)):
            if seen[i]:
                continue
            k, j = 0, i
            while not seen[j]:
                seen[j] = 1
                j = self.img[j]
                k += 1
            result = math.lcm(result, k)
        return result

    def image_of(self, points: Iterable[int]) -> frozenset:
        return frozenset(self.img[x] for x in points)

    def __repr__(self):
        return f"Perm({list(self.img)})"


def commutator(a: Perm, b: Perm) -> Perm:
    """``[a, b] = a^-1 b^-1 a b``."""
    return a.inverse() * b.inverse() * a * b


def conjugate(a: Perm, g: Perm) -> Perm:
    """``g a g^-1``."""
    return g * a * g.inverse()


class PermGroup:
    """A fully enumerated permutation group.

    ``elements`` is in discovery order, starting with the identity; every
    element except the identity is recorded as ``gens[k] * parent`` so that
    :meth:`word` can rebuild it from the generators.
    """

    def __init__(self, degree, gens, elems, parents, index=None):
        self.degree = degree
        self.gens = tuple(gens)
        self._elems: list[bytes] = elems
        self._index = index if index is not None else {e: i for i, e in enumerate(elems)}
        self._parents = parents
        self._perms = None

    def __repr__(self):
        return f"PermGroup(order={self.order}, degree={self.degree}, ngens={len(self.gens)})"

    @property
    def order(self) -> int:
        return len(self._elems)

    def __len__(self):
        return len(self._elems)

    def __contains__(self, p) -> bool:
        img = p.img if isinstance(p, Perm) else p
        return img in self._index

    def __iter__(self):
        return iter(self.elements)

    def __eq__(self, other):
        return isinstance(other, PermGroup) and self.element_set == other.element_set

    def __hash__(self):
        return hash(self.element_set)

    @property
    def elements(self) -> list[Perm]:
        if self._perms is None:
            self._perms = [Perm._raw(e) for e in self._elems]
        return self._perms

    @property
    def images(self) -> list[bytes]:
        return self._elems

    @property
    def element_set(self) -> frozenset:
        s = getattr(self, "_eset", None)
        if s is None:
            s = self._eset = frozenset(self._elems)
        return s

    def index(self, p) -> int:
        img = p.img if isinstance(p, Perm) else p
        return self._index[img]

    def element(self, i: int) -> Perm:
        return self.elements[i]

    @property
    def identity(self) -> Perm:
        return Perm.identity(self.degree)

    def is_trivial(self) -> bool:
        return len(self._elems) == 1

    def word(self, p) -> list[int]:
        """Generator indices ``[k1, k2, ...]`` with ``p == gens[k1] * gens[k2] * ...``."""
        i = self.index(p)
        out = []
        while i:
            i, k = self._parents[i]
            out.append(k)
        return out

    def parent(self, i: int) -> tuple[int, int] | None:
        return None if i == 0 else self._parents[i]

    def is_abelian(self) -> bool:
        gs = self.gens
        return all(_compose(a.img, b.img) == _compose(b.img, a.img) for a in gs for b in gs)

    def dump(self) -> str:
        """Debug dump: one image sequence per line."""
        return "\n".join(" ".join(map(str, e)) for e in self._elems) + "\n"


def _reduce_and_close(gens, degree, cap, what, base: PermGroup | None = None):
    ident = bytes(range(degree))
    if base is None:
        elems = [ident]
        parents = [None]
        index = {ident: 0}
        kept: list[Perm] = []
    else:
        elems = list(base._elems)
        parents = list(base._parents)
        index = dict(base._index)
        kept = list(base.gens)
    for g in gens:
        if g.img in index:
            continue
        kept.append(g)
        k_new = len(kept) - 1
        pads = [_pad(s.img) for s in kept]
        # elements already present are closed under the old generators
        queue = deque()
        new_pad = pads[k_new]
        for i in range(len(elems)):
            h = elems[i].translate(new_pad)
            if h not in index:
                index[h] = len(elems)
                elems.append(h)
                parents.append((i, k_new))
                queue.append(len(elems) - 1)
        if len(elems) > cap:
            raise CapExceeded(cap, len(elems), what)
        while queue:
            i = queue.popleft()
            e = elems[i]
            for k, pad in enumerate(pads):
                h = e.translate(pad)
                if h not in index:
                    index[h] = len(elems)
                    elems.append(h)
                    parents.append((i, k))
                    queue.append(len(elems) - 1)
            if len(elems) > cap:
                raise CapExceeded(cap, len(elems), what)
    return PermGroup(degree, kept, elems, parents, index)


def close(gens: Iterable[Perm], cap: int = DEFAULT_CAP, degree: int | None = None, what="group") -> PermGroup:
    """Enumerate ``<gens>``; raises ``CapExceeded`` past ``cap`` elements.

    Generators already in the group generated so far are dropped, so
    ``G.gens`` is an irredundant prefix-generating subsequence of ``gens``.
    """
    gens = list(gens)
    if degree is None:
        if not gens:
            raise ValueError("need a degree for the trivial group")
        degree = gens[0].degree
    if any(g.degree != degree for g in gens):
        raise ValueError("generators of different degrees")
    return _reduce_and_close(gens, degree, cap, what)


def extend(G: PermGroup, gens: Iterable[Perm], cap: int = DEFAULT_CAP) -> PermGroup:
    """``<G, gens>`` reusing the enumeration of ``G``."""
    return _reduce_and_close(list(gens), G.degree, cap, "group", base=G)


def trivial_group(degree: int) -> PermGroup:
    return close([], degree=degree)


def subgroup_from_elements(elements: Iterable, degree: int, cap: int = DEFAULT_CAP) -> PermGroup:
    """Group on a subset already known to be a subgroup; the claim is verified."""
    elems = [e if isinstance(e, Perm) else Perm._raw(e) for e in elements]
    H = close(elems, cap=cap, degree=degree)
    if H.order != len(set(elems)):
        raise CrossCheckError(
            f"subset of size {len(set(elems))} generates a group of order {H.order}"
        )
    return H


def is_subgroup(H: PermGroup, G: PermGroup) -> bool:
    return H.degree == G.degree and all(h in G for h in H.gens)


def require_subgroup(H: PermGroup, G: PermGroup) -> None:
    if not is_subgroup(H, G):
        raise NotASubgroup(f"{H!r} is not contained in {G!r}")


def is_normal(H: PermGroup, G: PermGroup) -> bool:
    """Whether ``g H g^-1 == H`` for all ``g in G`` (checked on generators)."""
    require_subgroup(H, G)
    for g in G.gens:
        ginv = _invert(g.img)
        for h in H.gens:
            if _compose(g.img, _compose(h.img, ginv)) not in H:
                return False
    return True


def normal_closure(S: Iterable[Perm] | PermGroup, G: PermGroup, cap: int = DEFAULT_CAP) -> PermGroup:
    """Smallest normal subgroup of ``G`` containing ``S``."""
    seeds = list(S.gens) if isinstance(S, PermGroup) else list(S)
    for s in seeds:
        if s not in G:
            raise NotASubgroup(f"{s!r} is not in the ambient group")
    H = close(seeds, cap=cap, degree=G.degree)
    queue = deque(H.gens)
    conj = [(g.img, _invert(g.img)) for g in G.gens]
    while queue:
        h = queue.popleft().img
        for g, ginv in conj:
            c = _compose(g, _compose(h, ginv))
            if c not in H:
                cp = Perm._raw(c)
                H = extend(H, [cp], cap=cap)
                queue.append(cp)
    return H


def subnormal_chain(H: PermGroup, G: PermGroup) -> list[PermGroup] | None:
    """``[G, N_1, ..., H]`` with each term normal in the previous, or None.

    Each ``N_{i+1}`` is the normal closure of ``H`` in ``N_i``; ``H`` is
    subnormal exactly when this descending chain reaches ``H``.
    """
    require_subgroup(H, G)
    chain = [G]
    K = G
    while K.order != H.order:
        N = normal_closure(H, K)
        if N.order == K.order:
            return None
        chain.append(N)
        K = N
    return chain


def is_subnormal(H: PermGroup, G: PermGroup) -> bool:
    return subnormal_chain(H, G) is not None


def p_part(n: int, p: int) -> int:
    q = 1
    while n % p == 0:
        n //= p
        q *= p
    return q


def is_prime_power(n: int, p: int) -> bool:
    return p_part(n, p) == n


def is_p_group(G: PermGroup, p: int) -> bool:
    return is_prime_power(G.order, p)


def _is_p_element(img: bytes, p: int, bound: int) -> bool:
    # img^(p^k) for p^k >= bound must be the identity
    ident = bytes(range(len(img)))
    x = img
    q = 1
    while x != ident:
        if q >= bound:
            return False
        y = ident
        for _ in range(p):
            y = _compose(y, x)
        x = y
        q *= p
    return True


def _conjugacy_class(img: bytes, G: PermGroup) -> set[bytes]:
    conj = [(_pad(g.img), _invert(g.img)) for g in G.gens]
    cls = {img}
    queue = [img]
    while queue:
        x = queue.pop()
        xp = _pad(x)
        for gp, ginv in conj:
            c = ginv.translate(xp).translate(gp)  # g x g^-1
            if c not in cls:
                cls.add(c)
                queue.append(c)
    return cls


def _close_p_bounded(core: PermGroup, extra: Iterable[bytes], p: int, bound: int):
    """``<core, extra>`` if it is a ``p``-group, else None (stops early)."""
    H = core
    for e in extra:
        if e in H:
            continue
        try:
            H = _reduce_and_close_checked(H, Perm._raw(e), p, bound)
        except _NotPGroup:
            return None
    return H


class _NotPGroup(Exception):
    pass


def _reduce_and_close_checked(H: PermGroup, g: Perm, p: int, bound: int) -> PermGroup:
    K = extend(H, [g], cap=bound)  # a p-subgroup never exceeds the p-part
    for e in K._elems[H.order:]:
        if not _is_p_element(e, p, bound):
            raise _NotPGroup
    if not is_prime_power(K.order, p):
        raise _NotPGroup
    return K


def p_core(G: PermGroup, p: int) -> PermGroup:
    """Largest normal ``p``-subgroup of ``G``.

    Equals the subgroup generated by every ``p``-element whose normal closure
    is a ``p``-group; each conjugacy class of ``p``-elements is tried once.
    """
    bound = p_part(G.order, p)
    core = trivial_group(G.degree)
    if bound == 1:
        return core
    examined: set[bytes] = set()
    for img in G._elems:
        if img in core or img in examined:
            continue
        if not _is_p_element(img, p, bound):
            continue
        cls = _conjugacy_class(img, G)
        examined |= cls
        try:
            joined = _close_p_bounded(core, sorted(cls), p, bound)
        except CapExceeded:
            joined = None
        if joined is not None:
            core = joined
    return core


def center(G: PermGroup) -> PermGroup:
    gens = [g.img for g in G.gens]
    elems = [e for e in G._elems if all(_compose(e, g) == _compose(g, e) for g in gens)]
    return subgroup_from_elements(elems, G.degree)


def centralizer(G: PermGroup, S: Iterable[Perm]) -> PermGroup:
    imgs = [s.img for s in S]
    elems = [e for e in G._elems if all(_compose(e, g) == _compose(g, e) for g in imgs)]
    return subgroup_from_elements(elems, G.degree)


def intersection(H: PermGroup, K: PermGroup) -> PermGroup:
    small, big = (H, K) if H.order <= K.order else (K, H)
    return subgroup_from_elements([e for e in small._elems if e in big], H.degree)


def element_orders(G: PermGroup) -> list[int]:
    return [p.order() for p in G.elements]


def elementary_abelian_socle(A: PermGroup, p: int) -> PermGroup:
    """Elements of ``A`` of order dividing ``p``, for an abelian ``A``."""
    if not A.is_abelian():
        raise NotCommutative("socle is only taken of abelian groups")
    ident = bytes(range(A.degree))
    elems = []
    for e in A._elems:
        x = ident
        for _ in range(p):
            x = _compose(x, e)
        if x == ident:
            elems.append(e)
    return subgroup_from_elements(elems, A.degree)


def p_component(A, p: int, loop=None):
    """Elements of ``p``-power order in a commutative group.

    ``A`` is a :class:`PermGroup`, or a ``SubloopHandle`` together with the
    ambient ``loop``. For a normal subloop of a Moufang loop the result is
    also checked to be invariant under every standard inner generator.
    """
    if isinstance(A, PermGroup):
        if not A.is_abelian():
            raise NotCommutative("p_component needs a commutative group")
        elems = [e for e in A._elems if _is_p_element(e, p, A.order)]
        return subgroup_from_elements(elems, A.degree)

    from .loopcore import (
        SubloopHandle,
        is_abelian_group,
        is_moufang,
        is_normal_subloop,
        is_subloop,
        subloop_table,
    )
    from .loopcore.subloops import is_invariant

    if loop is None:
        raise TypeError("a SubloopHandle needs the ambient loop")
    if not is_abelian_group(subloop_table(loop, A)):
        raise NotCommutative("p_component needs a commutative group")
    S = SubloopHandle(tuple(x for x in A.elements if is_prime_power(loop.order_of(x), p)))
    if not is_subloop(loop, S.elements):
        raise CrossCheckError("p-primary part is not closed", witness=S.elements)
    if is_moufang(loop) and is_normal_subloop(loop, A) and not is_invariant(loop, S):
        raise CrossCheckError("p-primary part of a normal subloop is not normal", witness=S.elements)
    return S


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out
