"""The default corpus: small groups, Chein doubles and random abelian extensions."""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache

from .loopcore import (
    FiniteLoop,
    build_abelian_extension,
    chein_double,
    cyclic,
    dihedral,
    find_isomorphism,
    is_commutative,
    is_d_divisible,
    is_moufang,
    quaternion,
    random_extension_data,
    symmetric,
)

DEFAULT_SEED = 20240601
GROUP_MAX_ORDER = 16
CHEIN_MAX_BASE = 12
EXTENSION_COUNT = 20
EXTENSION_MAX_ORDER = 16


@dataclass(frozen=True)
class Entry:
    name: str
    loop: FiniteLoop
    kind: str  # "group", "chein" or "extension"

    @property
    def moufang(self) -> bool:
        return bool(is_moufang(self.loop))

    @property
    def three_divisible(self) -> bool:
        return self.moufang and is_d_divisible(self.loop, 3)


def _builtin_groups(max_order: int) -> list[tuple[str, FiniteLoop]]:
    out = []
    for n in range(1, max_order + 1):
        out.append((f"cyclic-{n}", cyclic(n)))
    for n in range(4, max_order + 1, 2):
        out.append((f"dihedral-{n}", dihedral(n)))
    for n in range(8, max_order + 1, 4):
        out.append((f"quaternion-{n}", quaternion(n)))
    for n in (6, 24):
        if n <= max_order:
            out.append((f"symmetric-{n}", symmetric(n)))
    return out


def distinct_groups(max_order: int = GROUP_MAX_ORDER) -> list[tuple[str, FiniteLoop]]:
    """Built-in groups up to ``max_order``, one per isomorphism class, sorted by order."""
    kept: list[tuple[str, FiniteLoop]] = []
    for name, G in sorted(_builtin_groups(max_order), key=lambda e: e[1].n):
        if not any(H.n == G.n and find_isomorphism(G, H) is not None for _, H in kept):
            kept.append((name, G))
    return kept


_EXT_BASES = (("cyclic-2", 2), ("cyclic-3", 3), ("cyclic-4", 4), ("klein-4", 4), ("cyclic-5", 5))
_EXT_FACTORS = (("cyclic-2", 2), ("cyclic-3", 3), ("cyclic-4", 4), ("klein-4", 4))


def _small(name: str) -> FiniteLoop:
    kind, n = name.rsplit("-", 1)
    return dihedral(4) if kind == "klein" else cyclic(int(n))


def random_extensions(seed: int = DEFAULT_SEED, count: int = EXTENSION_COUNT) -> list[tuple[str, FiniteLoop]]:
    rng = random.Random(seed)
    pairs = [(x, f) for x in _EXT_BASES for f in _EXT_FACTORS if x[1] * f[1] <= EXTENSION_MAX_ORDER]
    out = []
    for k in range(count):
        (xname, _), (fname, _) = rng.choice(pairs)
        data = random_extension_data(_small(xname), _small(fname), rng)
        out.append((f"ext-{k:02d}[{xname}|{fname}]", build_abelian_extension(data)))
    return out


@lru_cache(maxsize=8)
def default_corpus(seed: int = DEFAULT_SEED) -> tuple[Entry, ...]:
    entries = [Entry(name, G, "group") for name, G in distinct_groups()]
    for name, G in distinct_groups(CHEIN_MAX_BASE):
        if not is_commutative(G):
            entries.append(Entry(f"chein({name})", chein_double(G), "chein"))
    entries.extend(Entry(name, L, "extension") for name, L in random_extensions(seed))
    return tuple(entries)


def moufang_corpus(seed: int = DEFAULT_SEED) -> tuple[Entry, ...]:
    return tuple(e for e in default_corpus(seed) if e.moufang)


def three_divisible_corpus(seed: int = DEFAULT_SEED) -> tuple[Entry, ...]:
    return tuple(e for e in default_corpus(seed) if e.three_divisible)


CORPORA = {
    "default": default_corpus,
    "moufang": moufang_corpus,
    "three-divisible": three_divisible_corpus,
}
