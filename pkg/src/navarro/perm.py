"""Permutation groups: Schreier-Sims, conjugacy classes, Sylow 2-subgroups.

Permutations are plain tuples of images on {0..d-1}.  Products are read
left to right: ``pmul(a, b)`` applies ``a`` first, then ``b``.  Everything
that needs the full element list is guarded by ``max_order``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from math import gcd
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

Perm = Tuple[int, ...]

DEFAULT_MAX_ORDER = 200_000


class SizeGuardError(RuntimeError):
    """Raised when a group is larger than the configured element bound."""


def make_perm(images: Iterable[int], degree: Optional[int] = None) -> Perm:
    p = tuple(int(i) for i in images)
    if degree is not None and len(p) != degree:
        raise ValueError(f"expected {degree} images, got {len(p)}")
    if sorted(p) != list(range(len(p))):
        raise ValueError(f"not a permutation: {p}")
    return p


def identity(degree: int) -> Perm:
    return tuple(range(degree))


def pmul(a: Perm, b: Perm) -> Perm:
    return tuple([b[i] for i in a])


def pinv(a: Perm) -> Perm:
    out = [0] * len(a)
    for i, j in enumerate(a):
        out[j] = i
    return tuple(out)


def ppow(a: Perm, e: int) -> Perm:
    if e < 0:
        a, e = pinv(a), -e
    result = identity(len(a))
    while e:
        if e & 1:
            result = pmul(result, a)
        a = pmul(a, a)
        e >>= 1
    return result


def conj(x: Perm, g: Perm) -> Perm:
    """x^g = g^-1 x g."""
    return tuple([g[x[i]] for i in pinv(g)])


def cycle_type(a: Perm) -> Tuple[int, ...]:
    seen = [False] * len(a)
    lengths = []
    for i in range(len(a)):
        if not seen[i]:
            n, j = 0, i
            while not seen[j]:
                seen[j] = True
                j = a[j]
                n += 1
            lengths.append(n)
    return tuple(sorted(lengths, reverse=True))


def perm_order(a: Perm) -> int:
    o = 1
    for n in cycle_type(a):
        o = o * n // gcd(o, n)
    return o


def from_cycles(degree: int, *cycles: Sequence[int]) -> Perm:
    img = list(range(degree))
    for c in cycles:
        for i, x in enumerate(c):
            img[x] = c[(i + 1) % len(c)]
    return make_perm(img)


class PermGroup:
    """A permutation group with a base and strong generating set.

    The stabilizer chain is built deterministically on construction, so
    ``order`` and ``contains`` are available immediately; element lists,
    conjugacy classes and subgroup searches are computed lazily.
    """

    def __init__(self, degree: int, generators: Iterable[Perm] = (),
                 max_order: int = DEFAULT_MAX_ORDER, name: str = ""):
        self.degree = degree
        self.max_order = max_order
        self.name = name
        ident = identity(degree)
        gens = []
        for g in generators:
            g = make_perm(g, degree)
            if g != ident and g not in gens:
                gens.append(g)
        self.generators: List[Perm] = gens
        self._elements: Optional[List[Perm]] = None
        self._element_set: Optional[frozenset] = None
        self._classes = None
        self._schreier_sims()
        if self.order > max_order:
            raise SizeGuardError(
                f"group order {self.order} exceeds the bound {max_order}")
        # optional metadata attached by constructors (e.g. matrix actions)
        self.meta: dict = {}

    # -- Schreier-Sims ----------------------------------------------------
    def _schreier_sims(self) -> None:
        self.base: List[int] = []
        self.strong: List[List[Perm]] = []   # strong gens of each stabilizer
        self.transversals: List[Dict[int, Perm]] = []
        for g in self.generators:
            self._extend(g, 0)
        self.order = 1
        for t in self.transversals:
            self.order *= len(t)

    def _orbit_transversal(self, level: int) -> None:
        beta = self.base[level]
        gens = self.strong[level]
        trans = {beta: identity(self.degree)}
        queue = deque([beta])
        while queue:
            x = queue.popleft()
            u = trans[x]
            for s in gens:
                y = s[x]
                if y not in trans:
                    trans[y] = pmul(u, s)
                    queue.append(y)
        self.transversals[level] = trans

    def _sift(self, g: Perm, start: int = 0) -> Tuple[Perm, int]:
        for level in range(start, len(self.base)):
            b = g[self.base[level]]
            u = self.transversals[level].get(b)
            if u is None:
                return g, level
            g = pmul(g, pinv(u))
        return g, len(self.base)

    def _extend(self, g: Perm, level: int) -> None:
        """Add g to the strong generators from `level` down and restore closure."""
        h, lvl = self._sift(g, level)
        if h == identity(self.degree):
            return
        if lvl == len(self.base):
            moved = next(i for i in range(self.degree) if h[i] != i)
            self.base.append(moved)
            self.strong.append([])
            self.transversals.append({})
        for j in range(level, lvl + 1):
            self.strong[j].append(h)
        for j in range(lvl, level - 1, -1):
            self._orbit_transversal(j)
            # every Schreier generator must sift through the chain below j
            trans = self.transversals[j]
            for x, u in list(trans.items()):
                for s in list(self.strong[j]):
                    us = pmul(u, s)
                    v = trans[s[x]]
                    sg = pmul(us, pinv(v))
                    if self._sift(sg, j + 1)[0] != identity(self.degree):
                        self._extend(sg, j + 1)
                        trans = self.transversals[j]

    # -- basic queries ----------------------------------------------------
    def contains(self, g: Perm) -> bool:
        if len(g) != self.degree:
            return False
        return self._sift(tuple(g))[0] == identity(self.degree)

    __contains__ = contains

    def identity(self) -> Perm:
        return identity(self.degree)

    def elements(self) -> List[Perm]:
        if self._elements is None:
            if self.order > self.max_order:
                raise SizeGuardError(f"order {self.order} exceeds {self.max_order}")
            elems = [identity(self.degree)]
            # g = u_k ... u_1 with u_i in the i-th transversal
            for trans in reversed(self.transversals):
                reps = list(trans.values())
                elems = [pmul(e, u) for e in elems for u in reps]
            self._elements = elems
        return self._elements

    def element_set(self) -> frozenset:
        if self._element_set is None:
            self._element_set = frozenset(self.elements())
        return self._element_set

    def __iter__(self) -> Iterator[Perm]:
        return iter(self.elements())

    def __len__(self) -> int:
        return self.order

    def subgroup(self, generators: Iterable[Perm], name: str = "") -> "PermGroup":
        gens = list(generators)
        for g in gens:
            if not self.contains(g):
                raise ValueError("generator is not an element of the group")
        return PermGroup(self.degree, gens, max_order=self.max_order, name=name)

    def exponent(self) -> int:
        e = 1
        for rep in self.conjugacy_classes().reps:
            o = perm_order(rep)
            e = e * o // gcd(e, o)
        return e

    def is_abelian(self) -> bool:
        gs = self.generators
        return all(pmul(a, b) == pmul(b, a) for a in gs for b in gs)

    def conjugacy_classes(self) -> "ConjClasses":
        if self._classes is None:
            self._classes = conjugacy_classes(self)
        return self._classes

    def __repr__(self) -> str:
        label = self.name or "PermGroup"
        return f"<{label} degree={self.degree} order={self.order}>"


def group_from_generators(degree: int, perms: Iterable[Sequence[int]],
                          max_order: int = DEFAULT_MAX_ORDER, name: str = "") -> PermGroup:
    return PermGroup(degree, [make_perm(p, degree) for p in perms],
                     max_order=max_order, name=name)


@dataclass
class ConjClasses:
    reps: List[Perm]
    sizes: List[int]
    members: List[List[Perm]]
    index: Dict[Perm, int] = field(repr=False)
    orders: List[int]

    def __len__(self) -> int:
        return len(self.reps)

    def class_of(self, g: Perm) -> int:
        return self.index[g]

    def power_map(self, m: int) -> List[int]:
        """Class of g^m for the representative g of each class."""
        return [self.index[ppow(r, m)] for r in self.reps]

    def centralizer_order(self, i: int, group_order: int) -> int:
        return group_order // self.sizes[i]

    def inverse_classes(self) -> List[int]:
        return self.power_map(-1)


def conjugacy_classes(G: PermGroup) -> ConjClasses:
    """Partition G into conjugacy classes by orbits under conjugation."""
    elems = G.elements()
    gens = G.generators
    ginvs = [pinv(g) for g in gens]
    index: Dict[Perm, int] = {}
    raw: List[List[Perm]] = []
    for x in elems:
        if x in index:
            continue
        c = len(raw)
        index[x] = c
        orbit = [x]
        queue = deque([x])
        while queue:
            y = queue.popleft()
            for g, gi in zip(gens, ginvs):
                z = tuple([g[y[i]] for i in gi])
                if z not in index:
                    index[z] = c
                    orbit.append(z)
                    queue.append(z)
        raw.append(orbit)

    ident = G.identity()

    def key(i):
        orb = raw[i]
        rep = min(orb)
        return (orb[0] != ident, perm_order(rep), len(orb), rep)

    order = sorted(range(len(raw)), key=key)
    relabel = {old: new for new, old in enumerate(order)}
    members = [raw[i] for i in order]
    for g in index:
        index[g] = relabel[index[g]]
    reps = [min(m) if m[0] != ident else ident for m in members]
    return ConjClasses(reps=reps, sizes=[len(m) for m in members], members=members,
                       index=index, orders=[perm_order(r) for r in reps])


def power_map(classes: ConjClasses, m: int) -> List[int]:
    return classes.power_map(m)


def normalizer(G: PermGroup, H: PermGroup) -> PermGroup:
    """N_G(H), by testing every element of G against the generators of H."""
    for s in H.generators:
        if not G.contains(s):
            raise ValueError("H is not a subgroup of G")
    hset = H.element_set()
    hgens = H.generators
    found: List[Perm] = []
    sub: Optional[PermGroup] = None
    for g in G.elements():
        if sub is not None and sub.contains(g):
            continue
        ginv = pinv(g)
        if all(tuple([ginv[s[i]] for i in g]) in hset for s in hgens):
            found.append(g)
            sub = PermGroup(G.degree, list(hgens) + found, max_order=G.max_order)
    if sub is None:
        sub = PermGroup(G.degree, hgens, max_order=G.max_order)
    return sub


def sylow2(G: PermGroup) -> PermGroup:
    """A Sylow 2-subgroup, grown inside successive normalizers."""
    target = G.order & -G.order
    P = PermGroup(G.degree, [], max_order=G.max_order)
    while P.order < target:
        N = normalizer(G, P) if P.order > 1 else G
        pset = P.element_set()
        extra = None
        for x in N.elements():
            if x in pset:
                continue
            # order of xP in N/P
            m, y = 1, x
            while y not in pset:
                y = pmul(y, x)
                m += 1
            if m % 2 == 0:
                odd = m
                while odd % 2 == 0:
                    odd //= 2
                extra = ppow(x, odd)
                break
        if extra is None:
            raise AssertionError("no 2-element found in N(P)/P; group data inconsistent")
        P = PermGroup(G.degree, P.generators + [extra], max_order=G.max_order)
    return P


def is_self_normalizing_sylow2(G: PermGroup) -> bool:
    P = sylow2(G)
    return normalizer(G, P).order == P.order


def direct_product(A: PermGroup, B: PermGroup, name: str = "") -> PermGroup:
    da, db = A.degree, B.degree
    gens = [g + tuple(range(da, da + db)) for g in A.generators]
    gens += [tuple(range(da)) + tuple(x + da for x in g) for g in B.generators]
    return PermGroup(da + db, gens, max_order=max(A.max_order, B.max_order), name=name)


def regular_representation(G: PermGroup, name: str = "") -> PermGroup:
    """Right-regular permutation image of G on its own elements."""
    elems = G.elements()
    pos = {g: i for i, g in enumerate(elems)}
    gens = [tuple(pos[pmul(e, s)] for e in elems) for s in G.generators]
    return PermGroup(len(elems), gens, max_order=G.max_order, name=name)
