"""Generic Iwahori-Hecke algebras of rank at most 2 and their specializations.

Basis a_w over Z[u_s], with

    a_s a_w = a_{sw}                        if l(sw) > l(w)
    a_s a_w = u_s a_{sw} + (u_s - 1) a_w    otherwise.

Sending every u_s to 1 recovers the group algebra of W.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Sequence, Tuple

import sympy

from .weyl import RootSystem, WeylElement, build_root_system, compose

TYPES = ("A1", "A1xA1", "B2")


def coxeter_generators(kind: str) -> Tuple[RootSystem, List[WeylElement]]:
    """Ambient root system and simple generators for each supported type."""
    if kind == "A1":
        R = build_root_system("A", 1)
        return R, list(R.simple_reflections)
    if kind == "B2":
        R = build_root_system("C", 2)
        return R, list(R.simple_reflections)
    if kind == "A1xA1":
        # the reflections in e1 - e2 and e1 + e2 commute inside W(C2)
        R = build_root_system("C", 2)
        return R, [R.reflection((1, -1)), R.reflection((1, 1))]
    raise ValueError(f"unsupported Coxeter type {kind!r}")


@dataclass
class GenericHecke:
    kind: str
    system: RootSystem
    generators: List[WeylElement]
    params: List[sympy.Symbol]
    elements: List[WeylElement]
    words: Dict[WeylElement, Tuple[int, ...]]

    def length(self, w: WeylElement) -> int:
        return len(self.words[w])

    def _left_gen(self, i: int, x: Dict[WeylElement, sympy.Expr]) -> Dict[WeylElement, sympy.Expr]:
        s, u = self.generators[i], self.params[i]
        out: Dict[WeylElement, sympy.Expr] = {}
        for w, c in x.items():
            sw = compose(s, w)
            if self.length(sw) > self.length(w):
                out[sw] = out.get(sw, 0) + c
            else:
                out[sw] = out.get(sw, 0) + u * c
                out[w] = out.get(w, 0) + (u - 1) * c
        return {w: sympy.expand(c) for w, c in out.items() if sympy.expand(c) != 0}

    def multiply(self, v: WeylElement, w: WeylElement) -> Dict[WeylElement, sympy.Expr]:
        x = {w: sympy.Integer(1)}
        for i in reversed(self.words[v]):
            x = self._left_gen(i, x)
        return x

    def table(self) -> Dict[Tuple[WeylElement, WeylElement], Dict[WeylElement, sympy.Expr]]:
        return {(v, w): self.multiply(v, w) for v in self.elements for w in self.elements}

    def specialize(self, values: Mapping) -> Dict[Tuple[WeylElement, WeylElement], Dict[WeylElement, Fraction]]:
        """Structure constants with u_s replaced by values[s] (generator or index keys)."""
        sub = {}
        for i, (s, u) in enumerate(zip(self.generators, self.params)):
            sub[u] = values[s] if s in values else values[i]
        out = {}
        for key, prod in self.table().items():
            row = {}
            for w, c in prod.items():
                val = sympy.Rational(c.subs(sub))
                if val != 0:
                    row[w] = Fraction(int(val.p), int(val.q))
            out[key] = row
        return out

    def specialize_g(self):
        return self.specialize({i: 1 for i in range(len(self.generators))})

    def specialize_f(self, p_values: Sequence[int]):
        return self.specialize(dict(enumerate(p_values)))

    def g_is_group_algebra(self) -> bool:
        g = self.specialize_g()
        return all(g[(v, w)] == {compose(v, w): 1} for v in self.elements for w in self.elements)


def generic_hecke(kind: str) -> GenericHecke:
    if kind not in TYPES:
        raise ValueError(f"type must be one of {TYPES}")
    R, gens = coxeter_generators(kind)
    ident = R.identity()
    words = {ident: ()}
    queue = deque([ident])
    while queue:
        w = queue.popleft()
        for i, s in enumerate(gens):
            sw = compose(s, w)
            if sw not in words:
                words[sw] = (i,) + words[w]
                queue.append(sw)
    elements = sorted(words, key=lambda w: (len(words[w]), words[w]))
    params = list(sympy.symbols(f"u0:{len(gens)}"))
    return GenericHecke(kind, R, gens, params, elements, words)


def compare_with_t_basis(H: GenericHecke, tb) -> bool:
    """f-specialization (u_s -> p_s) against the T-basis of a module.

    Generators of H are matched with reflections in the relevant roots of
    the module; only products inside the span of H's elements are compared.
    """
    R = H.system
    p_of = {R.reflection(a): d.p for a, d in tb.quad.items()}
    f = H.specialize({s: p_of[s] for s in H.generators})
    for v in H.elements:
        for w in H.elements:
            got = tb.coordinates(tb.ops[v] @ tb.ops[w])
            want = f[(v, w)]
            for x, c in got.items():
                if c != want.get(x, 0):
                    return False
    return True
