"""Both sides of the self-normalizing Sylow 2 criterion, and the builtin corpus.

The group side asks whether N_G(P) = P for a Sylow 2-subgroup P.  The
table side asks whether every odd-degree irreducible character is fixed
by sigma.  The two must agree for every finite group; a disagreement is
a bug in this package.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import List, Optional, Sequence

from .chartable import CharacterTable, character_table, odd_degree_rows
from .cyclotomic import apply_sigma
from .matgroups import gl2, matrix_group_to_perm, pgl2, psl2, sl2, sp4
from .perm import (DEFAULT_MAX_ORDER, PermGroup, SizeGuardError, direct_product,
                   from_cycles, group_from_generators, normalizer,
                   regular_representation, sylow2)


@dataclass
class Witness:
    row: int
    degree: int
    cls: int
    value: str
    sigma_value: str


@dataclass
class Verdict:
    name: str
    order: int
    sylow2_order: int
    normalizer_order: int
    group_verdict: bool
    table_verdict: bool
    witnesses: List[Witness] = field(default_factory=list)
    elapsed_ms: float = 0.0

    @property
    def agree(self) -> bool:
        return self.group_verdict == self.table_verdict

    def to_json(self) -> dict:
        d = asdict(self)
        d["agree"] = self.agree
        return d


def table_witnesses(table: CharacterTable) -> List[Witness]:
    """One witness per odd-degree row moved by sigma: a class where it moves."""
    perm = table.sigma_permutation()
    out = []
    for i in odd_degree_rows(table):
        if perm[i] == i:
            continue
        for c, v in enumerate(table.values[i]):
            s = apply_sigma(v)
            if s != v:
                out.append(Witness(i, table.degrees[i], c, v.expression(), s.expression()))
                break
    return out


def table_side_verdict(table: CharacterTable) -> bool:
    perm = table.sigma_permutation()
    return all(perm[i] == i for i in odd_degree_rows(table))


def group_side_verdict(G: PermGroup) -> bool:
    P = sylow2(G)
    return normalizer(G, P).order == P.order


def check_theorem_A(G: PermGroup, name: str = "") -> Verdict:
    t0 = time.perf_counter()
    P = sylow2(G)
    N = normalizer(G, P)
    table = character_table(G)
    wit = table_witnesses(table)
    v = Verdict(name=name or G.name or repr(G), order=G.order, sylow2_order=P.order,
                normalizer_order=N.order, group_verdict=N.order == P.order,
                table_verdict=not wit, witnesses=wit)
    v.elapsed_ms = round((time.perf_counter() - t0) * 1000, 1)
    return v


# -- group specs -------------------------------------------------------------

def cyclic(n: int) -> PermGroup:
    return group_from_generators(n, [tuple((i + 1) % n for i in range(n))], name=f"C{n}")


def dihedral(n: int) -> PermGroup:
    """Symmetries of the n-gon, order 2n."""
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((-i) % n for i in range(n))
    return group_from_generators(n, [rot, ref], name=f"D{2 * n}")


def symmetric(n: int) -> PermGroup:
    gens = [from_cycles(n, (0, 1)), from_cycles(n, tuple(range(n)))] if n > 1 else []
    return group_from_generators(n, gens, name=f"S{n}")


def alternating(n: int) -> PermGroup:
    gens = [from_cycles(n, (0, 1, i)) for i in range(2, n)]
    return group_from_generators(n, gens, name=f"A{n}")


def quaternion() -> PermGroup:
    # i, j acting on {+-1, +-i, +-j, +-k} by right multiplication
    els = ["1", "i", "j", "k", "-1", "-i", "-j", "-k"]
    table = {("1", x): x for x in "1ijk"}
    table.update({("i", "1"): "i", ("i", "i"): "-1", ("i", "j"): "k", ("i", "k"): "-j",
                  ("j", "1"): "j", ("j", "i"): "-k", ("j", "j"): "-1", ("j", "k"): "i",
                  ("k", "1"): "k", ("k", "i"): "j", ("k", "j"): "-i", ("k", "k"): "-1"})

    def mul(a, b):
        sa, a = (a[0] == "-"), a.lstrip("-")
        r = table[(a, b)]
        if sa:
            r = r[1:] if r.startswith("-") else "-" + r
        return r

    gens = [tuple(els.index(mul(x, g)) for x in els) for g in ("i", "j")]
    return group_from_generators(8, gens, name="Q8")


def semidihedral16() -> PermGroup:
    a = tuple((i + 1) % 8 for i in range(8))
    b = tuple((3 * i) % 8 for i in range(8))
    return group_from_generators(8, [a, b], name="SD16")


def named(G: PermGroup, name: str) -> PermGroup:
    G.name = name
    return G


def builtin_corpus(include_sp4: bool = True) -> List[tuple]:
    """(name, constructor) pairs; constructors are deferred so errors stay local."""
    c: List[tuple] = []
    c += [(f"C{n}", (lambda n=n: cyclic(n))) for n in range(1, 17)]
    c += [(f"D{2 * n}", (lambda n=n: dihedral(n))) for n in range(2, 13)]
    c += [("Q8", quaternion), ("SD16", semidihedral16)]
    c += [(f"S{n}", (lambda n=n: symmetric(n))) for n in range(2, 8)]
    c += [(f"A{n}", (lambda n=n: alternating(n))) for n in range(3, 8)]
    for q in (3, 5, 7, 9, 11):
        c += [(f"SL2({q})", (lambda q=q: sl2(q))), (f"GL2({q})", (lambda q=q: gl2(q))),
              (f"PSL2({q})", (lambda q=q: psl2(q))), (f"PGL2({q})", (lambda q=q: pgl2(q)))]
    if include_sp4:
        c.append(("Sp4(3)", lambda: sp4(3)))
    c += [("SL2(3)xC3", lambda: direct_product(sl2(3), cyclic(3))),
          ("S4xC5", lambda: direct_product(symmetric(4), cyclic(5))),
          ("SL2(3)-regular", lambda: regular_representation(sl2(3)))]
    return c


def load_group(spec: dict, max_order: int = DEFAULT_MAX_ORDER) -> PermGroup:
    """Group from the JSON input format ("perm" or "matfq")."""
    kind = spec.get("kind")
    name = spec.get("name", "")
    if kind == "perm":
        return group_from_generators(int(spec["degree"]), spec["generators"],
                                     max_order=max_order, name=name)
    if kind == "matfq":
        return matrix_group_to_perm(int(spec["q"]), int(spec["dim"]), spec["generators"],
                                    action=spec.get("action", "vectors"),
                                    max_order=max_order, name=name)
    raise ValueError(f"unknown group kind {kind!r}")


@dataclass
class CorpusEntry:
    index: int
    name: str
    verdict: Optional[Verdict] = None
    error: Optional[str] = None

    def to_json(self) -> dict:
        if self.verdict is not None:
            return self.verdict.to_json()
        return {"name": self.name, "error": self.error}


def run_corpus(corpus: Sequence[tuple], threads: int = 1) -> List[CorpusEntry]:
    """Check each (name, constructor) entry; failures are recorded per entry."""

    def one(item):
        idx, (name, make) = item
        try:
            G = make() if callable(make) else make
            return CorpusEntry(idx, name, verdict=check_theorem_A(G, name))
        except (SizeGuardError, ValueError, RuntimeError) as exc:
            return CorpusEntry(idx, name, error=f"{type(exc).__name__}: {exc}")

    items = list(enumerate(corpus))
    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            results = list(ex.map(one, items))
    else:
        results = [one(it) for it in items]
    return sorted(results, key=lambda r: r.index)


def corpus_ok(entries: Sequence[CorpusEntry]) -> bool:
    return all(e.verdict is not None and e.verdict.agree for e in entries)


def report_json(entries: Sequence[CorpusEntry]) -> str:
    return json.dumps([e.to_json() for e in entries], indent=2)
