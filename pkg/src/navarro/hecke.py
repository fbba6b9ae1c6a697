"""Principal series of SL2(q), GL2(3) and Sp4(3), computed explicitly.

The induced module Ind_B^G(lam) is realized on functions f with
f(bx) = lam(b) f(x), with basis f_i supported on the coset B x_i and
f_i(x_i) = 1.  G acts by right translation, (g.f)(y) = f(yg).

For w in W(lam) the intertwiner is the unaveraged operator

    (B_w f)(x) = rho(w) * sum_{u in U / (U cap wUw^-1)} f(w^-1 u x),

which is Ind(w) times the U-averaged one.  In this normalization

    B_s^2 = Ind(s) + eps (p - 1) sqrt(Ind(s)/p) B_s,
    T_s   = eps sqrt(p/Ind(s)) B_s,      T_c = B_c / sqrt(Ind(c)),

so that T_s^2 = p + (p - 1) T_s.  The scalar rho(w) is a 2-power root of
unity with rho(w)^o = lam(w^o), o the order of w, which makes every B_w
fixed by sigma.

Only characters with lam^2 = 1 get intertwiners; then every operator is
a scalar times an integer matrix.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from math import gcd, isqrt
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy import factorint

from .chartable import CharacterTable, character_table, induce, irr_constituents
from .cyclotomic import Cyclotomic, E, apply_sigma, sqrt_rational_prime_power
from .matgroups import (GF, field, gl2_generators, mat_inv, mat_mul, matrix_group_to_perm,
                        matrix_perm, perm_to_matrix, sl2_generators, sp4_generators,
                        sp4_root_element)
from .perm import PermGroup
from .weyl import (RelativeWeylData, TorusCharacter, WeylElement,
                   build_root_system, compose, inverse, r_sigma, r_sigma_gauss, signed_perm_group,
                   relative_weyl, weyl_action_on_character)

Matrix = Tuple[Tuple[int, ...], ...]


class ConsistencyError(AssertionError):
    """A structural identity that must hold exactly failed."""


def _ident(n):
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def _diag(entries):
    n = len(entries)
    return tuple(tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n))


def _is_monomial(M) -> bool:
    return all(sum(1 for x in r if x) == 1 for r in M)


def _closure(F: GF, gens: Sequence[Matrix], n: int) -> List[Matrix]:
    seen = {_ident(n)}
    queue = deque(seen)
    while queue:
        x = queue.popleft()
        for g in gens:
            y = mat_mul(F, x, g)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return sorted(seen)


def _rref_rows(F: GF, rows) -> Tuple[Tuple[int, ...], ...]:
    M = [list(r) for r in rows]
    n = len(M[0])
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = F.inv[M[r][c]]
        M[r] = [F.mul[inv][x] for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [F.add[x][F.neg[F.mul[f][y]]] for x, y in zip(M[i], M[r])]
        r += 1
    return tuple(tuple(row) for row in M[:r])


# -- families ----------------------------------------------------------------

FAMILIES = ("SL2", "GL2", "SP4")


class LieInstance:
    """G with B = UT, Weyl representatives and the cosets B\\G."""

    def __init__(self, family: str, q: int):
        family = family.upper()
        if family not in FAMILIES:
            raise ValueError(f"unknown family {family!r}")
        if q % 2 == 0:
            raise ValueError("q must be odd")
        if family == "SL2" and q > 13 or family in ("GL2", "SP4") and q != 3:
            raise ValueError(f"{family}({q}) is outside the supported range")
        self.family, self.q = family, q
        self.F = F = field(q)
        if family == "SL2":
            self.system = build_root_system("A", 1)
            self.n = 2
            gens = sl2_generators(q)
        elif family == "GL2":
            self.system = build_root_system("A", 1, torus="gl")
            self.n = 2
            gens = gl2_generators(q)
        else:
            self.system = build_root_system("C", 2)
            self.n = 4
            gens = sp4_generators(q)
        self.generators = gens
        self.G: PermGroup = matrix_group_to_perm(q, self.n, gens, name=f"{family}({q})")
        R = self.system

        self.torus_generators = [self.cocharacter(y, F.primitive) for y in R.y_basis]
        self.T = _closure(F, self.torus_generators, self.n)
        u_gens = [self.root_element(a, t) for a in R.positive for t in F.basis()]
        self.U = _closure(F, u_gens, self.n)
        self.U_set = frozenset(self.U)
        self.B_generators = u_gens + self.torus_generators

        # Weyl representatives from n_alpha(1) along reduced words
        self.n_simple = []
        for a in R.simple:
            m = self.n_alpha(a)
            if not _is_monomial(m):
                raise ConsistencyError(f"n_alpha(1) is not monomial for {a}")
            self.n_simple.append(m)
        self.rep: Dict[WeylElement, Matrix] = {}
        for w in R.elements:
            M = _ident(self.n)
            for i in R.reduced_word(w):
                M = mat_mul(F, M, self.n_simple[i])
            self.rep[w] = M
        self._check_torus_action()
        self._build_cosets()

    # -- root data --------------------------------------------------------
    def root_element(self, root, t: int) -> Matrix:
        if self.family == "SP4":
            return sp4_root_element(self.q, tuple(root), t)
        # type A1 in coordinates (1, -1)
        return ((1, t), (0, 1)) if root[0] > 0 else ((1, 0), (t, 1))

    def n_alpha(self, a) -> Matrix:
        F = self.F
        neg = tuple(-x for x in a)
        x1 = self.root_element(a, 1)
        y1 = self.root_element(neg, F.neg[1])
        return mat_mul(F, mat_mul(F, x1, y1), x1)

    def cocharacter(self, y, t: int) -> Matrix:
        """y(t) for y in e-coordinates."""
        F = self.F
        if self.family == "SP4":
            a, b = (F.power(t, y[0]), F.power(t, y[1]))
            return _diag([a, b, F.inv[b], F.inv[a]])
        return _diag([F.power(t, y[0]), F.power(t, y[1])])

    def torus_log(self, d: Matrix) -> Tuple[int, ...]:
        """Coordinates in the basis of Y of the torus element d, as discrete logs."""
        F = self.F
        if self.family == "SL2":
            return (F.log[d[0][0]],)
        return (F.log[d[0][0]], F.log[d[1][1]])

    def lam_exponent(self, lam: TorusCharacter, b: Matrix) -> int:
        """lam(b) = zeta_{q-1}^k for b in B (through its diagonal)."""
        d = _diag([b[i][i] for i in range(self.n)])
        return sum(c * l for c, l in zip(lam.exponents, self.torus_log(d))) % (self.q - 1)

    def _check_torus_action(self) -> None:
        R, F = self.system, self.F
        for w, M in self.rep.items():
            Minv = mat_inv(F, M)
            for y in R.y_basis:
                lhs = mat_mul(F, mat_mul(F, M, self.cocharacter(y, F.primitive)), Minv)
                if lhs != self.cocharacter(R.act(w, y), F.primitive):
                    raise ConsistencyError(f"Weyl representative of {w} acts wrongly on T")

    # -- cosets B\G ------------------------------------------------------
    def key(self, x: Matrix):
        """The flag of x: spans of its last k rows, which determine Bx."""
        return tuple(_rref_rows(self.F, x[self.n - k:]) for k in range(1, self.n))

    def _build_cosets(self) -> None:
        F = self.F
        root = self.key(_ident(self.n))
        reps = {root: _ident(self.n)}
        parent = {root: None}
        queue = deque([root])
        while queue:
            kx = queue.popleft()
            for gi, g in enumerate(self.generators):
                y = mat_mul(F, reps[kx], g)
                k = self.key(y)
                if k not in reps:
                    reps[k] = y
                    parent[k] = (kx, gi)
                    queue.append(k)
        bfs = list(parent)
        # Bruhat cells: orbits of B w under right multiplication by B
        cell_of = {}
        for w in self.system.elements:
            start = self.key(self.rep[w])
            if start in cell_of:
                raise ConsistencyError("Bruhat cells overlap")
            cell_of[start] = w
            queue = deque([self.rep[w]])
            while queue:
                x = queue.popleft()
                for b in self.B_generators:
                    y = mat_mul(F, x, b)
                    k = self.key(y)
                    if k not in cell_of:
                        cell_of[k] = w
                        queue.append(y)
                    elif cell_of[k] != w:
                        raise ConsistencyError("Bruhat cells overlap")
        if set(cell_of) != set(reps):
            raise ConsistencyError("Bruhat cells do not cover B\\G")
        R = self.system
        order = sorted(reps, key=lambda k: (R.length(cell_of[k]), k))
        self.cosets: List[Matrix] = [reps[k] for k in order]
        self.coset_inv = [mat_inv(F, x) for x in self.cosets]
        self.coset_index = {k: i for i, k in enumerate(order)}
        self.cell = [cell_of[k] for k in order]
        # x_i = x_parent * generator, listed parents first
        self.coset_tree = [(self.coset_index[k],) + ((self.coset_index[parent[k][0]], parent[k][1])
                                                      if parent[k] else (None, None))
                           for k in bfs]

    @property
    def index_B(self) -> int:
        return len(self.cosets)

    def locate(self, y: Matrix) -> Tuple[int, Matrix]:
        """(j, b) with y = b x_j and b in B."""
        j = self.coset_index[self.key(y)]
        b = mat_mul(self.F, y, self.coset_inv[j])
        return j, b

    # -- subgroup data ---------------------------------------------------
    @cached_property
    def B_group(self) -> PermGroup:
        return self.G.subgroup([matrix_perm(self.G, b) for b in self.B_generators], name="B")

    @cached_property
    def table(self) -> CharacterTable:
        return character_table(self.G)

    def bruhat_counts(self) -> Dict[WeylElement, int]:
        out: Dict[WeylElement, int] = {}
        for w in self.cell:
            out[w] = out.get(w, 0) + 1
        return out

    def verify(self) -> Dict[str, bool]:
        q, R = self.q, self.system
        counts = self.bruhat_counts()
        return {
            "B_order": self.B_group.order == len(self.U) * len(self.T),
            "bruhat": all(counts[w] == q ** R.length(w) for w in R.elements)
            and self.index_B * self.B_group.order == self.G.order,
            "N_over_T": len({self.rep[w] for w in R.elements}) == R.order(),
        }

    def ind_direct(self, w: WeylElement) -> int:
        """|U cap x^-1 U x| with x = w0 w."""
        F = self.F
        w0 = self.system.longest()
        x = mat_mul(F, self.rep[w0], self.rep[w])
        xi = mat_inv(F, x)
        return sum(1 for u in self.U if mat_mul(F, mat_mul(F, xi, u), x) in self.U_set)

    def __repr__(self) -> str:
        return f"<LieInstance {self.family}({self.q}) [G:B]={self.index_B}>"


_INSTANCES: Dict[Tuple[str, int], LieInstance] = {}


def build_instance(family: str, q: int) -> LieInstance:
    key = (family.upper(), q)
    if key not in _INSTANCES:
        _INSTANCES[key] = LieInstance(family, q)
    return _INSTANCES[key]


def quadratic_character(inst: LieInstance) -> TorusCharacter:
    """The order-2 character used for each family."""
    e = (inst.q - 1) // 2
    return TorusCharacter(inst.q, (e,) * len(inst.system.y_basis))


def trivial_character(inst: LieInstance) -> TorusCharacter:
    return TorusCharacter(inst.q, (0,) * len(inst.system.y_basis))


def named_character(inst: LieInstance, name: str) -> TorusCharacter:
    if name == "trivial":
        return trivial_character(inst)
    if name == "quadratic":
        return quadratic_character(inst)
    raise ValueError(f"unknown character {name!r}")


# -- operators: scalar times integer matrix ----------------------------------

@dataclass(frozen=True)
class Op:
    scalar: Cyclotomic
    matrix: np.ndarray

    def __matmul__(self, other: "Op") -> "Op":
        return Op(self.scalar * other.scalar, self.matrix @ other.matrix)

    def scale(self, c) -> "Op":
        return Op(self.scalar * c, self.matrix)


class InducedModule:
    """Ind_B^G(lam) with explicit monomial action matrices."""

    def __init__(self, inst: LieInstance, lam: TorusCharacter):
        if len(lam.exponents) != len(inst.system.y_basis) or lam.q != inst.q:
            raise ValueError("character does not match the instance torus")
        self.inst, self.lam = inst, lam
        self.m = inst.q - 1
        self.quadratic = all((2 * c) % self.m == 0 for c in lam.exponents)
        self.rel: RelativeWeylData = relative_weyl(inst.system, lam)
        self._rho_cache: Dict[Matrix, Tuple[List[int], List[int]]] = {}

    @property
    def dim(self) -> int:
        return self.inst.index_B

    def monomial(self, g: Matrix) -> Tuple[List[int], List[int]]:
        """(pi, k) with rho(g)[i, pi(i)] = zeta_{q-1}^k[i]."""
        got = self._rho_cache.get(g)
        if got is None:
            inst = self.inst
            pi, ks = [], []
            for x in inst.cosets:
                j, b = inst.locate(mat_mul(inst.F, x, g))
                pi.append(j)
                ks.append(inst.lam_exponent(self.lam, b))
            got = (pi, ks)
            self._rho_cache[g] = got
        return got

    def int_matrix(self, g: Matrix) -> np.ndarray:
        if not self.quadratic:
            raise ValueError("integer action matrices need lam^2 = 1")
        pi, ks = self.monomial(g)
        M = np.zeros((self.dim, self.dim), dtype=np.int64)
        half = self.m // 2
        for i, (j, k) in enumerate(zip(pi, ks)):
            M[i, j] = 1 if k == 0 else -1 if k == half else 0
        return M

    def action_matrix(self, g: Matrix) -> List[List[Cyclotomic]]:
        pi, ks = self.monomial(g)
        zero = Cyclotomic.rational(0)
        rows = [[zero] * self.dim for _ in range(self.dim)]
        for i, (j, k) in enumerate(zip(pi, ks)):
            rows[i][j] = E(self.m, k)
        return rows

    def stabilizer_matrix_level(self) -> List[WeylElement]:
        """{w : lam(w^-1 t w) = lam(t)} tested on generators of T."""
        inst = self.inst
        F = inst.F
        out = []
        for w in inst.system.elements:
            M, Mi = inst.rep[w], mat_inv(F, inst.rep[w])
            if all(inst.lam_exponent(self.lam, mat_mul(F, mat_mul(F, Mi, t), M)) ==
                   inst.lam_exponent(self.lam, t) for t in inst.torus_generators):
                out.append(w)
        return out

    def stabilizer_agrees(self) -> bool:
        """Matrix-level W(lam) equals the lattice computation."""
        R = self.inst.system
        lattice = [w for w in R.elements if weyl_action_on_character(R, w, self.lam) == self.lam]
        return set(self.stabilizer_matrix_level()) == set(lattice) == set(self.rel.W_lambda)

    def trace(self, g: Matrix) -> Cyclotomic:
        pi, ks = self.monomial(g)
        return Cyclotomic.from_exponents(self.m, [(k, 1) for i, (j, k) in
                                                  enumerate(zip(pi, ks)) if i == j])

    def character(self) -> List[Cyclotomic]:
        """Values on the classes of G, from traces of the action."""
        G = self.inst.G
        return [self.trace(perm_to_matrix(G, r)) for r in G.conjugacy_classes().reps]

    def induced_from_table_side(self) -> List[Cyclotomic]:
        """Ind_B^G(lam) by the induction formula on B's classes."""
        inst = self.inst
        Bg = inst.B_group
        vals = []
        for r in Bg.conjugacy_classes().reps:
            b = perm_to_matrix(inst.G, r)
            vals.append(E(self.m, inst.lam_exponent(self.lam, b)))
        return induce(vals, Bg, inst.G)

    # -- intertwiners -----------------------------------------------------
    def rho_tilde(self, w: WeylElement) -> Cyclotomic:
        """2-power root of unity c with c^o = lam(w^o), o the order of w."""
        inst = self.inst
        F = inst.F
        o, x = 1, w
        while x != inst.system.identity():
            x = compose(w, x)
            o += 1
        M = _ident(inst.n)
        for _ in range(o):
            M = mat_mul(F, M, inst.rep[w])
        if not all(M[i][j] == 0 for i in range(inst.n) for j in range(inst.n) if i != j):
            raise ConsistencyError("w^o is not in the torus")
        k = inst.lam_exponent(self.lam, M)
        if k == 0:
            return Cyclotomic.rational(1)
        if 2 * k != self.m:
            raise ValueError("rho_tilde is pinned only for lam^2 = 1")
        if o % 2:
            return Cyclotomic.rational(-1)
        return E(2 * o)

    def intertwiner(self, w: WeylElement) -> Op:
        if not self.quadratic:
            raise ValueError("intertwiners are built for lam^2 = 1 only")
        if w not in set(self.rel.W_lambda):
            raise ValueError("w is not in W(lam)")
        return self._intertwiners[w]

    @cached_property
    def _intertwiners(self) -> Dict[WeylElement, Op]:
        out = {}
        for w in self.rel.W_lambda:
            out[w] = Op(self.rho_tilde(w), self._intertwiner_matrix(w))
        return out

    def _compose(self, a, b):
        """Monomial data of rho(g) rho(h) from that of rho(g) and rho(h)."""
        pa, ka = a
        pb, kb = b
        return [pb[j] for j in pa], [(x + kb[j]) % self.m for x, j in zip(ka, pa)]

    @cached_property
    def coset_monomials(self):
        """rho(x_i) for every coset representative, built along the BFS tree."""
        gens = [self.monomial(g) for g in self.inst.generators]
        out = [None] * self.dim
        for i, par, gi in self.inst.coset_tree:
            if par is None:
                out[i] = (list(range(self.dim)), [0] * self.dim)
            else:
                out[i] = self._compose(out[par], gens[gi])
        return out

    def _intertwiner_matrix(self, w: WeylElement) -> np.ndarray:
        # f_j(y) is row 0 of rho(y), and rho(v x_i) = rho(v) rho(x_i)
        inst = self.inst
        F = inst.F
        W = inst.rep[w]
        Wi = mat_inv(F, W)
        conj_U = {mat_mul(F, mat_mul(F, W, u), Wi) for u in inst.U}
        m = sum(1 for u in inst.U if u in conj_U)
        half = self.m // 2
        heads = []
        for u in inst.U:
            a, b = inst.locate(mat_mul(F, Wi, u))
            heads.append((a, inst.lam_exponent(self.lam, b)))
        M = np.zeros((self.dim, self.dim), dtype=np.int64)
        for i, (pi, ks) in enumerate(self.coset_monomials):
            for a, k in heads:
                e = (k + ks[a]) % self.m
                if e not in (0, half):
                    raise ConsistencyError("lam is not quadratic on B")
                M[i, pi[a]] += 1 if e == 0 else -1
        if np.any(M % m):
            raise ConsistencyError("U-sum is not constant on cosets of U cap wUw^-1")
        return M // m

    def ind(self, w: WeylElement) -> int:
        """[U : U cap wUw^-1]."""
        inst = self.inst
        F = inst.F
        W = inst.rep[w]
        Wi = mat_inv(F, W)
        conj_U = {mat_mul(F, mat_mul(F, W, u), Wi) for u in inst.U}
        return len(inst.U) // sum(1 for u in inst.U if u in conj_U)

    @cached_property
    def support(self) -> Dict[WeylElement, Tuple[int, int]]:
        """A matrix position in the support of each B_w (supports are disjoint)."""
        out = {}
        used = set()
        for w, op in self._intertwiners.items():
            nz = list(zip(*np.nonzero(op.matrix)))
            if not nz:
                raise ConsistencyError("zero intertwiner")
            pos = tuple(int(x) for x in nz[0])
            for p_ in nz:
                if tuple(p_) in used:
                    raise ConsistencyError("intertwiner supports overlap")
            used.update(tuple(p_) for p_ in nz)
            out[w] = pos
        return out

    def b_coordinates(self, op: Op) -> Dict[WeylElement, Cyclotomic]:
        """Coefficients c_w with op = sum c_w B_w, verified exactly."""
        entries = {}
        for w, B in self._intertwiners.items():
            i, j = self.support[w]
            entries[w] = (int(op.matrix[i, j]), int(B.matrix[i, j]))
        L = 1
        for _, d in entries.values():
            L = L * abs(d) // gcd(L, abs(d))
        recon = np.zeros_like(op.matrix)
        for w, (n, d) in entries.items():
            recon += self._intertwiners[w].matrix * (n * (L // d))
        if not np.array_equal(recon, op.matrix * L):
            raise ConsistencyError("operator is not in the span of the B_w")
        return {w: op.scalar * Fraction(n, d) / self._intertwiners[w].scalar
                for w, (n, d) in entries.items()}

    def commutes(self) -> bool:
        gens = [self.int_matrix(g) for g in self.inst.generators]
        return all(np.array_equal(A @ B.matrix, B.matrix @ A)
                   for A in gens for B in self._intertwiners.values())

    def commutant_dimension(self) -> int:
        """Consistent pair orbits (i, j) -> (pi i, pi j) under the generators."""
        inst = self.inst
        mono = [self.monomial(g) for g in inst.generators]
        n = self.dim
        phase: Dict[Tuple[int, int], int] = {}
        count = 0
        for start in ((i, j) for i in range(n) for j in range(n)):
            if start in phase:
                continue
            phase[start] = 0
            queue = deque([start])
            ok = True
            while queue:
                i, j = queue.popleft()
                ph = phase[(i, j)]
                for pi, ks in mono:
                    # X[pi i, pi j] = X[i, j] * a_j / a_i
                    nxt = (pi[i], pi[j])
                    val = (ph + ks[j] - ks[i]) % self.m
                    if nxt not in phase:
                        phase[nxt] = val
                        queue.append(nxt)
                    elif phase[nxt] != val:
                        ok = False
            count += ok
        return count


def induced_module(inst: LieInstance, lam: TorusCharacter) -> InducedModule:
    cache = inst.__dict__.setdefault("_modules", {})
    if lam not in cache:
        cache[lam] = InducedModule(inst, lam)
    return cache[lam]


def intertwiner_B_w(module: InducedModule, w: WeylElement) -> Op:
    return module.intertwiner(w)


# -- quadratic relations and the T basis -------------------------------------

def _frac_sqrt(x: Fraction) -> Optional[Fraction]:
    if x < 0:
        return None
    a, b = isqrt(x.numerator), isqrt(x.denominator)
    if a * a == x.numerator and b * b == x.denominator:
        return Fraction(a, b)
    return None


def _is_power_of(x: Fraction, p: int) -> Optional[int]:
    if x.denominator != 1 or x < 1:
        return None
    n, k = x.numerator, 0
    while n % p == 0:
        n //= p
        k += 1
    return k if n == 1 else None


@dataclass
class QuadraticData:
    root: Tuple[int, ...]
    ind: int
    ind_direct: int
    p: int
    eps: int
    linear_coefficient: Fraction


def quadratic_data(module: InducedModule, alpha) -> QuadraticData:
    inst = module.inst
    R = inst.system
    s = R.reflection(tuple(alpha))
    B = module.intertwiner(s)
    sq = module.b_coordinates(B @ B)
    one = R.identity()
    for w, c in sq.items():
        if w not in (one, s) and c:
            raise ConsistencyError("B_s^2 leaves span(1, B_s)")
    a, b = sq[one], sq.get(s, Cyclotomic.rational(0))
    if not (a.is_rational() and b.is_rational()):
        raise ConsistencyError("quadratic relation has irrational coefficients")
    ind, b = a.to_fraction(), b.to_fraction()
    if ind.denominator != 1:
        raise ConsistencyError("Ind(s) is not an integer")
    ind = int(ind)
    (prime, _), = factorint(inst.q).items()
    # b^2 = (p - 1)^2 Ind / p  <=>  p + 1/p = 2 + b^2/Ind
    t = b * b / ind
    disc = _frac_sqrt((2 + t) ** 2 - 4)
    if disc is None:
        raise ConsistencyError("p is not rational")
    p = ((2 + t) + disc) / 2
    if _is_power_of(p, prime) is None:
        raise ConsistencyError(f"p = {p} is not a power of {prime}")
    p = int(p)
    if p == 1:
        eps = 1
    else:
        ratio = Cyclotomic.rational(b) / (_ratio_sqrt(ind, p, prime) * (p - 1))
        if ratio not in (1, -1):
            raise ConsistencyError("eps is not a sign")
        eps = 1 if ratio == 1 else -1
    return QuadraticData(tuple(alpha), ind, inst.ind_direct(s), p, eps, b)


def _ratio_sqrt(ind: int, p: int, prime: int) -> Cyclotomic:
    """sqrt(ind / p), both powers of prime."""
    k = _is_power_of(Fraction(ind), prime) - _is_power_of(Fraction(p), prime)
    return sqrt_rational_prime_power(prime, k)


@dataclass
class TBasis:
    module: InducedModule
    ops: Dict[WeylElement, Op]
    quad: Dict[Tuple[int, ...], QuadraticData]
    words: Dict[WeylElement, Tuple[WeylElement, List[Tuple[int, ...]]]]

    @cached_property
    def _columns(self):
        elems = list(self.ops)
        cols = [self.module.b_coordinates(self.ops[w]) for w in elems]
        return elems, [[cols[j][w] for j in range(len(elems))] for w in elems]

    def coordinates(self, op: Op) -> Dict[WeylElement, Cyclotomic]:
        """Coefficients in the T basis (linear solve over Q(zeta))."""
        elems, A = self._columns
        bx = self.module.b_coordinates(op)
        return dict(zip(elems, _solve(A, [bx[w] for w in elems])))

    def structure_constants(self) -> Dict[Tuple[WeylElement, WeylElement], Dict[WeylElement, Cyclotomic]]:
        out = {}
        for v in self.ops:
            for w in self.ops:
                out[(v, w)] = self.coordinates(self.ops[v] @ self.ops[w])
        return out


def _solve(A, b):
    n = len(A)
    M = [list(r) + [b[i]] for i, r in enumerate(A)]
    for c in range(n):
        piv = next(r for r in range(c, n) if M[r][c])
        M[c], M[piv] = M[piv], M[c]
        inv = M[c][c].inverse() if isinstance(M[c][c], Cyclotomic) else Fraction(1, M[c][c])
        M[c] = [x * inv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c]:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [M[i][n] for i in range(n)]


def relative_word(rel: RelativeWeylData, w: WeylElement) -> List[Tuple[int, ...]]:
    """A reduced word for w in R(lam) over the simple system Delta_lam."""
    R = rel.system
    pos = [a for a in rel.phi_lambda if next(x for x in a if x) > 0]
    word = []
    while w != R.identity():
        for a in rel.delta_lambda:
            img = R.act(inverse(w), a)
            if next(x for x in img if x) < 0:
                word.append(a)
                w = compose(R.reflection(a), w)
                break
        else:
            raise ConsistencyError("element is not in R(lam)")
        if len(word) > len(pos):
            raise ConsistencyError("relative word does not terminate")
    return word


def t_basis(module: InducedModule, word_choice: int = 0) -> TBasis:
    """T_w = T_{w1} T_{s_1} ... T_{s_r} for w = w1 w2, w2 = s_1 ... s_r reduced in R(lam).

    ``word_choice`` selects among the reduced words of w2 in R(lam) (first
    descent found scanning Delta_lam forwards or backwards).
    """
    inst, rel = module.inst, module.rel
    R = inst.system
    quad = {a: quadratic_data(module, a) for a in rel.delta_lambda}
    prime = _prime(inst.q)
    Ts = {a: module.intertwiner(R.reflection(a)).scale(d.eps * _ratio_sqrt(d.p, d.ind, prime))
          for a, d in quad.items()}
    ops, words = {}, {}
    for w in rel.W_lambda:
        w1, w2 = rel.factor(w)
        word = relative_word_choice(rel, w2, word_choice)
        B1 = module.intertwiner(w1)
        op = Op(B1.scalar / _sqrt_ind(inst.q, module.ind(w1)), B1.matrix)
        for a in word:
            op = op @ Ts[a]
        ops[w] = op
        words[w] = (w1, word)
    return TBasis(module, ops, quad, words)


def relative_word_choice(rel: RelativeWeylData, w: WeylElement, choice: int) -> List:
    if choice == 0:
        return relative_word(rel, w)
    rev = RelativeWeylData(rel.system, rel.lam, rel.W_lambda, rel.phi_lambda,
                           list(reversed(rel.delta_lambda)), rel.R, rel.C, rel.lengths)
    return relative_word(rev, w)


def _prime(q: int) -> int:
    (p, _), = factorint(q).items()
    return p


def _sqrt_ind(q: int, ind: int) -> Cyclotomic:
    p = _prime(q)
    k = _is_power_of(Fraction(ind), p)
    if k is None:
        raise ConsistencyError("Ind is not a power of p")
    return sqrt_rational_prime_power(p, k)


def rational_structure(tb: TBasis) -> bool:
    return all(c.is_rational() for consts in tb.structure_constants().values()
               for c in consts.values())


# -- series decomposition and the Galois action -----------------------------

def decompose_series(inst: LieInstance, lam: TorusCharacter,
                     module: Optional[InducedModule] = None) -> List[Tuple[int, int]]:
    module = module or induced_module(inst, lam)
    cons = irr_constituents(module.character(), inst.table)
    if sum(m * m for _, m in cons) != len(module.rel.W_lambda):
        raise ConsistencyError("sum of squared multiplicities differs from |W(lam)|")
    return cons


def eta_values(module: InducedModule, tb: TBasis, row: int) -> Dict[WeylElement, Cyclotomic]:
    """eta_chi(T_w) = 1/|G| sum_g conj(chi(g)) tr(rho(g) T_w), by classes."""
    inst = module.inst
    G = inst.G
    cl = G.conjugacy_classes()
    table = inst.table
    chi = table.values[row]
    rhos = [module.int_matrix(perm_to_matrix(G, r)) for r in cl.reps]
    out = {}
    for w, op in tb.ops.items():
        total = Cyclotomic.rational(0)
        for c, M in enumerate(rhos):
            tr = int(np.trace(M @ op.matrix))
            if tr:
                total = total + chi[c].conjugate() * (tr * cl.sizes[c])
        out[w] = total * op.scalar / G.order
    return out


@dataclass
class GaloisReport:
    family: str
    q: int
    lam: Tuple[int, ...]
    constituents: List[Tuple[int, int, int]]        # (row, degree, multiplicity)
    sigma_image: Dict[int, int]
    swapped: bool
    fixed_count: int
    predicted_fixed_count: int
    r_sigma: Dict[str, int]
    r_sigma_gauss_agrees: bool
    t_sigma_ok: bool
    eta_identity_ok: bool
    labels: Dict[int, Tuple[int, ...]]
    labels_ok: bool
    quadratic: List[dict]
    agree: bool

    def to_json(self) -> dict:
        d = dict(self.__dict__)
        d["sigma_image"] = {str(k): v for k, v in self.sigma_image.items()}
        d["labels"] = {str(k): list(v) for k, v in self.labels.items()}
        return d


def _twist_fixed_count(rel: RelativeWeylData, q: int) -> int:
    """#{gamma in Irr(W(lam)) : r_sigma gamma = gamma}, from W(lam)'s table."""
    W, back = signed_perm_group(rel.system.dim, rel.W_lambda)
    table = character_table(W)
    r = [r_sigma(back[rep], q, rel) for rep in W.conjugacy_classes().reps]
    fixed = 0
    for i in range(len(table)):
        tw = table.dense[i] * np.array(r)[:, None]
        if table.find_row(tw) == i:
            fixed += 1
    return fixed


def verify_galois_act(inst: LieInstance, lam: TorusCharacter) -> GaloisReport:
    module = induced_module(inst, lam)
    if not module.quadratic:
        raise ValueError("the check needs lam^2 = 1")
    rel = module.rel
    q = inst.q
    table = inst.table
    cons = decompose_series(inst, lam, module)
    rows = [r for r, _ in cons]
    perm = table.sigma_permutation()
    image = {r: perm[r] for r in rows}
    if set(image.values()) != set(rows):
        raise ConsistencyError("sigma does not preserve the series")
    fixed = sum(1 for r in rows if image[r] == r)
    predicted = _twist_fixed_count(rel, q)

    rs = {w: r_sigma(w, q, rel) for w in rel.W_lambda}
    gauss_ok = all(rs[w] == r_sigma_gauss(w, q, rel) for w in rel.W_lambda)

    tb = t_basis(module)
    t_ok = all(apply_sigma(op.scalar) == op.scalar * rs[w] for w, op in tb.ops.items())

    etas = {r: eta_values(module, tb, r) for r in rows}
    eta_ok = all(etas[image[r]][w] == apply_sigma(etas[r][w]) * rs[w]
                 for r in rows for w in rel.W_lambda)

    # labels of the constituents with one-dimensional eta
    R = inst.system
    gens = [R.reflection(a) for a in rel.delta_lambda] + [c for c in rel.C if c != R.identity()]
    labels = {}
    for r, m in cons:
        if m != 1:
            continue
        lab = []
        for a in rel.delta_lambda:
            v = etas[r][R.reflection(a)]
            p = tb.quad[a].p
            if v == p:
                lab.append(1)
            elif v == -1:
                lab.append(-1)
            else:
                raise ConsistencyError("eta(T_s) is not an eigenvalue of T_s")
        for c in rel.C:
            if c == R.identity():
                continue
            v = etas[r][c]
            if v not in (1, -1):
                raise ConsistencyError("eta(T_c) is not a sign")
            lab.append(1 if v == 1 else -1)
        labels[r] = tuple(lab)
    twist = [rs[g] for g in gens]
    labels_ok = all(labels[image[r]] == tuple(t * x for t, x in zip(twist, lab))
                    for r, lab in labels.items())
    higher = [r for r, m in cons if m > 1]
    labels_ok = labels_ok and len(higher) <= 1 and all(image[r] == r for r in higher)

    swapped = len(rows) == 2 and image[rows[0]] == rows[1]
    agree = fixed == predicted and gauss_ok and t_ok and eta_ok and labels_ok
    if len(rel.W_lambda) == 2:
        s = next(w for w in rel.W_lambda if w != R.identity())
        agree = agree and swapped == (rs[s] == -1)
    quad = [{"root": list(d.root), "Ind": d.ind, "Ind_direct": d.ind_direct, "p": d.p,
             "eps": d.eps} for d in tb.quad.values()]
    return GaloisReport(inst.family, q, lam.exponents,
                        [(r, table.degrees[r], m) for r, m in cons], image, swapped,
                        fixed, predicted, {str(w): v for w, v in rs.items()}, gauss_ok,
                        t_ok, eta_ok, labels, labels_ok, quad, agree)


# -- cuspidal characters of SL2 ---------------------------------------------

def principal_series_rows(inst: LieInstance) -> set:
    """Rows of the table occurring in Ind_B^G(lam) for some lam in Irr(T)."""
    rows = set()
    m = inst.q - 1
    for c in product(range(m), repeat=len(inst.system.y_basis)):
        lam = TorusCharacter(inst.q, c)
        mod = InducedModule(inst, lam)
        vals = mod.induced_from_table_side()
        rows.update(r for r, _ in irr_constituents(vals, inst.table))
    return rows


def cuspidal_rows(inst: LieInstance) -> List[int]:
    ps = principal_series_rows(inst)
    return [i for i in range(len(inst.table)) if i not in ps]
