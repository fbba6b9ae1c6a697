"""Classical root systems, Weyl groups as signed permutations, torus
characters and their relative Weyl groups W(lam) = C(lam) x| R(lam).

Torus characters are exponent tuples on a fixed Z-basis of the cocharacter
lattice Y of the simply connected group:

* types A, B, D: the simple coroots;
* type C: the coordinate vectors e_i, i.e. the coroots of the long roots
  2e_i (this basis spans the same lattice as the simple coroots).

``torus="gl"`` for type A gives the coordinate torus of GL_{n+1}.
A root alpha lies in Phi_lam when lam(alpha^vee) = 0 mod (q - 1).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import combinations, product
from math import factorial
from typing import Dict, List, Sequence, Tuple

import numpy as np
from sympy import Matrix, factorint

from .cyclotomic import sqrt_sign_under_sigma

Vector = Tuple[int, ...]
# a Weyl group element: w(e_i) = sign(img[i]) * e_{|img[i]| - 1}
WeylElement = Tuple[int, ...]


def _add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def _is_positive(v: Vector) -> bool:
    return next(x for x in v if x) > 0


class RootSystem:
    """Root system of type A, B, C or D in the standard e_i coordinates."""

    def __init__(self, kind: str, rank: int, torus: str = "sc"):
        kind = kind.upper()
        if kind not in "ABCD" or len(kind) != 1:
            raise ValueError(f"unsupported kind {kind!r}")
        if kind == "A" and rank < 1 or kind in "BC" and rank < 2 or kind == "D" and rank < 4:
            raise ValueError(f"unsupported rank {rank} for type {kind}")
        if torus not in ("sc", "gl") or torus == "gl" and kind != "A":
            raise ValueError("the gl torus exists only for type A")
        self.kind, self.rank, self.torus = kind, rank, torus
        n = rank
        self.dim = n + 1 if kind == "A" else n
        d = self.dim

        def e(*pairs):
            v = [0] * d
            for i, c in pairs:
                v[i] += c
            return tuple(v)

        roots = set()
        if kind == "A":
            roots = {e((i, 1), (j, -1)) for i in range(d) for j in range(d) if i != j}
        else:
            for i in range(n):
                for j in range(i + 1, n):
                    for s, t in product((1, -1), repeat=2):
                        roots.add(e((i, s), (j, t)))
            if kind == "B":
                roots |= {e((i, s)) for i in range(n) for s in (1, -1)}
            elif kind == "C":
                roots |= {e((i, 2 * s)) for i in range(n) for s in (1, -1)}
        self.roots: List[Vector] = sorted(roots, reverse=True)
        self.root_index = {r: i for i, r in enumerate(self.roots)}
        self.positive = [r for r in self.roots if _is_positive(r)]

        simple = [e((i, 1), (i + 1, -1)) for i in range(n - 1)]
        if kind == "A":
            simple.append(e((n - 1, 1), (n, -1)))
        elif kind == "B":
            simple.append(e((n - 1, 1)))
        elif kind == "C":
            simple.append(e((n - 1, 2)))
        else:
            simple.append(e((n - 2, 1), (n - 1, 1)))
        self.simple = simple

        if kind == "C":
            basis = [e((i, 1)) for i in range(n)]
        elif torus == "gl":
            basis = [e((i, 1)) for i in range(d)]
        else:
            basis = [self.coroot(a) for a in simple]
        self.y_basis: List[Vector] = basis
        self._y_solver = self._make_solver(basis)
        self.coroot_coords = {r: self.y_coords(self.coroot(r)) for r in self.roots}

    # -- lattice helpers --------------------------------------------------
    @staticmethod
    def coroot(a: Vector) -> Vector:
        n2 = _dot(a, a)
        return tuple(2 * x // n2 for x in a)

    def _make_solver(self, basis):
        B = Matrix(basis)          # rows = basis vectors
        for choice in combinations(range(B.shape[1]), B.shape[0]):
            if B[:, list(choice)].det() != 0:
                cols = list(choice)
                break
        inv = B[:, cols].inv()
        den = int(np.lcm.reduce([int(x.q) for x in inv]))
        scaled = np.array([[int(x * den) for x in row] for row in inv.tolist()], dtype=np.int64)
        return cols, scaled, den, np.array(basis, dtype=np.int64)

    def y_coords(self, v: Vector) -> Vector:
        """Integer coordinates of v in y_basis (v must lie in the lattice)."""
        cols, scaled, den, B = self._y_solver
        num = np.array([v[c] for c in cols], dtype=np.int64) @ scaled
        if np.any(num % den):
            raise ValueError(f"{v} is not in the cocharacter lattice")
        out = num // den
        if not np.array_equal(out @ B, np.asarray(v, dtype=np.int64)):
            raise ValueError(f"{v} is not in the cocharacter lattice")
        return tuple(int(x) for x in out)

    @property
    def n_positive(self) -> int:
        return len(self.positive)

    # -- Weyl group -------------------------------------------------------
    def reflection(self, a: Vector) -> WeylElement:
        av = self.coroot(a)
        img = []
        for i in range(self.dim):
            ei = tuple(int(i == j) for j in range(self.dim))
            c = _dot(ei, av)
            v = tuple(x - c * y for x, y in zip(ei, a))
            (j, s), = [(j, x) for j, x in enumerate(v) if x]
            img.append(s * (j + 1))
        return tuple(img)

    @cached_property
    def simple_reflections(self) -> List[WeylElement]:
        return [self.reflection(a) for a in self.simple]

    def identity(self) -> WeylElement:
        return tuple(range(1, self.dim + 1))

    @cached_property
    def elements(self) -> List[WeylElement]:
        seen = {self.identity(): None}
        queue = deque([self.identity()])
        out = []
        while queue:
            w = queue.popleft()
            out.append(w)
            for s in self.simple_reflections:
                x = compose(s, w)
                if x not in seen:
                    seen[x] = None
                    queue.append(x)
        return out

    def order(self) -> int:
        n = self.rank
        return {"A": factorial(n + 1), "B": 2 ** n * factorial(n),
                "C": 2 ** n * factorial(n), "D": 2 ** (n - 1) * factorial(n)}[self.kind]

    def act(self, w: WeylElement, v: Vector) -> Vector:
        out = [0] * self.dim
        for i, x in enumerate(v):
            if x:
                j = abs(w[i]) - 1
                out[j] += x if w[i] > 0 else -x
        return tuple(out)

    def length(self, w: WeylElement) -> int:
        return sum(1 for a in self.positive if not _is_positive(self.act(w, a)))

    def longest(self) -> WeylElement:
        return max(self.elements, key=self.length)

    def root_perm(self, w: WeylElement) -> Tuple[int, ...]:
        return tuple(self.root_index[self.act(w, r)] for r in self.roots)

    def y_matrix(self, w: WeylElement) -> np.ndarray:
        """Integer matrix M with w(b_i) = sum_j M[i, j] b_j on the basis of Y."""
        return np.array([self.y_coords(self.act(w, b)) for b in self.y_basis], dtype=np.int64)

    @cached_property
    def y_matrices(self) -> np.ndarray:
        return np.stack([self.y_matrix(w) for w in self.elements])

    def reduced_word(self, w: WeylElement) -> List[int]:
        """Indices of simple reflections s_i1 ... s_ik = w (composition right to left)."""
        word = []
        while w != self.identity():
            for i, a in enumerate(self.simple):
                # a descent on the left: w^-1(alpha_i) < 0
                if not _is_positive(self.act(inverse(w), a)):
                    word.append(i)
                    w = compose(self.simple_reflections[i], w)
                    break
        return word

    def __repr__(self) -> str:
        return f"RootSystem({self.kind}{self.rank})"


def compose(v: WeylElement, w: WeylElement) -> WeylElement:
    """v o w (apply w first)."""
    out = []
    for x in w:
        j = abs(x) - 1
        y = v[j]
        out.append(y if x > 0 else -y)
    return tuple(out)


def inverse(w: WeylElement) -> WeylElement:
    out = [0] * len(w)
    for i, x in enumerate(w):
        out[abs(x) - 1] = (i + 1) if x > 0 else -(i + 1)
    return tuple(out)


@lru_cache(maxsize=None)
def build_root_system(kind: str, rank: int, torus: str = "sc") -> RootSystem:
    return RootSystem(kind, rank, torus)


def length(R: RootSystem, w: WeylElement) -> int:
    return R.length(w)


# -- torus characters --------------------------------------------------------

@dataclass(frozen=True)
class TorusCharacter:
    q: int
    exponents: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "exponents", tuple(int(c) % (self.q - 1) for c in self.exponents))

    @property
    def modulus(self) -> int:
        return self.q - 1

    @property
    def order(self) -> int:
        from math import gcd, lcm
        m = self.modulus
        return lcm(1, *(m // gcd(m, c) for c in self.exponents))

    def pair(self, y: Sequence[int]) -> int:
        """lam(y) as an exponent mod q-1, for y in basis coordinates."""
        return sum(a * b for a, b in zip(y, self.exponents)) % self.modulus


def weyl_action_on_character(R: RootSystem, w: WeylElement, lam: TorusCharacter) -> TorusCharacter:
    """(w.lam)(y) = lam(w^-1 y)."""
    M = R.y_matrix(inverse(w))
    c = (M @ np.array(lam.exponents, dtype=np.int64)) % lam.modulus
    return TorusCharacter(lam.q, tuple(int(x) for x in c))


@dataclass
class RelativeWeylData:
    system: RootSystem
    lam: TorusCharacter
    W_lambda: List[WeylElement]
    phi_lambda: List[Vector]
    delta_lambda: List[Vector]
    R: List[WeylElement]
    C: List[WeylElement]
    lengths: Dict[WeylElement, int] = field(repr=False)

    @property
    def index(self) -> int:
        return self.system.order() // len(self.W_lambda)

    def factor(self, w: WeylElement) -> Tuple[WeylElement, WeylElement]:
        """w = w1 w2 with w1 in C(lam), w2 in R(lam)."""
        rset = set(self.R)
        for c in self.C:
            w2 = compose(inverse(c), w)
            if w2 in rset:
                return c, w2
        raise ValueError("element is not in W(lam)")

    def r_component_type(self) -> str:
        return reflection_type(self.system, self.delta_lambda)

    def c_odd_lengths(self) -> List[WeylElement]:
        return [c for c in self.C if self.lengths[c] % 2]

    def verify(self) -> Dict[str, bool]:
        W = set(self.W_lambda)
        Rs = set(self.R)
        Cs = set(self.C)
        normal = all(compose(compose(w, r), inverse(w)) in Rs
                     for w in self.W_lambda for r in _generators_of(self))
        phi = set(self.phi_lambda)
        stable = all(self.system.act(w, a) in phi for w in self.W_lambda for a in phi)
        return {
            "order": len(self.W_lambda) == len(self.R) * len(self.C),
            "R_in_W": Rs <= W,
            "C_in_W": Cs <= W,
            "intersection_trivial": Rs & Cs == {self.system.identity()},
            "R_normal": normal,
            "phi_stable": stable and all(tuple(-x for x in a) in phi for a in phi),
        }


def _generators_of(data: RelativeWeylData):
    return [data.system.reflection(a) for a in data.delta_lambda]


def stabilizer_mask(R: RootSystem, lam: TorusCharacter) -> np.ndarray:
    c = np.array(lam.exponents, dtype=np.int64)
    img = (R.y_matrices @ c) % lam.modulus
    return np.all(img == c, axis=1)


def relative_weyl(R: RootSystem, lam: TorusCharacter, max_rank: int = 6) -> RelativeWeylData:
    if R.rank > max_rank:
        raise ValueError(f"rank {R.rank} exceeds the enumeration bound {max_rank}")
    if len(lam.exponents) != len(R.y_basis):
        raise ValueError("character does not match the torus rank")
    # w fixes lam iff M_w c = c (the stabilizer is closed under inverses)
    mask = stabilizer_mask(R, lam)
    W_lam = [w for w, keep in zip(R.elements, mask) if keep]
    phi = [a for a in R.roots if lam.pair(R.coroot_coords[a]) == 0]
    pos = [a for a in phi if _is_positive(a)]
    sums = {_add(a, b) for a in pos for b in pos}
    delta = [a for a in pos if a not in sums]
    gens = [R.reflection(a) for a in delta]
    # R(lam) by closure
    seen = {R.identity()}
    queue = deque(seen)
    while queue:
        w = queue.popleft()
        for s in gens:
            x = compose(s, w)
            if x not in seen:
                seen.add(x)
                queue.append(x)
    Rl = sorted(seen, key=R.elements.index)
    dset = set(delta)
    C = [w for w in W_lam if {R.act(w, a) for a in delta} == dset]
    lengths = {w: R.length(w) for w in W_lam}
    for w in Rl:
        lengths.setdefault(w, R.length(w))
    return RelativeWeylData(R, lam, W_lam, phi, delta, Rl, C, lengths)


def reflection_type(R: RootSystem, delta: Sequence[Vector]) -> str:
    """Type of the reflection group with simple system delta, as e.g. 'A1xB2'."""
    comps: List[List[Vector]] = []
    left = list(delta)
    while left:
        comp = [left.pop(0)]
        grew = True
        while grew:
            grew = False
            for a in list(left):
                if any(_dot(a, b) for b in comp):
                    comp.append(a)
                    left.remove(a)
                    grew = True
        comps.append(comp)
    names = []
    for comp in comps:
        r = len(comp)
        lens = sorted({_dot(a, a) for a in comp})
        if r == 1:
            names.append("A1")
        elif len(lens) == 1:
            # simply laced: A or D by the branch node
            deg = [sum(1 for b in comp if b != a and _dot(a, b)) for a in comp]
            names.append(f"D{r}" if max(deg) >= 3 else f"A{r}")
        else:
            n_short = sum(1 for a in comp if _dot(a, a) == lens[0])
            names.append(f"B{r}" if n_short == 1 else f"C{r}")
    return "x".join(sorted(names)) if names else "1"


def reflection_group_order(type_label: str) -> int:
    if type_label == "1":
        return 1
    total = 1
    for part in type_label.split("x"):
        k, r = part[0], int(part[1:])
        total *= {"A": factorial(r + 1), "B": 2 ** r * factorial(r), "C": 2 ** r * factorial(r),
                  "D": 2 ** (r - 1) * factorial(r)}[k]
    return total


# -- the r_sigma sign --------------------------------------------------------

def r_sigma(w: WeylElement, q: int, data: RelativeWeylData) -> int:
    """+1 if q = +-1 mod 8, else (-1)^l(w1) where w = w1 w2, w1 in C(lam)."""
    w1, _ = data.factor(w)
    if q % 8 in (1, 7):
        return 1
    return -1 if data.lengths[w1] % 2 else 1


def r_sigma_gauss(w: WeylElement, q: int, data: RelativeWeylData) -> int:
    """The same sign read off from sigma acting on sqrt(q^l(w1)) via Gauss sums."""
    w1, _ = data.factor(w)
    (p, f), = factorint(q).items()
    exponent = f * data.lengths[w1]
    return sqrt_sign_under_sigma(p) ** (exponent % 2)


# -- surveys -----------------------------------------------------------------

def all_characters(R: RootSystem, q: int) -> np.ndarray:
    m = q - 1
    n = len(R.y_basis)
    grids = np.indices((m,) * n).reshape(n, -1).T
    return grids.astype(np.int64)


def stabilizer_orders(R: RootSystem, q: int, chars: np.ndarray) -> np.ndarray:
    m = q - 1
    counts = np.zeros(len(chars), dtype=np.int64)
    for M in R.y_matrices:
        counts += np.all((chars @ M.T) % m == chars, axis=1)
    return counts


@dataclass
class SurveyRecord:
    exponents: Tuple[int, ...]
    w_order: int
    r_order: int
    c_order: int
    r_type: str
    c_length_parities: List[int]
    odd_length_in_C: bool

    def to_json(self) -> dict:
        return self.__dict__.copy()


def survey_odd_index(kind: str, rank: int, q: int, max_rank: int = 5) -> dict:
    """Every lam with [W : W(lam)] odd, with R(lam)'s type and C(lam)'s length parities."""
    if rank > max_rank:
        raise ValueError(f"rank {rank} exceeds the survey bound {max_rank}")
    R = build_root_system(kind, rank)
    chars = all_characters(R, q)
    counts = stabilizer_orders(R, q, chars)
    W = R.order()
    odd = [i for i in range(len(chars)) if (W // counts[i]) % 2 == 1]
    records = []
    for i in odd:
        lam = TorusCharacter(q, tuple(int(x) for x in chars[i]))
        d = relative_weyl(R, lam)
        ok = d.verify()
        if not all(ok.values()):
            raise AssertionError(f"W(lam) decomposition failed for {lam}: {ok}")
        parities = sorted({d.lengths[c] % 2 for c in d.C})
        records.append(SurveyRecord(lam.exponents, len(d.W_lambda), len(d.R), len(d.C),
                                    d.r_component_type(), parities, 1 in parities))
    odd_length = sum(1 for r in records if r.odd_length_in_C)
    # even length is claimed only for B and D; in type C odd lengths are expected
    violations = odd_length if kind.upper() in ("B", "D") else 0
    return {"kind": kind, "rank": rank, "q": q, "characters": len(chars),
            "odd_index": len(records), "odd_length_in_C": odd_length,
            "violations": violations,
            "records": [r.to_json() for r in records]}


def witness_lambda_type_C(n: int, q: int) -> Tuple[TorusCharacter, int]:
    """lam of order 2 on e_1..e_k, trivial on the rest, k the largest 2-power < n."""
    if n < 3:
        raise ValueError("n must be at least 3")
    if q % 2 == 0:
        raise ValueError("q must be odd")
    k = 1
    while 2 * k < n:
        k *= 2
    e = (q - 1) // 2
    return TorusCharacter(q, tuple(e if i < k else 0 for i in range(n))), k


def expected_witness_roots(n: int, k: int) -> set:
    """Roots of D_k on the first k coordinates and C_{n-k} on the rest."""
    R = build_root_system("C", n)
    out = set()
    for a in R.roots:
        support = [i for i, x in enumerate(a) if x]
        if all(i < k for i in support) and len(support) == 2:
            out.add(a)
        elif all(i >= k for i in support):
            out.add(a)
    return out


def signed_perm_group(dim: int, elements: Sequence[WeylElement]):
    """Signed permutations of +-e_i as a permutation group on 2*dim points.

    Point i stands for e_i and i + dim for -e_i.  Returns the group and the
    map from group elements back to signed permutations.
    """
    from .perm import PermGroup

    def as_perm(w):
        img = [0] * (2 * dim)
        for i, x in enumerate(w):
            j = abs(x) - 1
            img[i], img[i + dim] = (j, j + dim) if x > 0 else (j + dim, j)
        return tuple(img)

    G = PermGroup(2 * dim, [as_perm(w) for w in elements])
    return G, {as_perm(w): w for w in elements}
