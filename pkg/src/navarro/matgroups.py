"""Finite fields, matrix groups over F_q and their permutation images.

Field elements are small integer codes 0..q-1.  For prime q the code is
the residue itself; for q = p^k it is the base-p digit vector of a
polynomial in a fixed primitive root.  Matrices act on row vectors from
the right (v -> vM), so the matrix product AB maps to the permutation
product "A then B".
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import Dict, List, Sequence, Tuple

from sympy import factorint

from .perm import DEFAULT_MAX_ORDER, PermGroup, SizeGuardError

Matrix = Tuple[Tuple[int, ...], ...]


class GF:
    """The field with q elements, by lookup tables."""

    def __init__(self, q: int):
        f = factorint(q)
        if len(f) != 1:
            raise ValueError(f"{q} is not a prime power")
        (p, k), = f.items()
        self.q, self.p, self.k = q, p, k
        if k == 1:
            self.modulus = (1, 0)
            self.add = [[(a + b) % p for b in range(p)] for a in range(p)]
            self.mul = [[(a * b) % p for b in range(p)] for a in range(p)]
        else:
            self.modulus = _primitive_poly(p, k)
            self._build_tables()
        self.neg = [self.add[a].index(0) for a in range(q)]
        self.inv = [0] + [self.mul[a].index(1) for a in range(1, q)]
        self.primitive = next(a for a in range(2, q) if self.order(a) == q - 1) \
            if q > 2 else 1
        # discrete logs base the primitive element
        self.log: Dict[int, int] = {}
        x = 1
        for i in range(q - 1):
            self.log[x] = i
            x = self.mul[x][self.primitive]

    def _build_tables(self) -> None:
        p, k, q = self.p, self.k, self.q
        digits = [tuple((a // p ** i) % p for i in range(k)) for a in range(q)]
        code = {d: a for a, d in enumerate(digits)}
        self.add = [[code[tuple((x + y) % p for x, y in zip(digits[a], digits[b]))]
                     for b in range(q)] for a in range(q)]
        mod = self.modulus  # monic, low degree first, length k+1

        def polymul(u, v):
            out = [0] * (2 * k - 1)
            for i, x in enumerate(u):
                if x:
                    for j, y in enumerate(v):
                        out[i + j] = (out[i + j] + x * y) % p
            for d in range(2 * k - 2, k - 1, -1):
                c = out[d]
                if c:
                    for i in range(k + 1):
                        out[d - k + i] = (out[d - k + i] - c * mod[i]) % p
            return tuple(out[:k])

        self.mul = [[code[polymul(digits[a], digits[b])] for b in range(q)]
                    for a in range(q)]

    def order(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no multiplicative order")
        n, x = 1, a
        while x != 1:
            x = self.mul[x][a]
            n += 1
        return n

    def from_int(self, n: int) -> int:
        """Image of the integer n under Z -> F_q."""
        return n % self.p

    def power(self, a: int, e: int) -> int:
        if a == 0:
            return 0 if e > 0 else 1
        return self.exp((self.log[a] * e) % (self.q - 1))

    def exp(self, i: int) -> int:
        x = 1
        for _ in range(i % (self.q - 1)):
            x = self.mul[x][self.primitive]
        return x

    def elements(self) -> range:
        return range(self.q)

    def basis(self) -> List[int]:
        """An F_p-basis of F_q (the powers of the adjoined root)."""
        return [self.p ** i for i in range(self.k)]

    def __repr__(self) -> str:
        return f"GF({self.q})"


def _primitive_poly(p: int, k: int) -> Tuple[int, ...]:
    """Smallest monic polynomial of degree k whose root generates F_{p^k}^x."""
    q = p ** k
    for tail in product(range(p), repeat=k):
        poly = tuple(reversed(tail)) + (1,)   # low degree first
        if poly[0] == 0:
            continue
        # order of x modulo poly
        cur = [0] * k
        cur[1 if k > 1 else 0] = 1
        x = tuple(cur)
        n, ok = 1, True
        y = x
        one = tuple([1] + [0] * (k - 1))
        while y != one:
            y = _mul_mod(y, x, poly, p)
            n += 1
            if n > q:
                ok = False
                break
        if ok and n == q - 1:
            return poly
    raise ValueError("no primitive polynomial found")


def _mul_mod(u, v, mod, p):
    k = len(mod) - 1
    out = [0] * (2 * k - 1)
    for i, x in enumerate(u):
        for j, y in enumerate(v):
            out[i + j] = (out[i + j] + x * y) % p
    for d in range(2 * k - 2, k - 1, -1):
        c = out[d]
        if c:
            for i in range(k + 1):
                out[d - k + i] = (out[d - k + i] - c * mod[i]) % p
    return tuple(out[:k])


@lru_cache(maxsize=None)
def field(q: int) -> GF:
    return GF(q)


# -- matrices ---------------------------------------------------------------

def mat(F: GF, rows: Sequence[Sequence[int]]) -> Matrix:
    """Matrix from integer entries (reduced into F as integers mod p)."""
    return tuple(tuple(F.from_int(x) if F.k == 1 else x for x in r) for r in rows)


def mat_identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def mat_mul(F: GF, A: Matrix, B: Matrix) -> Matrix:
    n, m = len(A), len(B[0])
    add, mul = F.add, F.mul
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            s = 0
            for k in range(len(B)):
                s = add[s][mul[A[i][k]][B[k][j]]]
            row.append(s)
        out.append(tuple(row))
    return tuple(out)


def vec_mat(F: GF, v: Sequence[int], M: Matrix) -> Tuple[int, ...]:
    add, mul = F.add, F.mul
    out = []
    for j in range(len(M[0])):
        s = 0
        for i, x in enumerate(v):
            if x:
                s = add[s][mul[x][M[i][j]]]
        out.append(s)
    return tuple(out)


def det(F: GF, A: Matrix) -> int:
    n = len(A)
    M = [list(r) for r in A]
    d = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            d = F.neg[d]
        d = F.mul[d][M[c][c]]
        inv = F.inv[M[c][c]]
        for r in range(c + 1, n):
            if M[r][c]:
                f = F.mul[M[r][c]][inv]
                M[r] = [F.add[x][F.neg[F.mul[f][y]]] for x, y in zip(M[r], M[c])]
    return d


def mat_inv(F: GF, A: Matrix) -> Matrix:
    n = len(A)
    M = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(A)]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c]), None)
        if piv is None:
            raise ValueError("singular matrix")
        M[c], M[piv] = M[piv], M[c]
        inv = F.inv[M[c][c]]
        M[c] = [F.mul[inv][x] for x in M[c]]
        for r in range(n):
            if r != c and M[r][c]:
                f = M[r][c]
                M[r] = [F.add[x][F.neg[F.mul[f][y]]] for x, y in zip(M[r], M[c])]
    return tuple(tuple(r[n:]) for r in M)


def points(F: GF, dim: int, action: str = "vectors") -> List[Tuple[int, ...]]:
    pts = [v for v in product(range(F.q), repeat=dim) if any(v)]
    if action == "projective":
        pts = [v for v in pts if v[next(i for i, x in enumerate(v) if x)] == 1]
    elif action != "vectors":
        raise ValueError(f"unknown action {action!r}")
    return pts


def _normalize(F: GF, v: Tuple[int, ...]) -> Tuple[int, ...]:
    lead = next(x for x in v if x)
    if lead == 1:
        return v
    inv = F.inv[lead]
    return tuple(F.mul[inv][x] for x in v)


def matrix_to_perm(F: GF, M: Matrix, pts, index, action: str = "vectors"):
    if action == "projective":
        return tuple(index[_normalize(F, vec_mat(F, v, M))] for v in pts)
    return tuple(index[vec_mat(F, v, M)] for v in pts)


def matrix_group_to_perm(q: int, dim: int, generators: Sequence[Sequence[Sequence[int]]],
                         action: str = "vectors", max_order: int = DEFAULT_MAX_ORDER,
                         name: str = "") -> PermGroup:
    """Permutation image on nonzero vectors or on projective points."""
    F = field(q)
    mats = []
    for g in generators:
        M = tuple(tuple(int(x) % q if F.k == 1 else int(x) for x in r) for r in g)
        if len(M) != dim or any(len(r) != dim for r in M):
            raise ValueError(f"generator is not {dim}x{dim}")
        if det(F, M) == 0:
            raise ValueError("singular generator")
        mats.append(M)
    pts = points(F, dim, action)
    index = {v: i for i, v in enumerate(pts)}
    perms = [matrix_to_perm(F, M, pts, index, action) for M in mats]
    G = PermGroup(len(pts), perms, max_order=max_order, name=name)
    G.meta.update(field=F, dim=dim, action=action, points=pts, point_index=index)
    return G


def perm_to_matrix(G: PermGroup, g) -> Matrix:
    """Recover the matrix of g from the images of the basis vectors."""
    if G.meta.get("action") != "vectors":
        raise ValueError("matrices are recoverable only from the vector action")
    pts, index, n = G.meta["points"], G.meta["point_index"], G.meta["dim"]
    rows = []
    for i in range(n):
        e = tuple(int(i == j) for j in range(n))
        rows.append(pts[g[index[e]]])
    return tuple(rows)


def matrix_perm(G: PermGroup, M: Matrix):
    return matrix_to_perm(G.meta["field"], M, G.meta["points"], G.meta["point_index"],
                          G.meta["action"])


# -- standard families ------------------------------------------------------

def _elementary(n, i, j, t):
    return tuple(tuple(t if (r, c) == (i, j) else int(r == c) for c in range(n))
                 for r in range(n))


def sl2_generators(q: int) -> List[Matrix]:
    F = field(q)
    gens = []
    for t in F.basis():
        gens.append(_elementary(2, 0, 1, t))
        gens.append(_elementary(2, 1, 0, t))
    return gens


def gl2_generators(q: int) -> List[Matrix]:
    F = field(q)
    return sl2_generators(q) + [((F.primitive, 0), (0, 1))]


SP4_FORM = ((0, 0, 0, 1), (0, 0, 1, 0), (0, -1, 0, 0), (-1, 0, 0, 0))

# positive roots of C_2 in e-coordinates, and the matrix positions of their
# root vectors; the second position carries the sign fixed by the form
SP4_ROOT_POSITIONS = {
    (1, -1): ((0, 1), (2, 3)),
    (1, 1): ((0, 2), (1, 3)),
    (2, 0): ((0, 3), None),
    (0, 2): ((1, 2), None),
}


def sp4_form(F: GF) -> Matrix:
    return tuple(tuple(x % F.p for x in r) for r in SP4_FORM)


def _is_symplectic(F: GF, M: Matrix) -> bool:
    J = sp4_form(F)
    Mt = tuple(zip(*M))
    return mat_mul(F, mat_mul(F, M, J), Mt) == J


@lru_cache(maxsize=None)
def _sp4_signs(q: int) -> Dict[Tuple[int, int], int]:
    F = field(q)
    signs = {}
    for root, (a, b) in SP4_ROOT_POSITIONS.items():
        if b is None:
            signs[root] = 1
            continue
        for c in (1, F.neg[1]):
            M = [[int(i == j) for j in range(4)] for i in range(4)]
            M[a[0]][a[1]] = 1
            M[b[0]][b[1]] = c
            if _is_symplectic(F, tuple(map(tuple, M))):
                signs[root] = c
                break
        else:
            raise AssertionError(f"no symplectic root vector for {root}")
    return signs


def sp4_root_element(q: int, root: Tuple[int, int], t: int) -> Matrix:
    """x_root(t) in Sp_4(q); negative roots use transposed positions."""
    F = field(q)
    neg = root not in SP4_ROOT_POSITIONS
    base = tuple(-x for x in root) if neg else root
    (a, b) = SP4_ROOT_POSITIONS[base]
    c = _sp4_signs(q)[base]
    M = [[int(i == j) for j in range(4)] for i in range(4)]
    entries = [(a, t)]
    if b is not None:
        entries.append((b, F.mul[c][t]))
    for (i, j), v in entries:
        if neg:
            i, j = j, i
        M[i][j] = v
    X = tuple(map(tuple, M))
    if not _is_symplectic(F, X):
        # the transpose of a symplectic root vector may need the opposite sign
        for (i, j), v in entries[1:]:
            if neg:
                i, j = j, i
            M[i][j] = F.neg[v]
        X = tuple(map(tuple, M))
        if not _is_symplectic(F, X):
            raise AssertionError(f"x_{root}({t}) is not symplectic")
    return X


def sp4_generators(q: int) -> List[Matrix]:
    F = field(q)
    gens = []
    for root in SP4_ROOT_POSITIONS:
        for t in F.basis():
            gens.append(sp4_root_element(q, root, t))
            gens.append(sp4_root_element(q, tuple(-x for x in root), t))
    return gens


def sl2(q: int, **kw) -> PermGroup:
    return matrix_group_to_perm(q, 2, sl2_generators(q), name=f"SL2({q})", **kw)


def gl2(q: int, **kw) -> PermGroup:
    return matrix_group_to_perm(q, 2, gl2_generators(q), name=f"GL2({q})", **kw)


def psl2(q: int, **kw) -> PermGroup:
    return matrix_group_to_perm(q, 2, sl2_generators(q), action="projective",
                                name=f"PSL2({q})", **kw)


def pgl2(q: int, **kw) -> PermGroup:
    return matrix_group_to_perm(q, 2, gl2_generators(q), action="projective",
                                name=f"PGL2({q})", **kw)


def sp4(q: int, **kw) -> PermGroup:
    return matrix_group_to_perm(q, 4, sp4_generators(q), name=f"Sp4({q})", **kw)


__all__ = ["GF", "field", "matrix_group_to_perm", "perm_to_matrix", "matrix_perm",
           "sl2", "gl2", "psl2", "pgl2", "sp4", "sp4_root_element", "sp4_form",
           "mat_mul", "mat_inv", "det", "SizeGuardError"]
