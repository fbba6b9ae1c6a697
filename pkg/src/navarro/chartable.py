"""Ordinary character tables by the Dixon-Schneider eigenvector method.

Class multiplication matrices are reduced mod a prime p = 1 (mod e) and
simultaneously diagonalized over F_p.  Each common eigenvector gives the
central character of one irreducible, from which the values mod p follow;
the exact values in Q(zeta_e) are recovered from eigenvalue multiplicities
along the power maps.

Internally a table is an integer array ``dense[row, class, :]`` of
power-basis coordinates in Z[zeta_e].  Character values are algebraic
integers, so these coordinates are integers and all invariant checks are
integer computations.
"""

from __future__ import annotations

import json
from fractions import Fraction
from functools import reduce
from math import isqrt, lcm
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy import isprime, primitive_root

from .cyclotomic import Cyclotomic, galois_exponent, reduction_matrix
from .perm import ConjClasses, PermGroup, pmul

DEFAULT_PRIME_CAP = 10 ** 7
_PAIR_BLOCK = 1 << 24
_EXACT_FLOAT = 2 ** 52


class CharacterTableError(RuntimeError):
    pass


# -- linear algebra mod p ---------------------------------------------------

def rref_mod(M: np.ndarray, p: int) -> Tuple[np.ndarray, List[int]]:
    A = np.array(M, dtype=np.int64) % p
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if len(nz) == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        A[r] = (A[r] * pow(int(A[r, c]), -1, p)) % p
        col = A[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if len(nzr):
            A[nzr] = (A[nzr] - np.outer(col[nzr], A[r])) % p
        pivots.append(c)
        r += 1
    return A[:r], pivots


def left_nullspace_mod(A: np.ndarray, p: int) -> np.ndarray:
    """Basis (as rows) of {c : c A = 0 mod p}."""
    R, piv = rref_mod(A.T, p)
    n = A.shape[0]
    free = [j for j in range(n) if j not in piv]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for t, f in enumerate(free):
        basis[t, f] = 1
        for i, pc in enumerate(piv):
            basis[t, pc] = (-R[i, f]) % p
    return basis


def _krylov_minpoly(R: np.ndarray, c: np.ndarray, p: int) -> List[int]:
    """Minimal polynomial of R relative to the row vector c, lowest degree first."""
    vecs = [c % p]
    while True:
        nxt = (vecs[-1] @ R) % p
        K = np.array(vecs, dtype=np.int64)
        # solve a K = nxt, i.e. K^T a^T = nxt^T
        aug = np.concatenate([K.T, nxt[:, None]], axis=1)
        E, piv = rref_mod(aug, p)
        m = len(vecs)
        if m not in piv:
            a = np.zeros(m, dtype=np.int64)
            for i, pc in enumerate(piv):
                a[pc] = E[i, m]
            return [int((-x) % p) for x in a] + [1]
        vecs.append(nxt)


def _roots_mod(poly: Sequence[int], p: int) -> List[int]:
    xs = np.arange(p, dtype=np.int64)
    acc = np.zeros(p, dtype=np.int64)
    for c in reversed(poly):
        acc = (acc * xs + c) % p
    return [int(x) for x in np.nonzero(acc == 0)[0]]


def choose_prime(exponent: int, order: int, cap: int = DEFAULT_PRIME_CAP) -> int:
    """Smallest prime p = 1 mod exponent with p > 2 sqrt(order)."""
    p = exponent + 1
    while p * p <= 4 * order or not isprime(p):
        p += exponent
        if p > cap:
            raise CharacterTableError(f"no suitable prime below {cap}")
    return p


# -- exact products in Z[zeta_e] -------------------------------------------

def _galois_matrix(e: int, r: int) -> np.ndarray:
    R = reduction_matrix(e)
    phi = R.shape[1]
    return R[[(a * r) % e for a in range(phi)]]


def pair_sums(X: np.ndarray, Y: np.ndarray, w: np.ndarray, e: int) -> np.ndarray:
    """S[i, j] = sum_c w[c] X[i, c] Y[j, c], products taken in Z[zeta_e].

    X, Y hold power-basis integer coordinates with shape (rows, classes, phi).
    Rows of X are processed in blocks to bound the intermediate products.
    """
    X = np.asarray(X, dtype=np.int64)
    Y = np.asarray(Y, dtype=np.int64)
    w = np.asarray(w, dtype=np.int64)
    phi = X.shape[2]
    Xw = X * w[None, :, None]
    bound = (int(np.abs(Xw).max(initial=0)) * int(np.abs(Y).max(initial=0))
             * X.shape[1] * phi)
    exact_float = bound < _EXACT_FLOAT
    R = reduction_matrix(e)
    Rq = R[[s % e for s in range(2 * phi - 1)]]
    a, b = X.shape[0], Y.shape[0]
    block = max(1, _PAIR_BLOCK // max(1, phi * phi * b))
    Yf = Y.astype(np.float64) if exact_float else Y
    out = np.empty((a, b, Rq.shape[1]), dtype=np.int64)
    for lo in range(0, a, block):
        Xb = Xw[lo:lo + block]
        if exact_float:
            # every partial sum is an integer below 2^52, so BLAS is exact here
            P = np.tensordot(Xb.astype(np.float64), Yf, axes=([1], [1]))
        else:
            P = np.tensordot(Xb, Yf, axes=([1], [1]))
        Q = np.zeros((len(Xb), b, 2 * phi - 1), dtype=P.dtype)
        for i in range(phi):
            Q[:, :, i:i + phi] += P[:, i, :, :]
        if exact_float:
            Q = np.rint(Q).astype(np.int64)
        out[lo:lo + block] = Q @ Rq
    return out


# -- the table ---------------------------------------------------------------

class CharacterTable:
    """Irreducible characters of G as exact values on class representatives."""

    def __init__(self, group: PermGroup, classes: ConjClasses, exponent: int,
                 dense: np.ndarray, prime: int):
        self.group = group
        self.classes = classes
        self.exponent = exponent
        self.dense = dense
        self.dense.setflags(write=False)
        self.prime = prime
        self.order = group.order
        self.degrees = [int(d) for d in dense[:, 0, 0]]
        self._values: Optional[List[List[Cyclotomic]]] = None
        self._row_index = {dense[i].tobytes(): i for i in range(len(dense))}

    def __len__(self) -> int:
        return len(self.degrees)

    @property
    def values(self) -> List[List[Cyclotomic]]:
        if self._values is None:
            e = self.exponent
            self._values = [[Cyclotomic.from_dense(e, v) for v in row] for row in self.dense]
        return self._values

    def value(self, row: int, cls: int) -> Cyclotomic:
        return self.values[row][cls]

    def row(self, i: int) -> List[Cyclotomic]:
        return list(self.values[i])

    def find_row(self, dense_row: np.ndarray) -> Optional[int]:
        return self._row_index.get(np.asarray(dense_row, dtype=np.int64).tobytes())

    def galois_rows(self, r: int) -> np.ndarray:
        """Dense table with zeta_e -> zeta_e^r applied to every value."""
        return self.dense @ _galois_matrix(self.exponent, r)

    def galois_permutation(self, r: int) -> List[int]:
        img = self.galois_rows(r)
        perm = []
        for i in range(len(self)):
            j = self.find_row(img[i])
            if j is None:
                raise CharacterTableError(f"row {i} has no Galois image in the table")
            perm.append(j)
        return perm

    def sigma_permutation(self) -> List[int]:
        return self.galois_permutation(galois_exponent(self.exponent))

    def to_json(self) -> dict:
        c = self.classes
        return {
            "order": self.order,
            "exponent": self.exponent,
            "classes": [{"rep": list(c.reps[i]), "size": c.sizes[i], "element_order": c.orders[i]}
                        for i in range(len(c))],
            "rows": [{"degree": self.degrees[i], "values": [str(v) for v in self.values[i]]}
                     for i in range(len(self))],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    def __repr__(self) -> str:
        return f"<CharacterTable order={self.order} classes={len(self)} degrees={self.degrees}>"


def _class_matrix(G: PermGroup, cl: ConjClasses, j: int, inverse_of: List[int]) -> np.ndarray:
    """M[k, i] = #{x in C_j : x^-1 z_i in C_k} for a fixed z_i in C_i."""
    k = len(cl)
    M = np.zeros((k, k), dtype=np.int64)
    inv_members = cl.members[inverse_of[j]]
    index = cl.index
    for i, z in enumerate(cl.reps):
        col = M[:, i]
        for y in inv_members:
            col[index[pmul(y, z)]] += 1
    return M


def character_table(G: PermGroup, prime_cap: int = DEFAULT_PRIME_CAP,
                    seed: int = 0) -> CharacterTable:
    cl = G.conjugacy_classes()
    k = len(cl)
    N = G.order
    e = reduce(lcm, cl.orders, 1)
    p = choose_prime(e, N, prime_cap)
    rng = np.random.default_rng(seed)
    inverse_of = cl.inverse_classes()
    sizes = np.array(cl.sizes, dtype=np.int64)

    # common eigenvectors of the class matrices
    done: List[np.ndarray] = []
    spaces = [(np.eye(k, dtype=np.int64), list(range(k)))]
    if k == 1:
        done, spaces = [np.ones(1, dtype=np.int64)], []
    for j in sorted(range(1, k), key=lambda j: (cl.sizes[j], j)):
        if not spaces:
            break
        Mt = _class_matrix(G, cl, j, inverse_of).T % p
        pending = []
        for S, piv in spaces:
            for T, tp in _split(S, piv, Mt, p, rng):
                if len(T) == 1:
                    done.append(T[0])
                else:
                    pending.append((T, tp))
        spaces = pending
    if spaces:
        raise CharacterTableError("class matrices failed to separate the characters")

    # central characters -> character values mod p
    inv_sizes = np.array([pow(int(s), -1, p) for s in sizes], dtype=np.int64)
    rows_mod = []
    for w in done:
        w = (w * pow(int(w[0]), -1, p)) % p
        s = int(np.sum((w * w[inverse_of]) % p * inv_sizes % p) % p)
        t = N * pow(s, -1, p) % p
        d = next((d for d in range(1, isqrt(N) + 1) if d * d % p == t), None)
        if d is None:
            raise CharacterTableError("degree not recoverable mod p")
        rows_mod.append((w * d % p) * inv_sizes % p)
    X = np.array(rows_mod, dtype=np.int64)

    dense = _lift(G, cl, X, e, p)
    # row order: degree, then rendering
    tmp = CharacterTable(G, cl, e, dense, p)
    keys = sorted(range(k), key=lambda i: (tmp.degrees[i],
                                           [v.expression() for v in tmp.values[i]]))
    return CharacterTable(G, cl, e, np.ascontiguousarray(dense[keys]), p)


def _split(S, piv, Mt, p, rng):
    """Split the invariant subspace spanned by the rows of S into eigenspaces."""
    r = len(S)
    R = (S @ Mt % p)[:, piv] % p
    found: Dict[int, np.ndarray] = {}
    total = 0
    for _ in range(64):
        c = rng.integers(0, p, size=r, dtype=np.int64)
        if not c.any():
            continue
        for lam in _roots_mod(_krylov_minpoly(R, c, p), p):
            if lam in found:
                continue
            A = (R - lam * np.eye(r, dtype=np.int64)) % p
            found[lam] = left_nullspace_mod(A, p)
            total += len(found[lam])
        if total == r:
            break
    else:
        raise CharacterTableError("eigenspace decomposition incomplete")
    parts = []
    for lam in sorted(found):
        T, tp = rref_mod(found[lam] @ S % p, p)
        parts.append((T, tp))
    return parts


def _lift(G: PermGroup, cl: ConjClasses, X: np.ndarray, e: int, p: int) -> np.ndarray:
    k = len(cl)
    Rm = reduction_matrix(e)
    phi = Rm.shape[1]
    g = primitive_root(p)
    omega_e = pow(g, (p - 1) // e, p)
    dense = np.zeros((k, k, phi), dtype=np.int64)
    degrees = X[:, 0]
    for c in range(k):
        rep = cl.reps[c]
        o = cl.orders[c]
        pw = [0]
        y = rep
        for _ in range(1, o):
            pw.append(cl.index[y])
            y = pmul(y, rep)
        w_o = pow(omega_e, e // o, p)
        D = np.array([[pow(w_o, (-j * l) % o, p) for l in range(o)] for j in range(o)],
                     dtype=np.int64)
        m = (X[:, pw] @ D) % p * pow(o, -1, p) % p
        if np.any(m.sum(axis=1) % p != degrees % p) or np.any(m > degrees[:, None]):
            raise CharacterTableError(f"eigenvalue multiplicities out of range at class {c}")
        ring = np.zeros((k, e), dtype=np.int64)
        ring[:, [l * (e // o) for l in range(o)]] = m
        dense[:, c, :] = ring @ Rm
    return dense


# -- class functions ---------------------------------------------------------

def class_function_dense(values: Sequence[Cyclotomic], e: int) -> Tuple[np.ndarray, int]:
    """Integer power-basis coordinates of D*values in Q(zeta_e), and D."""
    rows = [Cyclotomic.rational(v) if not isinstance(v, Cyclotomic) else v for v in values]
    coords = [x.dense(e) for x in rows]
    D = reduce(lcm, (Fraction(c).denominator for r in coords for c in r), 1)
    arr = np.array([[int(Fraction(c) * D) for c in r] for r in coords], dtype=np.int64)
    return arr, D


def inner_product(a: Sequence[Cyclotomic], b: Sequence[Cyclotomic],
                  classes: ConjClasses) -> Cyclotomic:
    """<a, b> = 1/|G| sum |C| a(g) conj(b(g))."""
    total = Cyclotomic.rational(0)
    N = sum(classes.sizes)
    for s, x, y in zip(classes.sizes, a, b):
        total = total + (x * y.conjugate() if isinstance(y, Cyclotomic) else x * y) * s
    return total / N


def irr_constituents(f: Sequence[Cyclotomic], table: CharacterTable) -> List[Tuple[int, int]]:
    """Multiplicities <f, chi> of each irreducible in the class function f."""
    e = table.exponent
    for v in f:
        if isinstance(v, Cyclotomic) and e % v.conductor:
            raise CharacterTableError("class function has values outside Q(zeta_e)")
    F, D = class_function_dense(f, e)
    conj = table.dense @ _galois_matrix(e, -1)
    S = pair_sums(F[None], conj, np.array(table.classes.sizes), e)[0]
    out = []
    for i in range(len(table)):
        v = S[i]
        if np.any(v[1:]) or v[0] % (D * table.order):
            raise CharacterTableError("not a character: non-integral inner product")
        m = int(v[0]) // (D * table.order)
        if m < 0:
            raise CharacterTableError("not a character: negative multiplicity")
        if m:
            out.append((i, m))
    # reconstruction
    recon = sum(m * table.dense[i] for i, m in out) if out else np.zeros_like(F)
    if not np.array_equal(recon * D, F):
        raise CharacterTableError("constituents do not reconstruct the class function")
    return out


def fusion(H: PermGroup, G: PermGroup) -> List[int]:
    """Class of G containing each class representative of H."""
    gcl = G.conjugacy_classes()
    return [gcl.index[r] for r in H.conjugacy_classes().reps]


def induce(values: Sequence[Cyclotomic], H: PermGroup, G: PermGroup) -> List[Cyclotomic]:
    """Induced class function from H to G, from values on H's classes."""
    hcl = H.conjugacy_classes()
    gcl = G.conjugacy_classes()
    if len(values) != len(hcl):
        raise ValueError("values do not match the classes of H")
    fus = fusion(H, G)
    acc: Dict[int, Cyclotomic] = {}
    for c, v in enumerate(values):
        acc[fus[c]] = acc.get(fus[c], Cyclotomic.rational(0)) + v * hcl.sizes[c]
    out = []
    for k in range(len(gcl)):
        cent = G.order // gcl.sizes[k]
        out.append(acc.get(k, Cyclotomic.rational(0)) * Fraction(cent, H.order))
    return out


def restrict(values: Sequence[Cyclotomic], G: PermGroup, H: PermGroup) -> List[Cyclotomic]:
    return [values[k] for k in fusion(H, G)]


def sigma_on_character(table: CharacterTable, i: int) -> int:
    return table.sigma_permutation()[i]


def odd_degree_rows(table: CharacterTable) -> List[int]:
    return [i for i, d in enumerate(table.degrees) if d % 2]


# -- invariants --------------------------------------------------------------

def check_table(table: CharacterTable) -> Dict[str, bool]:
    """Exact orthogonality, degree and Galois checks; returns name -> passed."""
    e, N = table.exponent, table.order
    cl = table.classes
    k = len(table)
    V = table.dense
    conjV = V @ _galois_matrix(e, -1)
    sizes = np.array(cl.sizes, dtype=np.int64)

    rows = pair_sums(V, conjV, sizes, e)
    expect = np.zeros_like(rows)
    expect[np.arange(k), np.arange(k), 0] = N
    row_ok = bool(np.array_equal(rows, expect))

    Vt = np.ascontiguousarray(V.transpose(1, 0, 2))
    cols = pair_sums(Vt, np.ascontiguousarray(conjV.transpose(1, 0, 2)),
                     np.ones(k, dtype=np.int64), e)
    expect = np.zeros_like(cols)
    expect[np.arange(k), np.arange(k), 0] = [N // s for s in cl.sizes]
    col_ok = bool(np.array_equal(cols, expect))

    degs = table.degrees
    deg_ok = sum(d * d for d in degs) == N and all(d > 0 and N % d == 0 for d in degs)

    r = galois_exponent(e)
    try:
        perm = table.galois_permutation(r)
        perm_ok = sorted(perm) == list(range(k))
    except CharacterTableError:
        perm_ok = False
    img = table.galois_rows(r)
    pm = cl.power_map(r)
    power_ok = bool(np.array_equal(img, V[:, pm]))

    # Brauer: sigma-fixed rows and r-power-fixed classes are equinumerous
    brauer_ok = perm_ok and sum(perm[i] == i for i in range(k)) == sum(
        pm[c] == c for c in range(k))
    return {"row_orthogonality": row_ok, "column_orthogonality": col_ok,
            "degrees": deg_ok, "sigma_permutation": perm_ok,
            "sigma_power_map": power_ok, "brauer_count": brauer_ok}


__all__ = ["CharacterTable", "CharacterTableError", "character_table", "sigma_on_character",
           "odd_degree_rows", "induce", "restrict", "inner_product", "irr_constituents",
           "check_table", "fusion", "choose_prime"]
