"""Exact linear algebra over a prime field and relative simplicial homology.

Matrices are dense numpy int64 arrays with entries reduced mod p; all
elimination is exact (p fits comfortably below the int64 overflow bound at
the sizes this package handles).  Homology is computed by rank counting on
boundary matrices; relative homology of a closed pair (P, E) uses the
quotient chain complex spanned by the simplices of P \\ E.

The cone construction realizes a closed pair as an absolute complex whose
reduced homology equals the relative homology of the pair.  Reusing one
apex across many pairs turns pair inclusions into plain complex inclusions,
which is what the zigzag layer needs.
"""

from __future__ import annotations

from typing import Collection, Sequence

import numpy as np

from .complexes import Complex, Simplex, simplex

BettiVector = tuple


def check_prime(p: int) -> int:
    if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
        raise ValueError(f"field characteristic must be prime, got {p}")
    return p


def _inv_mod(a: int, p: int) -> int:
    return pow(a, p - 2, p)


def row_reduce(mat: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form mod p; returns (rref, pivot column list)."""
    a = np.array(mat, dtype=np.int64) % p
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        a[r] = (a[r] * _inv_mod(int(a[r, c]), p)) % p
        col = a[:, c].copy()
        col[r] = 0
        a = (a - np.outer(col, a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def rank(mat: np.ndarray, p: int = 2) -> int:
    """Rank over the prime field via elimination."""
    a = np.asarray(mat)
    if a.size == 0:
        return 0
    return len(row_reduce(a, p)[1])


def nullspace(mat: np.ndarray, p: int) -> np.ndarray:
    """Columns form a basis of the kernel of mat over GF(p)."""
    a = np.asarray(mat, dtype=np.int64)
    rows, cols = a.shape
    if cols == 0:
        return np.zeros((0, 0), dtype=np.int64)
    if rows == 0:
        return np.eye(cols, dtype=np.int64)
    rref, pivots = row_reduce(a, p)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((cols, len(free)), dtype=np.int64)
    for j, fc in enumerate(free):
        basis[fc, j] = 1
        for i, pc in enumerate(pivots):
            basis[pc, j] = (-int(rref[i, fc])) % p
    return basis


def solve(mat: np.ndarray, rhs: np.ndarray, p: int) -> np.ndarray | None:
    """One solution of mat @ x = rhs over GF(p), or None if inconsistent."""
    a = np.asarray(mat, dtype=np.int64)
    b = np.asarray(rhs, dtype=np.int64).reshape(-1, 1)
    if a.shape[1] == 0:
        return None if np.any(b % p) else np.zeros((0,), dtype=np.int64)
    aug, pivots = row_reduce(np.hstack([a, b]), p)
    if a.shape[1] in pivots:
        return None
    x = np.zeros(a.shape[1], dtype=np.int64)
    for i, pc in enumerate(pivots):
        x[pc] = aug[i, a.shape[1]]
    return x


def boundary_matrix(chain: Sequence[Simplex], lower: Sequence[Simplex], p: int) -> np.ndarray:
    """Boundary operator from span(chain) to span(lower), faces outside `lower` dropped.

    Sign convention: removing the vertex at position i contributes (-1)^i.
    """
    index = {s: i for i, s in enumerate(lower)}
    mat = np.zeros((len(lower), len(chain)), dtype=np.int64)
    for j, s in enumerate(chain):
        for i in range(len(s)):
            face = s[:i] + s[i + 1:]
            row = index.get(face)
            if row is not None:
                mat[row, j] = (mat[row, j] + (-1) ** i) % p
    return mat


def _validate_pair(cx: Complex, pset: Collection[Simplex], eset: Collection[Simplex]):
    pset = cx.check_subset(pset)
    eset = cx.check_subset(eset)
    if not eset <= pset:
        raise ValueError("E must be a subset of P")
    if not cx.is_closed(pset):
        raise ValueError("P is not closed")
    if not cx.is_closed(eset):
        raise ValueError("E is not closed")
    return pset, eset


def relative_homology(cx: Complex, pset: Collection[Simplex],
                      eset: Collection[Simplex], p: int = 2) -> BettiVector:
    """Betti numbers of the pair (P, E) over GF(p), indexed 0..dim(K)."""
    check_prime(p)
    pset, eset = _validate_pair(cx, pset, eset)
    rel = sorted(pset - eset)
    by_dim: list[list[Simplex]] = [[] for _ in range(cx.dim + 1)]
    for s in rel:
        by_dim[len(s) - 1].append(s)
    ranks = [0] * (cx.dim + 2)
    for k in range(1, cx.dim + 1):
        if by_dim[k] and by_dim[k - 1]:
            ranks[k] = rank(boundary_matrix(by_dim[k], by_dim[k - 1], p), p)
    return tuple(len(by_dim[k]) - ranks[k] - ranks[k + 1] for k in range(cx.dim + 1))


def cone_pair(cx: Complex, pset: Collection[Simplex], eset: Collection[Simplex],
              apex: int | None = None) -> Complex:
    """The complex P together with a cone over E from a fresh apex vertex.

    Reduced homology of the result equals relative_homology(cx, P, E).
    Pass the same apex for every pair of a zigzag so that pair inclusions
    become complex inclusions.
    """
    pset, eset = _validate_pair(cx, pset, eset)
    if apex is None:
        apex = max(cx.vertices, default=-1) + 1
    if (apex,) in cx.simplices:
        raise ValueError(f"apex {apex} collides with an existing vertex")
    coned = set(pset)
    coned.add((apex,))
    for s in eset:
        coned.add(simplex(s + (apex,)))
    return Complex(coned)


def reduced_betti(cx: Complex, p: int = 2) -> BettiVector:
    """Reduced Betti numbers of a complex over GF(p), indexed 0..dim."""
    check_prime(p)
    if not cx.simplices:
        return ()
    by_dim: list[list[Simplex]] = [[] for _ in range(cx.dim + 1)]
    for s in cx.sorted_simplices():
        by_dim[len(s) - 1].append(s)
    ranks = [0] * (cx.dim + 2)
    ranks[0] = 1 if by_dim[0] else 0
    for k in range(1, cx.dim + 1):
        if by_dim[k] and by_dim[k - 1]:
            ranks[k] = rank(boundary_matrix(by_dim[k], by_dim[k - 1], p), p)
    return tuple(len(by_dim[k]) - ranks[k] - ranks[k + 1] for k in range(cx.dim + 1))


class HomologyBasis:
    """Reduced homology of a complex with explicit cycle representatives.

    For each dimension k we keep the k-simplices in canonical order, a basis
    of boundaries, and chosen cycle representatives extending it, so that an
    arbitrary cycle can be expressed in homology coordinates.  Used by the
    zigzag layer to turn inclusions into matrices.
    """

    def __init__(self, cx: Complex, p: int = 2):
        check_prime(p)
        self.cx = cx
        self.p = p
        self.by_dim: list[list[Simplex]] = [[] for _ in range(cx.dim + 1)]
        for s in cx.sorted_simplices():
            self.by_dim[len(s) - 1].append(s)
        self.index = [{s: i for i, s in enumerate(level)} for level in self.by_dim]
        self._solvers: list[np.ndarray] = []
        self.betti: list[int] = []
        for k in range(cx.dim + 1):
            n = len(self.by_dim[k])
            if k == 0:
                dmat = np.ones((1, n), dtype=np.int64) if n else np.zeros((1, 0), dtype=np.int64)
            else:
                dmat = boundary_matrix(self.by_dim[k], self.by_dim[k - 1], p)
            cycles = nullspace(dmat, p)
            if k + 1 <= cx.dim and self.by_dim[k + 1]:
                bnd = boundary_matrix(self.by_dim[k + 1], self.by_dim[k], p)
            else:
                bnd = np.zeros((n, 0), dtype=np.int64)
            if n == 0:
                self._solvers.append(np.zeros((0, 0), dtype=np.int64))
                self.betti.append(0)
                continue
            bsel = bnd[:, row_reduce(bnd, p)[1]] if bnd.shape[1] else bnd
            _, pivots = row_reduce(np.hstack([bsel, cycles]), p)
            hsel = cycles[:, [c - bsel.shape[1] for c in pivots if c >= bsel.shape[1]]]
            # columns: independent boundaries, then homology representatives
            self._solvers.append(np.hstack([bsel, hsel]))
            self.betti.append(hsel.shape[1])

    def representative_cycles(self, k: int) -> np.ndarray:
        """Columns are chosen cycle representatives of H_k, over the k-simplex basis."""
        solver = self._solvers[k]
        h = self.betti[k]
        return solver[:, solver.shape[1] - h:]

    def coordinates(self, k: int, chain_vec: np.ndarray) -> np.ndarray:
        """Homology coordinates of a cycle given over this complex's k-simplices."""
        solver = self._solvers[k]
        h = self.betti[k]
        if h == 0:
            return np.zeros(0, dtype=np.int64)
        x = solve(solver, chain_vec, self.p)
        if x is None:
            raise ValueError("chain is not a cycle of this complex")
        return x[solver.shape[1] - h:]


def induced_map(small: HomologyBasis, big: HomologyBasis, k: int) -> np.ndarray:
    """Matrix of the inclusion-induced map H_k(small) -> H_k(big)."""
    if k > small.cx.dim:
        return np.zeros((big.betti[k] if k <= big.cx.dim else 0, 0), dtype=np.int64)
    if k > big.cx.dim:
        return np.zeros((0, small.betti[k]), dtype=np.int64)
    src = small.representative_cycles(k)
    out = np.zeros((big.betti[k], small.betti[k]), dtype=np.int64)
    n_big = len(big.by_dim[k])
    for j in range(small.betti[k]):
        vec = np.zeros(n_big, dtype=np.int64)
        for i, s in enumerate(small.by_dim[k]):
            vec[big.index[k][s]] = src[i, j]
        out[:, j] = big.coordinates(k, vec)
    return out
