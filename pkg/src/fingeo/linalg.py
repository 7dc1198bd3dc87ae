"""Dense linear algebra over a small finite field.

Matrices are 2-D numpy int64 arrays of field codes.  Every function takes
the field first.  Row-vector convention throughout: a subspace is the row
space of a matrix and a linear map acts as ``v -> v @ A``.
"""

from __future__ import annotations

import itertools

import numpy as np

from .errors import DivisionByZero
from .galois import Field


def asarray(M, cols=None):
    A = np.asarray(M, dtype=np.int64)
    if A.ndim == 1:
        A = A.reshape(1, -1) if A.size else np.zeros((0, cols or 0), dtype=np.int64)
    return A


def rref(F: Field, M):
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    A = asarray(M).copy()
    nrows, ncols = A.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        lead = int(A[r, c])
        if lead != 1:
            A[r] = F.vmul(F.inv(lead), A[r])
        col = A[:, c].copy()
        col[r] = 0
        others = np.flatnonzero(col)
        if others.size:
            A[others] = F.vsub(A[others], F.vmul(col[others, None], A[r][None, :]))
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank(F: Field, M) -> int:
    return len(rref(F, M)[1])


def matmul(F: Field, A, B):
    A, B = asarray(A), asarray(B)
    if F.prime:
        return (A @ B) % F.p
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for k in range(A.shape[1]):
        out = F.vadd(out, F.vmul(A[:, k][:, None], B[k][None, :]))
    return out


def nullspace(F: Field, M, ncols=None):
    """Basis (as rows) of {x : M @ x.T == 0}."""
    A = asarray(M)
    ncols = A.shape[1] if ncols is None else ncols
    if A.shape[0] == 0:
        return np.eye(ncols, dtype=np.int64)
    R, piv = rref(F, A)
    free = [c for c in range(ncols) if c not in piv]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for r, p in enumerate(piv):
            basis[i, p] = F.neg(int(R[r, f]))
    return basis


def inverse(F: Field, M):
    A = asarray(M)
    n = A.shape[0]
    aug = np.concatenate([A, np.eye(n, dtype=np.int64)], axis=1)
    R, piv = rref(F, aug)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise DivisionByZero("singular matrix")
    return R[:n, n:]


def is_invertible(F: Field, M) -> bool:
    A = asarray(M)
    return A.shape[0] == A.shape[1] and rank(F, A) == A.shape[0]


def identity(n):
    return np.eye(n, dtype=np.int64)


def mat_add(F, A, B):
    return F.vadd(asarray(A), asarray(B))


def scale(F, c, A):
    return F.vmul(int(c), asarray(A))


def mat_pow(F, A, e):
    A = asarray(A)
    result = identity(A.shape[0])
    while e:
        if e & 1:
            result = matmul(F, result, A)
        A = matmul(F, A, A)
        e >>= 1
    return result


def all_coefficients(F: Field, d: int):
    """All q**d coefficient vectors, lexicographic order."""
    if d == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return np.array(list(itertools.product(range(F.order), repeat=d)), dtype=np.int64)


def row_combinations(F: Field, B):
    """Every GF(q)-linear combination of the rows of B (including zero)."""
    B = asarray(B)
    return matmul(F, all_coefficients(F, B.shape[0]), B) if B.shape[0] else \
        np.zeros((1, B.shape[1]), dtype=np.int64)


def normalize_rows(F: Field, V):
    """Scale each nonzero row so its first nonzero entry is 1; zero rows kept."""
    V = asarray(V)
    if V.shape[0] == 0:
        return V.copy()
    nz = V != 0
    lead_idx = np.argmax(nz, axis=1)
    lead = V[np.arange(V.shape[0]), lead_idx]
    ok = lead != 0
    out = V.copy()
    if ok.any():
        inv = F.vinv(lead[ok])
        out[ok] = F.vmul(inv[:, None], V[ok])
    return out


def encode(F: Field, V):
    """Integer code of each row, most significant coordinate first."""
    V = asarray(V)
    weights = F.order ** np.arange(V.shape[1] - 1, -1, -1, dtype=np.int64)
    return V @ weights


def decode(F: Field, codes, r):
    codes = np.asarray(codes, dtype=np.int64).reshape(-1)
    out = np.zeros((codes.size, r), dtype=np.int64)
    c = codes.copy()
    for j in range(r - 1, -1, -1):
        out[:, j] = c % F.order
        c //= F.order
    return out


def minimal_polynomial(F: Field, A, max_degree=None):
    """Monic minimal polynomial of a square matrix, low degree first.

    With ``max_degree`` set, returns None as soon as the degree is known to
    exceed it.
    """
    A = asarray(A)
    n = A.shape[0]
    powers = [identity(n).reshape(-1)]
    P = identity(n)
    top = n if max_degree is None else min(n, max_degree)
    for d in range(1, top + 1):
        P = matmul(F, P, A)
        powers.append(P.reshape(-1))
        # dependency among I, A, ..., A^d  <=>  nullspace of the transpose
        M = np.stack(powers, axis=1)  # n*n x (d+1)
        if rank(F, M) <= d:
            ker = nullspace(F, M)
            # the kernel is one dimensional; scale the coefficient of A^d to 1
            v = ker[0]
            lead = int(v[d])
            v = F.vmul(F.inv(lead), v)
            return [int(x) for x in v]
    if max_degree is not None and max_degree < n:
        return None
    raise AssertionError("Cayley-Hamilton violated")  # pragma: no cover


def solve_rows(F: Field, B, V):
    """Coefficients C with C @ B == V, for B of full row rank; None if V is outside the row space."""
    B, V = asarray(B), asarray(V)
    _, piv = rref(F, B)
    k = B.shape[0]
    if len(piv) < k:
        raise ValueError("rows of B are dependent")
    # B restricted to its pivot columns is invertible
    C = matmul(F, V[:, piv], inverse(F, B[:, piv]))
    if not np.array_equal(matmul(F, C, B), V):
        return None
    return C


def block_diag(*blocks):
    size = sum(b.shape[0] for b in blocks)
    out = np.zeros((size, size), dtype=np.int64)
    i = 0
    for b in blocks:
        k = b.shape[0]
        out[i:i + k, i:i + k] = b
        i += k
    return out


def poly_of_matrix(F: Field, coeffs, A):
    A = asarray(A)
    n = A.shape[0]
    out = np.zeros((n, n), dtype=np.int64)
    for c in reversed(list(coeffs)):
        out = F.vadd(matmul(F, out, A), F.vmul(int(c), identity(n)))
    return out
