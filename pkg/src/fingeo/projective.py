"""Subspaces of PG(r-1, q) in canonical reduced row echelon form.

A :class:`Subspace` is identified with its RREF basis, so two subspaces are
equal exactly when their row tuples agree.  Points are subspaces with one
row.  Point sets are cached as Python int bitmasks indexed by the code of
the normalised coordinate vector, which makes containment and
disjointness tests a single ``&``.
"""

from __future__ import annotations

import itertools

import numpy as np

from . import linalg as la
from .errors import AmbientMismatch, NotComplementary, NotDisjoint, TooLarge, ValidationError
from .galois import Field

DEFAULT_ENUM_CAP = 10 ** 6


class Subspace:
    __slots__ = ("field", "ambient", "rows", "_hash", "_array", "_pivots", "_mask", "_codes")

    def __init__(self, field: Field, ambient: int, rows):
        # rows must already be in RREF; use subspace() for arbitrary input
        self.field = field
        self.ambient = ambient
        self.rows = tuple(tuple(int(x) for x in row) for row in rows)
        self._hash = hash((ambient, self.rows))
        self._array = None
        self._pivots = None
        self._mask = None
        self._codes = None

    # identity

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self._hash == other._hash
                and self.rows == other.rows and self.ambient == other.ambient
                and self.field == other.field)

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.sort_key < other.sort_key

    @property
    def sort_key(self):
        return (len(self.rows), self.rows)

    def __repr__(self):
        return f"Subspace(projdim={self.projdim}, rows={list(map(list, self.rows))})"

    # shape

    @property
    def dim(self) -> int:
        """Vector-space dimension."""
        return len(self.rows)

    @property
    def projdim(self) -> int:
        return len(self.rows) - 1

    @property
    def array(self):
        if self._array is None:
            self._array = np.array(self.rows, dtype=np.int64).reshape(len(self.rows), self.ambient)
        return self._array

    @property
    def pivots(self):
        if self._pivots is None:
            self._pivots = tuple(int(np.flatnonzero(r)[0]) for r in self.array)
        return self._pivots

    @property
    def codes(self):
        """Sorted codes of the normalised vectors of all points."""
        if self._codes is None:
            if self.dim == 0:
                self._codes = np.zeros(0, dtype=np.int64)
            else:
                F = self.field
                coeffs = la.all_coefficients(F, self.dim)
                # keep coefficient vectors whose first nonzero entry is 1
                lead = coeffs[np.arange(len(coeffs)), np.argmax(coeffs != 0, axis=1)]
                coeffs = coeffs[lead == 1]
                vecs = la.matmul(F, coeffs, self.array)
                # RREF rows: the combination is already normalised
                self._codes = np.sort(la.encode(F, vecs))
        return self._codes

    @property
    def mask(self) -> int:
        if self._mask is None:
            size = self.field.order ** self.ambient
            bits = np.zeros(size, dtype=np.uint8)
            bits[self.codes] = 1
            self._mask = int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little")
        return self._mask

    @property
    def num_points(self) -> int:
        q = self.field.order
        return (q ** self.dim - 1) // (q - 1)

    def contains(self, other: "Subspace") -> bool:
        _check_ambient(self, other)
        if other.dim > self.dim:
            return False
        if other.dim == 0:
            return True
        return la.rank(self.field, np.vstack([self.array, other.array])) == self.dim

    def contains_fast(self, other: "Subspace") -> bool:
        return other.mask & ~self.mask == 0

    def is_disjoint(self, other: "Subspace") -> bool:
        _check_ambient(self, other)
        return self.mask & other.mask == 0

    def to_dict(self):
        return {"ambient": self.ambient, "rows": [list(r) for r in self.rows]}


def _check_ambient(*parts):
    r = {p.ambient for p in parts}
    if len(r) > 1:
        raise AmbientMismatch(f"ambient dimensions differ: {sorted(r)}")
    fields = {p.field for p in parts}
    if len(fields) > 1:
        raise AmbientMismatch("subspaces are over different fields")


def subspace(field: Field, rows, ambient: int | None = None) -> Subspace:
    """Canonical subspace spanned by the given row vectors."""
    A = la.asarray(rows, ambient)
    if ambient is None:
        ambient = A.shape[1]
    if A.shape[0] == 0:
        return Subspace(field, ambient, ())
    if A.shape[1] != ambient:
        raise AmbientMismatch("row length does not match ambient")
    R, _ = la.rref(field, A % field.order if field.prime else A)
    return Subspace(field, ambient, R)


def point(field: Field, coords) -> Subspace:
    if not any(int(c) for c in coords):
        raise ValidationError("the zero vector is not a projective point")
    return subspace(field, [list(coords)])


def empty(field: Field, r: int) -> Subspace:
    return Subspace(field, r, ())


def whole(field: Field, r: int) -> Subspace:
    return Subspace(field, r, la.identity(r))


def from_dict(field: Field, d) -> Subspace:
    r = int(d["ambient"])
    rows = d["rows"]
    for row in rows:
        if len(row) != r or any(not (0 <= int(x) < field.order) for x in row):
            raise ValidationError("subspace row has wrong length or out-of-range code")
    S = subspace(field, rows, r)
    if S.rows != tuple(tuple(int(x) for x in row) for row in rows):
        raise ValidationError("subspace rows are not in reduced row echelon form")
    return S


def span(*parts) -> Subspace:
    parts = [p for p in parts if p is not None]
    if len(parts) == 1 and isinstance(parts[0], (list, tuple)):
        parts = list(parts[0])
    _check_ambient(*parts)
    F, r = parts[0].field, parts[0].ambient
    nonempty = [p.array for p in parts if p.dim]
    if not nonempty:
        return empty(F, r)
    return subspace(F, np.vstack(nonempty), r)


def meet(A: Subspace, B: Subspace) -> Subspace:
    """Intersection via the Zassenhaus algorithm."""
    _check_ambient(A, B)
    F, r = A.field, A.ambient
    if A.dim == 0 or B.dim == 0:
        return empty(F, r)
    if A.contains_fast(B):
        return B
    if B.contains_fast(A):
        return A
    top = np.concatenate([A.array, A.array], axis=1)
    bot = np.concatenate([B.array, np.zeros_like(B.array)], axis=1)
    R, piv = la.rref(F, np.vstack([top, bot]))
    rows = [R[i, r:] for i, p in enumerate(piv) if p >= r]
    return subspace(F, rows, r) if rows else empty(F, r)


def points_of(S: Subspace) -> list:
    """All points of S as one-row subspaces, lexicographic on coordinates."""
    F = S.field
    vecs = la.decode(F, S.codes, S.ambient)
    return [Subspace(F, S.ambient, [v]) for v in vecs]


def point_from_code(field: Field, r: int, code: int) -> Subspace:
    return Subspace(field, r, la.decode(field, [code], r))


def codes_to_mask(field: Field, r: int, codes) -> int:
    bits = np.zeros(field.order ** r, dtype=np.uint8)
    bits[np.asarray(codes, dtype=np.int64)] = 1
    return int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little")


def mask_to_codes(mask: int) -> list:
    if mask == 0:
        return []
    raw = np.frombuffer(mask.to_bytes((mask.bit_length() + 7) // 8, "little"), dtype=np.uint8)
    return [int(c) for c in np.flatnonzero(np.unpackbits(raw, bitorder="little"))]


def all_points_mask(field: Field, r: int) -> int:
    return whole(field, r).mask


def project_from(E: Subspace, Sigma: Subspace, X: Subspace) -> Subspace:
    """Image of X under projection from E onto the complement Sigma."""
    _check_ambient(E, Sigma, X)
    if E.dim + Sigma.dim != E.ambient or not E.is_disjoint(Sigma):
        raise NotComplementary("E and Sigma are not complementary")
    if not E.is_disjoint(X):
        raise NotDisjoint("X meets the centre of projection")
    return meet(span(E, X), Sigma)


def complement(E: Subspace) -> Subspace:
    """Deterministic complement spanned by the unit vectors at non-pivot columns."""
    r = E.ambient
    free = [c for c in range(r) if c not in E.pivots]
    rows = np.zeros((len(free), r), dtype=np.int64)
    for i, c in enumerate(free):
        rows[i, c] = 1
    return Subspace(E.field, r, rows)


def quotient(E: Subspace, X: Subspace) -> Subspace:
    """X/E in coordinates of the default complement of E (non-pivot columns)."""
    _check_ambient(E, X)
    F = E.field
    if X.dim == 0:
        return empty(F, E.ambient - E.dim)
    if E.dim == 0:
        return X
    A = X.array
    piv = list(E.pivots)
    red = F.vsub(A, la.matmul(F, A[:, piv], E.array))
    free = [c for c in range(E.ambient) if c not in piv]
    return subspace(F, red[:, free], len(free))


def from_quotient(E: Subspace, Y: Subspace) -> Subspace:
    """span(E, Y) for Y given in the quotient coordinates used by :func:`quotient`."""
    free = [c for c in range(E.ambient) if c not in E.pivots]
    if Y.ambient != len(free):
        raise AmbientMismatch("quotient dimension mismatch")
    rows = np.zeros((Y.dim, E.ambient), dtype=np.int64)
    if Y.dim:
        rows[:, free] = Y.array
    return span(E, subspace(E.field, rows, E.ambient)) if Y.dim else E


def restrict(X: Subspace, U: Subspace) -> Subspace:
    """Coordinates of X (contained in U) relative to the RREF basis of U."""
    _check_ambient(X, U)
    if not U.contains(X):
        raise ValidationError("subspace is not contained in the frame")
    if X.dim == 0:
        return empty(U.field, U.dim)
    return subspace(U.field, X.array[:, list(U.pivots)], U.dim)


def lift(Y: Subspace, U: Subspace) -> Subspace:
    """Inverse of restrict: embed frame coordinates into the ambient of U."""
    if Y.ambient != U.dim:
        raise AmbientMismatch("frame dimension mismatch")
    if Y.dim == 0:
        return empty(U.field, U.ambient)
    return subspace(U.field, la.matmul(U.field, Y.array, U.array), U.ambient)


def apply_matrix(X: Subspace, g) -> Subspace:
    """Image of X under the collineation v -> v @ g."""
    if X.dim == 0:
        return X
    return subspace(X.field, la.matmul(X.field, X.array, g), X.ambient)


def gaussian_binomial(r: int, k: int, q: int) -> int:
    """Number of k-dimensional vector subspaces of GF(q)^r."""
    if k < 0 or k > r:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (r - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def enumerate_subspaces(field: Field, r: int, d: int, cap: int = DEFAULT_ENUM_CAP):
    """Every projective d-subspace of PG(r-1, q), each exactly once.

    Iterates RREF matrices: pivot sets in lexicographic order, then free
    entries in lexicographic order.
    """
    k = d + 1
    total = gaussian_binomial(r, k, field.order)
    if total > cap:
        raise TooLarge(f"{total} subspaces exceed the cap {cap}")
    if k == 0:
        yield empty(field, r)
        return
    q = field.order
    for piv in itertools.combinations(range(r), k):
        slots = [(i, c) for i in range(k) for c in range(piv[i] + 1, r) if c not in piv]
        base = np.zeros((k, r), dtype=np.int64)
        for i, c in enumerate(piv):
            base[i, c] = 1
        for vals in itertools.product(range(q), repeat=len(slots)):
            M = base.copy()
            for (i, c), v in zip(slots, vals):
                M[i, c] = v
            yield Subspace(field, r, M)


def random_invertible(field: Field, r: int, rng) -> np.ndarray:
    while True:
        g = rng.integers(0, field.order, size=(r, r))
        if la.is_invertible(field, g):
            return g.astype(np.int64)
