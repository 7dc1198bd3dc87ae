"""Point caps over GF(Q): conics, elliptic quadrics and conic recognition."""

from __future__ import annotations

import itertools

import numpy as np

from . import linalg as la
from . import projective as pg
from .errors import TooFewPoints
from .galois import Field, smallest_irreducible


def is_cap(points) -> bool:
    """No three of the points are collinear."""
    points = list(points)
    if len(points) < 3:
        return len(set(points)) == len(points)
    if len(set(points)) != len(points):
        return False
    cap_mask = 0
    for P in points:
        cap_mask |= P.mask
    for P, R in itertools.combinations(points, 2):
        if (pg.span(P, R).mask & cap_mask).bit_count() != 2:
            return False
    return True


def construct_conic(F: Field) -> list:
    """{(1, t, t^2)} together with (0, 0, 1)."""
    pts = [pg.point(F, [1, t, F.mul(t, t)]) for t in range(F.order)]
    pts.append(pg.point(F, [0, 0, 1]))
    return sorted(pts)


def quadric_values(F: Field, coeffs, V):
    """Evaluate a quadratic form given by {(i, j): c} on the rows of V."""
    V = np.asarray(V, dtype=np.int64)
    out = np.zeros(V.shape[0], dtype=np.int64)
    for (i, j), c in coeffs.items():
        out = F.vadd(out, F.vmul(int(c), F.vmul(V[:, i], V[:, j])))
    return out


def elliptic_form(F: Field) -> dict:
    """x0 x1 + x2^2 + b x2 x3 + c x3^2 with t^2 + b t + c the smallest irreducible."""
    c, b, _ = smallest_irreducible(F, 2)
    form = {(0, 1): 1, (2, 2): 1, (3, 3): c}
    if b:
        form[(2, 3)] = b
    return form


def construct_elliptic_quadric(F: Field) -> list:
    whole = pg.whole(F, 4)
    V = la.decode(F, whole.codes, 4)
    vals = quadric_values(F, elliptic_form(F), V)
    return [pg.Subspace(F, 4, [v]) for v in V[vals == 0]]


# x^2, y^2, z^2, xy, xz, yz
MONOMIALS = [(0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2)]


def recognize_conic(points, F: Field):
    """Nondegenerate quadratic form vanishing on every point, or None.

    Coefficients are returned for x^2, y^2, z^2, xy, xz, yz, scaled so the
    first nonzero one is 1.
    """
    points = list(points)
    if len(points) < 5:
        raise TooFewPoints("need at least five points")
    V = np.array([P.rows[0] for P in points], dtype=np.int64)
    mons = MONOMIALS
    M = np.stack([F.vmul(V[:, i], V[:, j]) for i, j in mons], axis=1)
    ker = la.nullspace(F, M)
    if ker.shape[0] != 1:
        return None
    coeffs = la.normalize_rows(F, ker)[0]
    form = {m: int(c) for m, c in zip(mons, coeffs) if c}
    # nondegenerate iff the zero set is Q+1 points not on a line
    allv = la.decode(F, pg.whole(F, 3).codes, 3)
    zeros = allv[quadric_values(F, form, allv) == 0]
    if zeros.shape[0] != F.order + 1 or la.rank(F, zeros) < 3:
        return None
    return tuple(int(c) for c in coeffs)
