"""Partial spreads, reguli and Desarguesian spreads.

A Desarguesian spread is certified by a matrix J whose minimal polynomial
is irreducible of degree n: the module GF(q)[J] is then a copy of GF(q^n)
and the spread members are exactly the J-cyclic subspaces.  Deciding
whether a set of subspaces sits inside such a spread reduces to finding
such a J in the algebra of matrices stabilising every member, which is a
linear problem.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import linalg as la
from . import projective as pg
from .errors import (HolesNotASubspace, HypothesisViolated, NotASpread, NotDisjoint,
                     ValidationError, WrongDimension)
from .galois import Field, FieldTower, is_irreducible, poly_eval
from .projective import Subspace

EXHAUSTIVE_LIMIT = 2 ** 14
DEFAULT_SAMPLES = 2000


# ---------------------------------------------------------------- containers

@dataclass(frozen=True)
class PartialSpread:
    field: Field
    ambient: int
    n: int
    members: tuple

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, X):
        return X in self._index

    @property
    def _index(self):
        idx = self.__dict__.get("_idx")
        if idx is None:
            idx = frozenset(self.members)
            object.__setattr__(self, "_idx", idx)
        return idx

    @property
    def covered(self) -> int:
        m = 0
        for X in self.members:
            m |= X.mask
        return m

    @property
    def is_full(self) -> bool:
        q = self.field.order
        return self.ambient % self.n == 0 and \
            len(self.members) == (q ** self.ambient - 1) // (q ** self.n - 1)

    def to_dict(self):
        return {"ambient": self.ambient, "n": self.n,
                "members": [X.to_dict() for X in self.members]}


def partial_spread(field: Field, ambient: int, n: int, members, check=True) -> PartialSpread:
    members = tuple(sorted(set(members)))
    if check:
        total = 0
        union = 0
        for X in members:
            if X.ambient != ambient or X.dim != n:
                raise WrongDimension(f"member {X} is not an (n-1)-space of the ambient")
            total += X.num_points
            union |= X.mask
        if union.bit_count() != total:
            raise NotDisjoint("members are not pairwise disjoint")
    return PartialSpread(field, ambient, n, members)


def partial_spread_from_dict(field: Field, d) -> PartialSpread:
    members = [pg.from_dict(field, x) for x in d["members"]]
    return partial_spread(field, int(d["ambient"]), int(d["n"]), members)


def is_spread(S: PartialSpread) -> bool:
    return S.is_full and S.covered.bit_count() == pg.whole(S.field, S.ambient).num_points


def _require_spread(S: PartialSpread):
    if not is_spread(S):
        raise NotASpread("members do not partition the points")


# ---------------------------------------------------------------- witness

@dataclass(frozen=True)
class DesarguesianWitness:
    """J acts on coordinates relative to the RREF basis of ``frame``."""

    field: Field
    n: int
    J: np.ndarray = dc_field(compare=False)
    frame: Subspace = None

    def __post_init__(self):
        if self.frame is None:
            object.__setattr__(self, "frame", pg.whole(self.field, self.J.shape[0]))
        if self.frame.dim != self.J.shape[0]:
            raise WrongDimension("witness matrix does not match its frame")

    @property
    def ambient(self):
        return self.frame.ambient

    @property
    def minimal_polynomial(self):
        return la.minimal_polynomial(self.field, self.J)

    def is_valid(self) -> bool:
        f = la.minimal_polynomial(self.field, self.J, max_degree=self.n)
        return (f is not None and len(f) == self.n + 1 and f[0] != 0
                and is_irreducible(self.field, f) and self.frame.dim % self.n == 0)

    def local_member(self, c) -> np.ndarray:
        """Krylov rows c, cJ, ..., cJ^(n-1) in frame coordinates."""
        rows = [np.asarray(c, dtype=np.int64).reshape(1, -1)]
        for _ in range(self.n - 1):
            rows.append(la.matmul(self.field, rows[-1], self.J))
        return np.vstack(rows)

    def member_through(self, v) -> Subspace:
        """The member containing the ambient vector v (which must lie in the frame)."""
        v = np.asarray(v, dtype=np.int64).reshape(1, -1)
        c = v[:, list(self.frame.pivots)]
        rows = la.matmul(self.field, self.local_member(c), self.frame.array)
        return pg.subspace(self.field, rows, self.ambient)

    def contains(self, X: Subspace) -> bool:
        if X.dim != self.n or not self.frame.contains_fast(X):
            return False
        return self.member_through(X.array[0]) == X

    def members(self) -> list:
        F, d = self.field, self.frame.dim
        size = F.order ** d
        covered = np.zeros(size, dtype=bool)
        local = []
        for code in pg.whole(F, d).codes:
            if covered[code]:
                continue
            c = la.decode(F, [int(code)], d)
            M = pg.subspace(F, self.local_member(c), d)
            covered[M.codes] = True
            local.append(M)
        return [pg.lift(M, self.frame) for M in local]

    def spread(self) -> PartialSpread:
        return partial_spread(self.field, self.ambient, self.n, self.members(), check=False)

    def to_dict(self):
        return {"n": self.n, "J": self.J.tolist(), "frame": self.frame.to_dict()}


def witness_from_dict(field: Field, d) -> DesarguesianWitness:
    J = np.array(d["J"], dtype=np.int64)
    frame = pg.from_dict(field, d["frame"])
    W = DesarguesianWitness(field, int(d["n"]), J, frame)
    if not W.is_valid():
        raise ValidationError("witness matrix does not have an irreducible degree-n minimal polynomial")
    return W


# ---------------------------------------------------------------- field reduction

def field_reduce_vectors(tower: FieldTower, coords) -> np.ndarray:
    """Rows alpha * (x_1..x_k) for alpha = 1, x, ..., x^(n-1), expanded over GF(q)."""
    E = tower.ext
    rows = []
    scal = [int(c) for c in coords]
    for _ in range(tower.n):
        rows.append([c for a in scal for c in tower.ext_to_vector(a)])
        if tower.n > 1:
            scal = [E.mul(_x_code(tower), a) for a in scal]
    return np.array(rows, dtype=np.int64)


def _x_code(tower: FieldTower) -> int:
    # the element x has coefficient vector (0, 1, 0, ...)
    return tower.q


def field_reduce_point(coords, tower: FieldTower) -> Subspace:
    if not any(int(c) for c in coords):
        raise ValidationError("the zero vector is not a projective point")
    k = len(coords)
    return pg.subspace(tower.base, field_reduce_vectors(tower, coords), k * tower.n)


def canonical_witness(k: int, tower: FieldTower) -> DesarguesianWitness:
    if tower.n == 1:
        J = la.identity(k)
    else:
        J = la.block_diag(*([tower.ext_basis_matrix] * k))
    return DesarguesianWitness(tower.base, tower.n, J)


def desarguesian_spread(k: int, tower: FieldTower):
    """Field reduction of every point of PG(k-1, q^n); returns (spread, witness)."""
    if k < 1:
        raise WrongDimension("k must be at least 1")
    ext_points = pg.points_of(pg.whole(tower.ext, k))
    members = [field_reduce_point(P.rows[0], tower) for P in ext_points]
    S = partial_spread(tower.base, k * tower.n, tower.n, members, check=False)
    return S, canonical_witness(k, tower)


# ---------------------------------------------------------------- combinatorial tests

def is_normal(S: PartialSpread) -> bool:
    """Every span of two members is a union of members."""
    _require_spread(S)
    if S.ambient <= 2 * S.n:
        return True
    members = list(S.members)
    masks = [X.mask for X in members]
    done = set()
    for i, j in itertools.combinations(range(len(members)), 2):
        if (i, j) in done:
            continue
        U = pg.span(members[i], members[j]).mask
        inside = []
        for t, mk in enumerate(masks):
            hit = mk & U
            if hit:
                if hit != mk:
                    return False
                inside.append(t)
        for a, b in itertools.combinations(inside, 2):
            done.add((a, b))
    return True


def regulus(A: Subspace, B: Subspace, C: Subspace) -> list:
    """The q+1 members of the regulus through three disjoint (n-1)-spaces of a (2n-1)-space."""
    F, n = A.field, A.dim
    if not (B.dim == n and C.dim == n):
        raise WrongDimension("regulus arguments must have equal dimension")
    for X, Y in ((A, B), (A, C), (B, C)):
        if not X.is_disjoint(Y):
            raise NotDisjoint("regulus arguments must be pairwise disjoint")
    U = pg.span(A, B)
    if not U.contains_fast(C):
        raise WrongDimension("the three arguments do not lie in a common (2n-1)-space")
    P = np.vstack([A.array, B.array])
    piv = list(U.pivots)
    coords = la.matmul(F, C.array[:, piv], la.inverse(F, P[:, piv]))
    X, Y = coords[:, :n], coords[:, n:]
    M = la.matmul(F, la.inverse(F, X), Y)
    out = [B]
    for lam in range(F.order):
        rows = np.concatenate([la.identity(n), la.scale(F, lam, M)], axis=1)
        out.append(pg.subspace(F, la.matmul(F, rows, P), A.ambient))
    return sorted(out)


def is_regular(S: PartialSpread) -> bool:
    """Closed under reguli through any three members (spreads of PG(2n-1,q))."""
    members = list(S.members)
    seen = set()
    for a, b, c in itertools.combinations(range(len(members)), 3):
        if (a, b, c) in seen:
            continue
        R = regulus(members[a], members[b], members[c])
        if any(X not in S for X in R):
            return False
        idx = sorted(members.index(X) for X in R)
        seen.update(itertools.combinations(idx, 3))
    return True


def extend_deficiency_one(S: PartialSpread, within: Subspace | None = None) -> Subspace:
    """The hole space of a partial spread of size q^n in a (2n-1)-space."""
    F, n = S.field, S.n
    if within is None:
        within = pg.whole(F, S.ambient)
    if within.dim != 2 * n or len(S) != F.order ** n:
        raise WrongDimension("need q^n members inside a (2n-1)-space")
    holes = within.mask & ~S.covered
    codes = pg.mask_to_codes(holes)
    if not codes:
        raise HolesNotASubspace("no uncovered points")
    H = pg.subspace(F, la.decode(F, codes, S.ambient), S.ambient)
    if H.dim != n or H.mask != holes:
        raise HolesNotASubspace(f"{len(codes)} uncovered points do not form an (n-1)-space")
    return H


@dataclass(frozen=True)
class IntersectionClass:
    shared_count: int
    classified_t: int | None
    lemma_applies: bool


def intersect_spreads(S1: PartialSpread, S2: PartialSpread) -> IntersectionClass:
    shared = len(set(S1.members) & set(S2.members))
    q, n = S1.field.order, S1.n
    applies = shared >= 3 and q > 2
    t = None
    if applies:
        for d in range(1, n + 1):
            if n % d == 0 and shared == q ** d + 1:
                t = d
    return IntersectionClass(shared, t, applies)


def apply_collineation(S: PartialSpread, g, witness: DesarguesianWitness | None = None):
    F = S.field
    g = la.asarray(g)
    members = [pg.apply_matrix(X, g) for X in S.members]
    T = partial_spread(F, S.ambient, S.n, members, check=False)
    if witness is None:
        return T
    if witness.frame.dim != S.ambient:
        raise WrongDimension("collineation of framed witnesses is not supported")
    J = la.matmul(F, la.matmul(F, la.inverse(F, g), witness.J), g)
    return T, DesarguesianWitness(F, witness.n, J)


# ---------------------------------------------------------------- stabiliser algebra

def stabiliser_algebra(field: Field, members, frame: Subspace) -> list:
    """Basis of {A : W A is contained in W for every member W}, in frame coordinates."""
    F, d = field, frame.dim
    piv = list(frame.pivots)
    acc = np.zeros((0, d * d), dtype=np.int64)
    chunk = []
    for W in members:
        Wl = W.array[:, piv]
        Z = la.nullspace(F, Wl)
        if Z.shape[0] == 0:
            continue
        # equation rows kron(w, z): sum_ab w_a z_b A_ab = 0
        rows = F.vmul(Wl[:, None, :, None], Z[None, :, None, :]).reshape(-1, d * d)
        chunk.append(rows)
        if sum(c.shape[0] for c in chunk) >= 4 * d * d:
            acc, _ = la.rref(F, np.vstack([acc] + chunk))
            chunk = []
            if acc.shape[0] >= d * d - 1:
                break
    if chunk:
        acc, _ = la.rref(F, np.vstack([acc] + chunk))
    basis = la.nullspace(F, acc, d * d)
    return [b.reshape(d, d) for b in basis]


def _is_field_generator(F: Field, A, n: int) -> bool:
    f = la.minimal_polynomial(F, A, max_degree=n)
    return f is not None and len(f) == n + 1 and f[0] != 0 and is_irreducible(F, f)


def find_witness(field: Field, n: int, members, seed: int = 0,
                 exhaustive_limit: int = EXHAUSTIVE_LIMIT, samples: int = DEFAULT_SAMPLES):
    """Search the stabiliser algebra for a field generator.

    Returns (witness or None, exhaustive).  When ``exhaustive`` is True a
    None answer is definitive: no Desarguesian spread of span(members)
    contains every member.
    """
    members = list(members)
    frame = pg.span(members)
    if frame.dim % n:
        return None, True
    if n == 1:
        return DesarguesianWitness(field, 1, la.identity(frame.dim), frame), True
    basis = stabiliser_algebra(field, members, frame)
    t = len(basis)
    if t < n:
        return None, True
    stack = np.stack(basis)
    q = field.order

    def combine(coeffs):
        out = np.zeros_like(basis[0])
        for c, B in zip(coeffs, basis):
            if c:
                out = field.vadd(out, field.vmul(int(c), B))
        return out

    if q ** t <= exhaustive_limit:
        candidates = itertools.product(range(q), repeat=t)
        exhaustive = True
    else:
        rng = np.random.default_rng(seed)
        candidates = (rng.integers(0, q, size=t) for _ in range(samples))
        exhaustive = False
    del stack
    for coeffs in candidates:
        if not any(coeffs):
            continue
        A = combine(coeffs)
        if _is_field_generator(field, A, n):
            W = DesarguesianWitness(field, n, A, frame)
            if all(W.contains(X) for X in members):
                return W, exhaustive
    return None, exhaustive


def is_desarguesian(S: PartialSpread, seed: int = 0):
    """Witness when the spread is Desarguesian, else None."""
    _require_spread(S)
    k = S.ambient // S.n
    if k > 2 and not is_normal(S):
        return None
    if k == 2 and S.field.order > 2 and not is_regular(S):
        return None
    W, _ = find_witness(S.field, S.n, S.members, seed=seed)
    return W


# ---------------------------------------------------------------- unique extension

def _frame_coords(U: Subspace, v):
    return np.asarray(v, dtype=np.int64).reshape(-1, U.ambient)[:, list(U.pivots)]


def unique_desarguesian_extension(D1: DesarguesianWitness, mu: Subspace,
                                  E1: Subspace, E2: Subspace, verify: bool = True):
    """Desarguesian spread of span(Pi, E1) containing D1, E1 and E2.

    ``D1`` is a witness on the frame Pi.  E2 is the graph of a bijection
    psi from mu to E1, read off the transversal line through each basis
    point of mu; the witness extends by transporting J|mu to E1 along psi.
    """
    F, n = D1.field, D1.n
    Pi = D1.frame
    if E1.dim != n or E2.dim != n:
        raise WrongDimension("E1 and E2 must be (n-1)-spaces")
    if not E1.is_disjoint(E2):
        raise NotDisjoint("E1 and E2 meet")
    if not (E1.is_disjoint(Pi) and E2.is_disjoint(Pi)):
        raise HypothesisViolated("E1 or E2 meets the frame of D1")
    L = pg.span(E1, E2)
    if pg.meet(L, Pi) != mu or not D1.contains(mu):
        raise HypothesisViolated("span(E1,E2) does not meet the frame in a member of D1")
    big = pg.span(Pi, E1)
    if not big.contains_fast(E2):
        raise HypothesisViolated("E2 does not lie in span(Pi, E1)")

    # psi(u_i) via the transversal line through u_i
    e_rows = []
    for u in mu.array:
        P = pg.Subspace(F, mu.ambient, [u])
        line = pg.meet(pg.span(P, E1), pg.span(P, E2))
        e = pg.meet(line, E1).array[0]
        f = pg.meet(line, E2).array[0]
        # f = a*u + b*e with b != 0; rescale so that u + e' lies on E2
        ab = la.solve_rows(F, np.vstack([u, e]), f.reshape(1, -1))[0]
        a, b = int(ab[0]), int(ab[1])
        e_rows.append(F.vmul(F.div(b, a), e))
    e_rows = np.array(e_rows, dtype=np.int64)

    # matrix of J1 on mu in the basis of mu's rows
    mu_local = _frame_coords(Pi, mu.array)
    muJ = la.matmul(F, la.matmul(F, mu_local, D1.J), Pi.array)
    K = la.solve_rows(F, mu.array, muJ)

    basis = np.vstack([Pi.array, e_rows])
    J_basis = la.block_diag(D1.J, K)
    Bf = _frame_coords(big, basis)
    J = la.matmul(F, la.matmul(F, la.inverse(F, Bf), J_basis), Bf)
    W = DesarguesianWitness(F, n, J, big)
    D = W.spread()
    if not (W.contains(E1) and W.contains(E2)):
        raise HypothesisViolated("extension lost E1 or E2")  # pragma: no cover
    if verify:
        _check_uniqueness(D, D1, Pi, E1, E2, L)
    return D, W


def _check_uniqueness(D, D1, Pi, E1, E2, L):
    # a member off span(E1,E2) is forced: it is <E1,X> meet <E2,Y> with X, Y in D1
    for M in D.members:
        if L.contains_fast(M):
            continue
        X = pg.meet(pg.span(E1, M), Pi)
        Y = pg.meet(pg.span(E2, M), Pi)
        if not (D1.contains(X) and D1.contains(Y)):
            raise HypothesisViolated("projection of a member is not in D1")
        if pg.meet(pg.span(E1, X), pg.span(E2, Y)) != M:
            raise HypothesisViolated("member is not determined by D1, E1, E2")


# ---------------------------------------------------------------- extension of partial spreads

@dataclass(frozen=True)
class ExtensionResult:
    status: str            # "extends", "no" or "unknown"
    spread: PartialSpread | None
    witness: DesarguesianWitness | None
    method: str

    @property
    def extends(self):
        return self.status == "extends"


def close_holes(S: PartialSpread):
    """Add the hole space of every pair span holding exactly q^n members.

    Returns the set of hole spaces; raises HolesNotASubspace if one of
    those spans has scattered holes.
    """
    F, n = S.field, S.n
    members = list(S.members)
    masks = [X.mask for X in members]
    target = F.order ** n
    done = set()
    holes = set()
    for i, j in itertools.combinations(range(len(members)), 2):
        if (i, j) in done:
            continue
        U = pg.span(members[i], members[j])
        Um = U.mask
        inside = [t for t, mk in enumerate(masks) if mk & ~Um == 0]
        done.update(itertools.combinations(inside, 2))
        if len(inside) == target:
            sub = PartialSpread(F, S.ambient, n, tuple(members[t] for t in inside))
            holes.add(extend_deficiency_one(sub, within=U))
    return holes


def extends_to_desarguesian(S: PartialSpread, m: int | None = None, seed: int = 0) -> ExtensionResult:
    F, n = S.field, S.n
    if m is None:
        m = S.ambient - n
    if len(S) < 3:
        raise HypothesisViolated("need at least three members")
    if S.ambient % n:
        return ExtensionResult("no", None, None, "dimension")
    if len(S) == F.order ** m:
        try:
            holes = close_holes(S)
        except HolesNotASubspace:
            holes = None
        if holes is not None:
            allm = set(S.members) | holes
            try:
                T = partial_spread(F, S.ambient, n, allm)
            except NotDisjoint:
                T = None
            if T is not None and is_spread(T):
                W = is_desarguesian(T, seed=seed)
                if W is not None:
                    return ExtensionResult("extends", T, W, "hole-closure")
    if pg.span(list(S.members)).dim != S.ambient:
        return ExtensionResult("unknown", None, None, "members do not span")
    W, exhaustive = find_witness(F, n, S.members, seed=seed)
    if W is None:
        return ExtensionResult("no" if exhaustive else "unknown", None, None, "stabiliser-algebra")
    return ExtensionResult("extends", W.spread(), W, "stabiliser-algebra")


# ---------------------------------------------------------------- GF(q^n) coordinates

class ExtensionFrame:
    """Coordinates over GF(q^n) for the frame of a witness.

    The frame is split into J-cyclic blocks b_i, b_i J, ..., b_i J^(n-1);
    a vector sum c_ij b_i J^j maps to (sum_j c_ij beta^j)_i, with beta a
    root of the minimal polynomial of J in GF(q^n).  Multiplication by J
    becomes multiplication by beta, so members map to points.
    """

    def __init__(self, witness: DesarguesianWitness, tower: FieldTower):
        F, n = witness.field, witness.n
        if tower.base != F or tower.n != n:
            raise ValidationError("tower does not match the witness field and degree")
        self.witness, self.tower = witness, tower
        self.k = witness.frame.dim // n
        d = witness.frame.dim
        rows = np.zeros((0, d), dtype=np.int64)
        for e in range(d):
            if rows.shape[0] == d:
                break
            unit = np.zeros((1, d), dtype=np.int64)
            unit[0, e] = 1
            trial = np.vstack([rows, unit])
            if la.rank(F, trial) > rows.shape[0]:
                rows = np.vstack([rows, witness.local_member(unit)])
        self.basis = rows                      # d x d, block i = rows i*n..i*n+n-1
        self.basis_inv = la.inverse(F, rows)
        f = witness.minimal_polynomial
        E = tower.ext
        self.beta = next(b for b in range(1, E.order) if poly_eval(E, f, b) == 0)
        powers = [1]
        for _ in range(n - 1):
            powers.append(E.mul(powers[-1], self.beta))
        self.beta_powers = powers
        P = np.array([tower.ext_to_vector(b) for b in powers], dtype=np.int64)
        self.beta_matrix_inv = la.inverse(F, P)
        self.beta_matrix = P

    def collapse_vector(self, v) -> tuple:
        """Ambient vector in the frame -> GF(q^n)^k coordinates."""
        F, E, n = self.witness.field, self.tower.ext, self.witness.n
        c = la.matmul(F, _frame_coords(self.witness.frame, v), self.basis_inv)[0]
        out = []
        for i in range(self.k):
            ci = c[i * n:(i + 1) * n].reshape(1, -1)
            out.append(self.tower.vector_to_ext(la.matmul(F, ci, self.beta_matrix)[0]))
        return tuple(out)

    def collapse_member(self, X: Subspace) -> Subspace:
        coords = self.collapse_vector(X.array[0])
        return pg.point(self.tower.ext, coords)

    def expand_point(self, P: Subspace) -> Subspace:
        """Point of PG(k-1, q^n) -> the member it corresponds to."""
        F, n = self.witness.field, self.witness.n
        alpha = P.rows[0]
        c = []
        for a in alpha:
            vec = np.array(self.tower.ext_to_vector(int(a)), dtype=np.int64).reshape(1, -1)
            c.extend(la.matmul(F, vec, self.beta_matrix_inv)[0])
        local = la.matmul(F, np.array([c], dtype=np.int64), self.basis)
        v = la.matmul(F, local, self.witness.frame.array)
        return self.witness.member_through(v[0])
