"""Pseudo-caps, eggs, goodness and elementarity.

A pseudo-cap lives in PG(2n+m-1, q): its elements are (n-1)-spaces, any
three spanning a (3n-1)-space.  Elements are referred to by their index
in the canonically sorted element tuple.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import caps
from . import linalg as la
from . import projective as pg
from . import spread as sp
from .errors import (DimensionMismatch, GoodnessFails, GoodnessUndefined, HypothesisUnmet,
                     HypothesisViolated, OvalNotElementary, SizeBoundUnmet,
                     TooFewCoplanarElements, ValidationError)
from .galois import FieldTower
from .projective import Subspace


# ---------------------------------------------------------------- container

@dataclass(frozen=True)
class PseudoCap:
    n: int
    m: int
    tower: FieldTower
    elements: tuple
    _cache: dict = dc_field(default_factory=dict, compare=False, repr=False)

    @property
    def field(self):
        return self.tower.base

    @property
    def q(self):
        return self.tower.q

    @property
    def ambient(self):
        return 2 * self.n + self.m

    def __len__(self):
        return len(self.elements)

    def index(self, E) -> int:
        if isinstance(E, (int, np.integer)):
            if not 0 <= int(E) < len(self.elements):
                raise ValidationError(f"element index {E} out of range")
            return int(E)
        try:
            return self.elements.index(E)
        except ValueError:
            raise ValidationError("subspace is not an element of the cap") from None

    @property
    def masks(self):
        if "masks" not in self._cache:
            self._cache["masks"] = [X.mask for X in self.elements]
        return self._cache["masks"]

    def elements_in(self, U: Subspace) -> list:
        Um = U.mask
        return [i for i, mk in enumerate(self.masks) if mk & ~Um == 0]

    def to_dict(self):
        return {"n": self.n, "m": self.m, "field": self.tower.to_dict(),
                "elements": [X.to_dict() for X in self.elements]}


def make_cap(tower: FieldTower, n: int, m: int, elements) -> PseudoCap:
    if tower.n != n:
        raise DimensionMismatch("tower extension degree must equal n")
    r = 2 * n + m
    elements = tuple(sorted(set(elements)))
    for X in elements:
        if X.ambient != r or X.dim != n or X.field != tower.base:
            raise DimensionMismatch(f"element {X} is not an (n-1)-space of PG({r - 1},q)")
    return PseudoCap(n, m, tower, elements)


def cap_from_dict(d) -> PseudoCap:
    tower = FieldTower.from_dict(d["field"])
    elements = [pg.from_dict(tower.base, x) for x in d["elements"]]
    if elements != sorted(set(elements)):
        raise ValidationError("elements are not sorted canonically or contain duplicates")
    return make_cap(tower, int(d["n"]), int(d["m"]), elements)


def field_reduce_cap(points, tower: FieldTower) -> PseudoCap:
    """Field reduction of a point cap of PG(k-1, q^n)."""
    points = list(points)
    k = points[0].ambient
    n = tower.n
    elements = [sp.field_reduce_point(P.rows[0], tower) for P in points]
    return make_cap(tower, n, (k - 2) * n, elements)


def pseudo_conic(n: int, q: int) -> PseudoCap:
    from .galois import tower_for
    tower = tower_for(q, n)
    return field_reduce_cap(caps.construct_conic(tower.ext), tower)


def classical_pseudo_ovoid(n: int, q: int) -> PseudoCap:
    from .galois import tower_for
    tower = tower_for(q, n)
    return field_reduce_cap(caps.construct_elliptic_quadric(tower.ext), tower)


def subcap(cap: PseudoCap, indices) -> PseudoCap:
    return make_cap(cap.tower, cap.n, cap.m, [cap.elements[i] for i in indices])


def corrupt(cap: PseudoCap, index: int, seed: int = 0) -> PseudoCap:
    """Replace one element by a seeded random (n-1)-space not already in the cap."""
    rng = np.random.default_rng(seed)
    F, r, n = cap.field, cap.ambient, cap.n
    while True:
        X = pg.subspace(F, rng.integers(0, F.order, size=(n, r)), r)
        if X.dim == n and X not in cap.elements:
            break
    rest = [Y for i, Y in enumerate(cap.elements) if i != cap.index(index)]
    return make_cap(cap.tower, n, cap.m, rest + [X])


# ---------------------------------------------------------------- parameters

@dataclass(frozen=True)
class Verdict:
    allowed: bool
    reason: str
    a: int | None = None


def parameter_check(n: int, m: int, q: int, require_good: bool = False) -> Verdict:
    """Necessary conditions on (n, m, q) for an egg, optionally a good one."""
    if n < 1 or m < 1:
        return Verdict(False, "n and m must be positive")
    if require_good:
        if m == n:
            return Verdict(False, "goodness needs m > n")
        if m % n:
            return Verdict(False, "n does not divide m")
    if m == n:
        return Verdict(True, "m = n")
    if m < n or n % (m - n):
        return Verdict(False, "no integer a with ma = n(a+1)")
    a = n // (m - n)
    if a % 2 == 0:
        return Verdict(False, f"a = {a} is even", a)
    if q % 2 == 0 and m != 2 * n:
        return Verdict(False, "q even forces m = n or m = 2n", a)
    return Verdict(True, f"ma = n(a+1) with a = {a}", a)


# ---------------------------------------------------------------- pseudo-cap tests

def is_pseudo_cap(cap: PseudoCap) -> bool:
    """Every pair spans a (2n-1)-space that no third element meets."""
    els, masks, n = cap.elements, cap.masks, cap.n
    for i, j in itertools.combinations(range(len(els)), 2):
        U = pg.span(els[i], els[j])
        if U.dim != 2 * n:
            return False
        Um = U.mask
        for k in range(j + 1, len(els)):
            if masks[k] & Um:
                return False
    return True


def is_weak_egg(cap: PseudoCap) -> bool:
    if "weak" not in cap._cache:
        cap._cache["weak"] = len(cap) == cap.q ** cap.m + 1 and is_pseudo_cap(cap)
    return cap._cache["weak"]


def induced_partial_spread(cap: PseudoCap, E, Sigma: Subspace | None = None) -> sp.PartialSpread:
    """Projection of the other elements from E.

    Without Sigma the result is in the quotient coordinates of E (its
    non-pivot columns); with Sigma it is in the frame coordinates of Sigma.
    """
    e = cap.index(E)
    E = cap.elements[e]
    others = [X for i, X in enumerate(cap.elements) if i != e]
    if Sigma is None:
        members = [pg.quotient(E, X) for X in others]
    else:
        members = [pg.restrict(pg.project_from(E, Sigma, X), Sigma) for X in others]
    return sp.partial_spread(cap.field, cap.n + cap.m, cap.n, members)


def induced_extension(cap: PseudoCap, E, seed: int = 0) -> sp.ExtensionResult:
    e = cap.index(E)
    key = ("ext", e)
    if key not in cap._cache:
        S = induced_partial_spread(cap, e)
        cap._cache[key] = sp.extends_to_desarguesian(S, m=cap.m, seed=seed)
    return cap._cache[key]


def hole_codes(cap: PseudoCap, E) -> list:
    """Quotient points missed by the induced partial spread at E."""
    S = induced_partial_spread(cap, E)
    holes = pg.whole(cap.field, S.ambient).mask & ~S.covered
    return pg.mask_to_codes(holes)


def tangent_space_at(cap: PseudoCap, E) -> Subspace | None:
    e = cap.index(E)
    E = cap.elements[e]
    r = cap.n + cap.m
    codes = hole_codes(cap, e)
    if not codes:
        return None
    H = pg.subspace(cap.field, la.decode(cap.field, codes, r), r)
    if H.dim != cap.m or len(H.codes) != len(codes):
        return None
    return pg.from_quotient(E, H)


@dataclass(frozen=True)
class EggCertificate:
    tangents: tuple

    def to_dict(self):
        return {"tangents": [T.to_dict() for T in self.tangents]}


def check_egg(cap: PseudoCap):
    """(certificate, None) on success, else (None, index of the first failing element)."""
    if "egg" in cap._cache:
        return cap._cache["egg"]
    result = None
    if not is_weak_egg(cap):
        result = (None, None)
    else:
        tangents = []
        for i, E in enumerate(cap.elements):
            T = tangent_space_at(cap, i)
            if T is None or cap.elements_in(T) != [i] or \
                    any(T.mask & mk for j, mk in enumerate(cap.masks) if j != i):
                result = (None, i)
                break
            tangents.append(T)
        if result is None:
            result = (EggCertificate(tuple(tangents)), None)
    cap._cache["egg"] = result
    return result


def is_egg(cap: PseudoCap) -> EggCertificate | None:
    return check_egg(cap)[0]


# ---------------------------------------------------------------- goodness

@dataclass(frozen=True)
class GoodnessReport:
    element: int
    good: bool
    section_counts: tuple
    sections: tuple = dc_field(repr=False)


def is_good_at(cap: PseudoCap, E) -> GoodnessReport:
    """Bucket the other elements by the (3n-1)-space they span with E and one more."""
    if cap.m == cap.n:
        raise GoodnessUndefined("goodness is only defined for m > n")
    e = cap.index(E)
    key = ("good", e)
    if key in cap._cache:
        return cap._cache[key]
    els = cap.elements
    others = [i for i in range(len(els)) if i != e]
    done = set()
    sections = []
    for i, j in itertools.combinations(others, 2):
        if (i, j) in done:
            continue
        inside = cap.elements_in(pg.span(els[e], els[i], els[j]))
        done.update(itertools.combinations([t for t in inside if t != e], 2))
        sections.append(tuple(inside))
    target = cap.q ** cap.n + 1
    counts = tuple(sorted(len(s) for s in sections))
    rep = GoodnessReport(e, all(c == target for c in counts), counts, tuple(sections))
    cap._cache[key] = rep
    return rep


def good_via_spread(cap: PseudoCap, E, seed: int = 0) -> sp.DesarguesianWitness | None:
    """Witness of a Desarguesian extension of the induced partial spread at E."""
    if not is_weak_egg(cap):
        raise HypothesisUnmet("input is not a weak egg")
    if cap.q % 2 == 0 and is_egg(cap) is None:
        raise HypothesisUnmet("q even needs an egg certificate")
    return induced_extension(cap, E, seed=seed).witness


def pseudo_oval_is_elementary(cap: PseudoCap, indices, mode: str = "spread") -> bool:
    """Does the pseudo-oval lie in a Desarguesian spread of its span?

    ``mode="conic"`` additionally requires the collapsed arc to lie on a
    nondegenerate conic of PG(2, q^n).
    """
    els = [cap.elements[i] for i in indices]
    W, _ = sp.find_witness(cap.field, cap.n, els)
    if W is None:
        return False
    if mode == "conic":
        frame = sp.ExtensionFrame(W, cap.tower)
        pts = [frame.collapse_member(X) for X in els]
        return caps.recognize_conic(pts, cap.tower.ext) is not None
    return True


def check_pseudo_conic_corollary(cap: PseudoCap, E) -> dict:
    """For a good element: is every pseudo-oval through E a pseudo-conic?"""
    rep = is_good_at(cap, E)
    return {s: pseudo_oval_is_elementary(cap, s, mode="conic") for s in rep.sections}


# ---------------------------------------------------------------- elementarity

def largest_proper_divisor(n: int) -> int:
    return max((d for d in range(1, n) if n % d == 0), default=0)


def size_bound(n: int, q: int) -> int:
    k = largest_proper_divisor(n)
    if q % 2:
        return q ** (n + k) + q ** n - q ** k + 1
    return q ** (n + k) + q ** n + 2


@dataclass(frozen=True)
class ElementarityResult:
    status: str                     # "elementary", "not-elementary" or "unknown"
    witness: sp.DesarguesianWitness | None
    collapsed: tuple | None
    reason: str
    size_bound_met: bool
    evidence: dict = dc_field(default_factory=dict)

    @property
    def elementary(self):
        return self.status == "elementary"


def _projection_matrix(E: Subspace, Sigma: Subspace):
    """Quotient coordinates of E -> frame coordinates of Sigma, along E."""
    F = E.field
    free = [c for c in range(E.ambient) if c not in E.pivots]
    units = np.zeros((len(free), E.ambient), dtype=np.int64)
    for i, c in enumerate(free):
        units[i, c] = 1
    coeffs = la.solve_rows(F, np.vstack([E.array, Sigma.array]), units)
    return coeffs[:, E.dim:]


def transport_witness(W: sp.DesarguesianWitness, E: Subspace, Sigma: Subspace):
    """Move a witness in the quotient coordinates of E onto the complement Sigma."""
    F = W.field
    if W.frame.dim != W.frame.ambient:
        raise HypothesisViolated("witness must cover the whole quotient")
    P = _projection_matrix(E, Sigma)
    J = la.matmul(F, la.matmul(F, la.inverse(F, P), W.J), P)
    return sp.DesarguesianWitness(F, W.n, J, Sigma)


def embed_witness(W: sp.DesarguesianWitness, Pi: Subspace):
    """Witness given in frame coordinates of Pi -> witness on the ambient."""
    return sp.DesarguesianWitness(W.field, W.n, W.J, pg.lift(W.frame, Pi))


def collapse(cap: PseudoCap, W: sp.DesarguesianWitness) -> tuple:
    frame = sp.ExtensionFrame(W, cap.tower)
    return tuple(sorted(frame.collapse_member(X) for X in cap.elements))


def is_elementary(cap: PseudoCap, seed: int = 0) -> ElementarityResult:
    """Procedure of the two-extendable-elements theorem for PG(4n-1, q)."""
    n, m, q = cap.n, cap.m, cap.q
    if m != 2 * n:
        raise HypothesisViolated("elementarity procedure needs ambient PG(4n-1,q)")
    bound = size_bound(n, q)
    met = len(cap) > bound
    if not met:
        warnings.warn(f"|cap| = {len(cap)} does not exceed {bound}", SizeBoundUnmet)

    def unknown(reason, **ev):
        return ElementarityResult("unknown", None, None, reason, met, ev)

    els = cap.elements
    if len(els) < 4:
        return unknown("fewer than four elements")
    extendable = []
    for i in range(len(els)):
        r = induced_extension(cap, i, seed=seed)
        if r.status == "no":
            return ElementarityResult("not-elementary", None, None,
                                      f"element {i} induces a non-extendable partial spread",
                                      met, {"element": i})
        if r.extends:
            extendable.append(i)
            if len(extendable) == 2:
                break
    if len(extendable) < 2:
        return unknown("no extendable pair")
    e1, e2 = extendable
    E1, E2 = els[e1], els[e2]
    L12 = pg.span(E1, E2)
    pair = None
    for a, b in itertools.combinations([i for i in range(len(els)) if i not in (e1, e2)], 2):
        if pg.span(L12, els[a], els[b]).dim == 4 * n:
            pair = (a, b)
            break
    if pair is None:
        return unknown("no E3, E4 spanning the ambient", E1=e1, E2=e2)
    e3, e4 = pair
    E3, E4 = els[e3], els[e4]
    Sigma1 = pg.span(E2, E3, E4)
    Sigma2 = pg.span(E1, E3, E4)
    D1 = transport_witness(induced_extension(cap, e1).witness, E1, Sigma1)
    D2 = transport_witness(induced_extension(cap, e2).witness, E2, Sigma2)
    U34 = pg.span(E3, E4)
    D2_members = D2.members()
    S1 = {X for X in D1.members() if U34.contains_fast(X)}
    S2 = {X for X in D2_members if U34.contains_fast(X)}
    ev = {"E1": e1, "E2": e2, "E3": e3, "E4": e4}
    if S1 != S2:
        return unknown("restricted spreads on <E3,E4> differ", **ev)
    Y = next(X for X in D2_members if not U34.contains_fast(X) and X != E1)
    mu = pg.meet(pg.span(E1, Y), Sigma1)
    D, W = sp.unique_desarguesian_extension(D1, mu, E1, Y)
    if not all(W.contains(X) for X in D2_members):
        return unknown("extension does not contain D2", **ev)
    missing = [i for i, X in enumerate(els) if not W.contains(X)]
    if missing:
        return unknown(f"element {missing[0]} is not in the extended spread", **ev)
    return ElementarityResult("elementary", W, collapse(cap, W), "all elements contained", met, ev)


@dataclass(frozen=True)
class FiveElementResult:
    witness: sp.DesarguesianWitness | None
    contained: bool
    trace: dict


def elementarity_via_good_element(cap: PseudoCap, E, Pi: Subspace,
                                  oval_mode: str = "spread", seed: int = 0) -> FiveElementResult:
    """Procedure of the five-coplanar-elements theorem."""
    n, q = cap.n, cap.q
    if n <= 1 or q ** n <= 4:
        raise HypothesisUnmet("needs n > 1 and q^n > 4")
    if cap.m != 2 * n:
        raise HypothesisViolated("needs ambient PG(4n-1,q)")
    e = cap.index(E)
    els = cap.elements
    E = els[e]
    if Pi.dim != 3 * n or not Pi.is_disjoint(E):
        raise HypothesisViolated("Pi must be a (3n-1)-space disjoint from E")
    in_pi = cap.elements_in(Pi)
    if len(in_pi) < 5:
        raise TooFewCoplanarElements(f"Pi contains only {len(in_pi)} elements")
    rep = is_good_at(cap, e)
    if not rep.good:
        raise GoodnessFails(f"not good at element {e}")
    e1, e2, e3, e4, e5 = in_pi[:5]
    sections = [set(s) for s in rep.sections]

    def section_with(*idx):
        return next(s for s in sections if all(i in s for i in idx))

    for i in (e1, e2, e3):
        for s in sections:
            if i in s and not pseudo_oval_is_elementary(cap, sorted(s), oval_mode):
                raise OvalNotElementary(f"pseudo-oval {sorted(s)} is not elementary", oval=sorted(s))

    r = sp.extends_to_desarguesian(induced_partial_spread(cap, e, Sigma=Pi), m=cap.m, seed=seed)
    if not r.extends:
        raise HypothesisViolated("induced partial spread in Pi does not extend")
    D0 = embed_witness(r.witness, Pi)
    T = tangent_space_at(cap, e)
    if T is None:
        raise HypothesisViolated("no tangent space at E")

    L15 = pg.span(els[e1], els[e5])
    Fs = pg.meet(L15, pg.span(els[e2], els[e4]))
    if T.contains_fast(Fs):
        e2, e3 = e3, e2
        Fs = pg.meet(L15, pg.span(els[e2], els[e4]))
        if T.contains_fast(Fs):
            raise HypothesisViolated("both F and F' lie in the tangent space")
    EF = pg.span(E, Fs)
    e6 = next(i for i in cap.elements_in(EF) if i != e)
    D, W = sp.unique_desarguesian_extension(D0, Fs, E, els[e6])
    trace = {"E": e, "E1": e1, "E2": e2, "E3": e3, "E4": e4, "E5": e5, "E6": e6, "steps": []}

    def inside(idx):
        return all(W.contains(els[i]) for i in idx)

    def step(name, oval, **extra):
        ok = inside(oval)
        trace["steps"].append(dict(extra, name=name, oval=sorted(oval), contained=ok))
        return ok

    O1, O2 = section_with(e, e1, e5), section_with(e, e2, e4)
    okay = step("O1", O1) and step("O2", O2)
    T1 = pg.meet(T, pg.span([els[i] for i in O1]))
    T2 = pg.meet(T, pg.span([els[i] for i in O2]))
    covered = O1 | O2
    ovals3 = []
    for s in sections:
        if e3 not in s or e6 in s:
            continue
        U = pg.span([els[i] for i in s])
        if U.contains_fast(T1) or U.contains_fast(T2):
            continue
        ovals3.append(s)
        e7 = min(s & O1 - {e})
        e8 = min(s & O2 - {e})
        okay = okay and step("O", s, E7=e7, E8=e8)
        covered |= s
    trace["ovals_through_E3"] = len(ovals3)
    for e9 in range(len(els)):
        if e9 in covered or not okay:
            continue
        Op = section_with(e, e1, e9)
        if e3 in Op:
            Op = section_with(e, e2, e9)
        meets = [s for s in ovals3 if (s & Op) - {e}]
        if len(meets) < 2:
            okay = False
            trace["steps"].append({"name": "O'", "E9": e9, "contained": False,
                                   "reason": "fewer than two ovals through E3 meet it"})
            break
        e10 = min((meets[0] & Op) - {e})
        e11 = min((meets[1] & Op) - {e})
        okay = okay and step("O'", Op, E9=e9, E10=e10, E11=e11)
        covered |= Op
    contained = okay and inside(range(len(els)))
    return FiveElementResult(W if contained else None, contained, trace)
