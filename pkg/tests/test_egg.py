import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from fingeo import caps
from fingeo import egg as eg
from fingeo import harness as hs
from fingeo import linalg as la
from fingeo import projective as pg
from fingeo import spread as sp
from fingeo.errors import (DimensionMismatch, GoodnessFails, GoodnessUndefined, HypothesisUnmet,
                           SizeBoundUnmet, TooFewCoplanarElements, TooFewPoints, ValidationError)
from fingeo.galois import make_tower, tower_for


def point_cap(q, n, m, points):
    return eg.make_cap(tower_for(q, n), n, m, points)


@pytest.fixture(scope="module")
def ovoid33():
    return point_cap(3, 1, 2, caps.construct_elliptic_quadric(make_tower(3).base))


@pytest.fixture(scope="module")
def ovoid32():
    return point_cap(2, 1, 2, caps.construct_elliptic_quadric(make_tower(2).base))


def affine_nine():
    """Nine affine points of PG(4,2): a weak egg with n=1, m=3 that is no egg."""
    F = make_tower(2).base
    pts = [pg.point(F, [int(b) for b in format(i, "04b")] + [1]) for i in range(9)]
    return point_cap(2, 1, 3, pts)


def oracle_pseudo_cap(cap):
    O = oracles.GF(cap.q)
    for A, B, C in itertools.combinations(cap.elements, 3):
        rows = [list(r) for r in A.rows + B.rows + C.rows]
        if oracles.rank(O, rows) != 3 * cap.n:
            return False
    return True


# ---------------------------------------------------------------- parameters

def test_parameter_examples():
    v = eg.parameter_check(2, 4, 2, require_good=True)
    assert v.allowed
    v = eg.parameter_check(2, 3, 3, require_good=True)
    assert not v.allowed and "divide" in v.reason
    v = eg.parameter_check(3, 4, 3)
    assert v.allowed and v.a == 3
    assert not eg.parameter_check(3, 4, 2).allowed
    assert not eg.parameter_check(2, 2, 3, require_good=True).allowed


@given(st.integers(1, 12), st.integers(1, 12), st.sampled_from([2, 3, 4, 5, 7, 8, 9]), st.booleans())
def test_parameter_check_matches_brute_force(n, m, q, good):
    assert eg.parameter_check(n, m, q, good).allowed == hs._parameter_oracle(n, m, q, good)


def test_size_bound():
    assert eg.size_bound(2, 2) == 14
    assert eg.size_bound(2, 3) == 27 + 9 - 3 + 1
    assert eg.largest_proper_divisor(6) == 3 and eg.largest_proper_divisor(1) == 0


# ---------------------------------------------------------------- constructions

def test_conic_q4_is_a_cap_by_oracle():
    F = make_tower(2, 2).base
    pts = caps.construct_conic(F)
    assert len(pts) == 5
    assert oracles.is_cap(oracles.GF(2, 2), [P.rows[0] for P in pts])
    assert caps.is_cap(pts)


def test_elliptic_quadrics():
    F3 = make_tower(3).base
    Q3 = caps.construct_elliptic_quadric(F3)
    assert len(Q3) == 10 and oracles.is_cap(oracles.GF(3), [P.rows[0] for P in Q3])
    assert len(caps.construct_elliptic_quadric(make_tower(2, 2).base)) == 17
    assert len(caps.construct_elliptic_quadric(make_tower(3, 2).base)) == 82


def test_field_reduced_caps(conic52, ovoid72, ovoid73):
    assert len(conic52) == 5 and (conic52.n, conic52.m, conic52.ambient) == (2, 2, 6)
    assert len(ovoid72) == 17 and ovoid72.ambient == 8
    assert len(ovoid73) == 82
    assert eg.is_pseudo_cap(conic52) and oracle_pseudo_cap(conic52)


def test_make_cap_rejects_wrong_dimensions():
    t = tower_for(2, 2)
    with pytest.raises(DimensionMismatch):
        eg.make_cap(t, 2, 2, [pg.point(t.base, [1, 0, 0, 0, 0, 0])])
    with pytest.raises(DimensionMismatch):
        eg.make_cap(tower_for(2, 1), 2, 2, [])


def test_cap_dict_round_trip(ovoid72):
    d = ovoid72.to_dict()
    assert eg.cap_from_dict(d).elements == ovoid72.elements
    d["elements"] = d["elements"][::-1]
    with pytest.raises(ValidationError):
        eg.cap_from_dict(d)


# ---------------------------------------------------------------- pseudo-cap tests

def test_pseudo_cap_negative_examples():
    t = tower_for(2, 2)
    F = t.base
    I = np.eye(6, dtype=np.int64)
    lines = [pg.subspace(F, I[0:2], 6), pg.subspace(F, I[2:4], 6),
             pg.subspace(F, [[1, 0, 1, 0, 0, 0], [0, 1, 0, 1, 0, 0]], 6)]
    cap = eg.make_cap(t, 2, 2, lines)
    assert not eg.is_pseudo_cap(cap) and not oracle_pseudo_cap(cap)
    t1 = tower_for(2, 1)
    col = [pg.point(t1.base, v) for v in ([1, 0, 0], [0, 1, 0], [1, 1, 0])]
    assert not eg.is_pseudo_cap(eg.make_cap(t1, 1, 1, col))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_pseudo_cap_agrees_with_oracle_on_random_subsets(seed):
    cap = eg.pseudo_conic(2, 2)
    rng = np.random.default_rng(seed)
    els = list(cap.elements[:3])
    X = pg.subspace(cap.field, rng.integers(0, 2, size=(2, 6)), 6)
    if X.dim == 2 and X not in els:
        els.append(X)
    c = eg.make_cap(cap.tower, 2, 2, els)
    assert eg.is_pseudo_cap(c) == oracle_pseudo_cap(c)


def test_weak_egg_examples(conic52, ovoid72):
    assert eg.is_weak_egg(conic52)
    assert eg.is_weak_egg(ovoid72)
    assert not eg.is_weak_egg(eg.subcap(conic52, range(4)))


# ---------------------------------------------------------------- induced spreads and tangents

def test_induced_partial_spreads(conic52, ovoid72, ovoid32):
    S = eg.induced_partial_spread(conic52, 0)
    assert len(S) == 4 and S.ambient == 4 and S.n == 2
    O = oracles.GF(2)
    for E in range(len(ovoid72)):
        S = eg.induced_partial_spread(ovoid72, E)
        assert len(S) == 16 and S.ambient == 6
        sets = [oracles.point_set(O, [list(r) for r in X.rows]) for X in S]
        assert all(not (a & b) for a, b in itertools.combinations(sets, 2))
    P = eg.induced_partial_spread(ovoid32, 0)
    assert len(P) == 4 and len(set(P.members)) == 4 and P.ambient == 3


def test_induced_spread_independent_of_complement(ovoid72):
    E = ovoid72.elements[3]
    Sigma = pg.complement(E)
    rng = np.random.default_rng(4)
    while True:
        other = pg.subspace(ovoid72.field, rng.integers(0, 2, size=(6, 8)), 8)
        if other.dim == 6 and other.is_disjoint(E) and other != Sigma:
            break
    for S in (None, Sigma, other):
        ps = eg.induced_partial_spread(ovoid72, 3, Sigma=S)
        assert len(ps) == 16
        assert sp.extends_to_desarguesian(ps, m=4).extends


def test_tangent_spaces_of_the_classical_egg(ovoid72):
    for i, E in enumerate(ovoid72.elements):
        assert len(eg.hole_codes(ovoid72, i)) == 15
        T = eg.tangent_space_at(ovoid72, i)
        assert T.dim == 6 and T.contains(E)
        assert all(T.is_disjoint(X) for j, X in enumerate(ovoid72.elements) if j != i)


def test_tangent_planes_of_the_elliptic_quadric(ovoid33):
    pts = {P.rows[0] for P in ovoid33.elements}
    for i, P in enumerate(ovoid33.elements):
        T = eg.tangent_space_at(ovoid33, i)
        assert T.dim == 3
        inside = {Q.rows[0] for Q in pg.points_of(T)} & pts
        assert inside == {P.rows[0]}


def test_tangent_uniqueness(ovoid72, ovoid33):
    # any (n+m-1)-space through E avoiding the rest is span(E, H) with H made of hole points
    for cap in (ovoid72, ovoid33):
        for i in (0, len(cap) - 1):
            holes = pg.codes_to_mask(cap.field, cap.n + cap.m, eg.hole_codes(cap, i))
            found = [H for H in pg.enumerate_subspaces(cap.field, cap.n + cap.m, cap.m - 1)
                     if H.mask & ~holes == 0]
            assert len(found) == 1
            assert pg.from_quotient(cap.elements[i], found[0]) == eg.tangent_space_at(cap, i)


def test_egg_certificates(conic52, ovoid72):
    cert = eg.is_egg(ovoid72)
    assert cert is not None and len(cert.tangents) == 17
    assert all(T.dim == 6 for T in cert.tangents)
    assert eg.is_egg(conic52) is not None


def test_corrupted_fixture_fails(ovoid72):
    for seed in range(5):
        bad = eg.corrupt(ovoid72, seed % 17, seed=seed)
        assert len(bad) == 17
        assert not eg.is_pseudo_cap(bad)
        assert eg.check_egg(bad) == (None, None)


def test_weak_egg_without_certificate():
    cap = affine_nine()
    assert eg.is_weak_egg(cap)
    assert eg.is_egg(cap) is None
    assert not eg.parameter_check(1, 3, 2).allowed
    with pytest.raises(HypothesisUnmet):
        eg.good_via_spread(cap, 0)


# ---------------------------------------------------------------- goodness

def test_goodness_examples(ovoid72, ovoid33, conic52):
    for i in range(len(ovoid72)):
        rep = eg.is_good_at(ovoid72, i)
        assert rep.good and set(rep.section_counts) == {5}
    for i in range(len(ovoid33)):
        rep = eg.is_good_at(ovoid33, i)
        assert rep.good and set(rep.section_counts) == {4}
    with pytest.raises(GoodnessUndefined):
        eg.is_good_at(conic52, 0)


def test_goodness_fails_on_a_subcap(ovoid72):
    sub = eg.subcap(ovoid72, range(16))
    assert not eg.is_good_at(sub, 0).good


@pytest.mark.parametrize("name", ["ovoid72", "ovoid33", "ovoid32"])
def test_goodness_equivalence(name, request):
    cap = request.getfixturevalue(name)
    for i in range(len(cap)):
        assert eg.is_good_at(cap, i).good == (eg.good_via_spread(cap, i) is not None)


def test_section_partition(ovoid72):
    q, n, m = 2, 2, 4
    for e in (0, 7):
        rep = eg.is_good_at(ovoid72, e)
        for e1 in range(len(ovoid72)):
            if e1 == e:
                continue
            buckets = [set(s) - {e, e1} for s in rep.sections if e1 in s]
            assert len(buckets) == (q ** m - 1) // (q ** n - 1)
            assert all(len(b) == q ** n - 1 for b in buckets)
            union = set().union(*buckets)
            assert len(union) == sum(len(b) for b in buckets) == len(ovoid72) - 2


def test_disjoint_or_contained(ovoid72):
    els = ovoid72.elements
    for e in range(len(els)):
        assert eg.induced_extension(ovoid72, e).extends
        for i, j in itertools.combinations([x for x in range(len(els)) if x != e], 2):
            Pi = pg.span(els[e], els[i], els[j])
            for X in els:
                assert Pi.is_disjoint(X) or Pi.contains_fast(X)


# ---------------------------------------------------------------- pseudo-ovals and conics

def test_recognize_conic():
    F = make_tower(2, 2).base
    pts = caps.construct_conic(F)
    assert caps.recognize_conic(pts, F) == (0, 1, 0, 0, 1, 0)
    line = [pg.point(F, [1, t, 0]) for t in range(3)] + [pg.point(F, [0, 0, 1]), pg.point(F, [1, 1, 1])]
    assert caps.recognize_conic(line, F) is None
    with pytest.raises(TooFewPoints):
        caps.recognize_conic(pts[:4], F)


def test_plane_section_of_q9_ovoid_is_a_conic():
    F = make_tower(3, 2).base
    Q = caps.construct_elliptic_quadric(F)
    plane = pg.span(Q[0], Q[1], Q[2])
    section = [P for P in Q if plane.contains_fast(P)]
    assert len(section) == 10
    local = [pg.restrict(P, plane) for P in section]
    assert caps.recognize_conic(local, F) is not None


def test_pseudo_conic_corollary(ovoid73):
    result = eg.check_pseudo_conic_corollary(ovoid73, 0)
    # 81 other elements, 9 more in each section: 81*80 / (9*8) sections
    assert len(result) == 90 and all(result.values())


# ---------------------------------------------------------------- elementarity

def fit_quadric(tower, pts):
    """Nullspace of the 10 quadratic monomials evaluated on the points of PG(3,Q)."""
    F = tower.ext
    V = np.array([P.rows[0] for P in pts], dtype=np.int64)
    mons = list(itertools.combinations_with_replacement(range(4), 2))
    M = np.stack([F.vmul(V[:, i], V[:, j]) for i, j in mons], axis=1)
    return la.nullspace(F, M)


def test_classical_egg_is_elementary(ovoid72):
    res = eg.is_elementary(ovoid72)
    assert res.elementary and res.size_bound_met
    assert all(res.witness.contains(X) for X in ovoid72.elements)
    assert len(res.collapsed) == 17 and caps.is_cap(res.collapsed)
    # the collapsed ovoid lies on a unique quadric: it is projectively the elliptic quadric
    assert fit_quadric(ovoid72.tower, res.collapsed).shape[0] == 1


def test_subcap_of_sixteen_is_elementary(ovoid72):
    res = eg.is_elementary(eg.subcap(ovoid72, range(16)))
    assert res.elementary and res.size_bound_met


def test_small_subcaps_warn_but_still_decide(ovoid72):
    with pytest.warns(SizeBoundUnmet):
        res = eg.is_elementary(eg.subcap(ovoid72, range(8)))
    assert res.elementary and not res.size_bound_met
    with pytest.warns(SizeBoundUnmet):
        res = eg.is_elementary(eg.subcap(ovoid72, range(3)))
    assert res.status == "unknown"


def test_field_reduction_round_trip_on_points():
    t = tower_for(2, 2)
    pts = caps.construct_elliptic_quadric(t.ext)
    cap = eg.field_reduce_cap(pts, t)
    frame = sp.ExtensionFrame(sp.canonical_witness(4, t), t)
    assert sorted(frame.collapse_member(X) for X in cap.elements) == sorted(pts)


def test_five_element_errors(ovoid72, ovoid73):
    Pi = hs.find_plane_off(ovoid72, 0)
    with pytest.raises(HypothesisUnmet):
        eg.elementarity_via_good_element(ovoid72, 0, Pi)
    els = ovoid73.elements
    E = els[0]
    rng = np.random.default_rng(0)
    while True:
        extra = pg.subspace(ovoid73.field, rng.integers(0, 3, size=(2, 8)), 8)
        Pi = pg.span(els[1], els[2], extra)
        if Pi.dim == 6 and Pi.is_disjoint(E) and len(ovoid73.elements_in(Pi)) < 5:
            break
    with pytest.raises(TooFewCoplanarElements):
        eg.elementarity_via_good_element(ovoid73, 0, Pi)


def test_five_element_goodness_required(ovoid73):
    Pi = hs.find_plane_off(ovoid73, 0)
    inside = set(ovoid73.elements_in(Pi))
    rep = eg.is_good_at(ovoid73, 0)
    victim = next(i for s in rep.sections for i in s if i != 0 and i not in inside)
    sub = eg.subcap(ovoid73, [i for i in range(82) if i != victim])
    with pytest.raises(GoodnessFails):
        eg.elementarity_via_good_element(sub, 0, Pi)
