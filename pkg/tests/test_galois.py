import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from fingeo import galois
from fingeo.errors import DegreeZero, DivisionByZero, NonPrime, ValidationError
from fingeo.galois import make_tower

TOWERS = [(2, 1, 1), (3, 1, 1), (2, 1, 2), (3, 1, 2), (2, 2, 1), (2, 2, 2), (5, 1, 2), (2, 1, 4), (3, 2, 1)]


# ---------------------------------------------------------------- construction

def test_gf2_quadratic_modulus_matches_exhaustive_search():
    t = make_tower(2, 1, 2)
    assert t.ext_modulus == (1, 1, 1)
    assert t.ext_modulus == oracles.smallest_irreducible_prime(2, 2)


def test_trivial_extension():
    t = make_tower(3, 1, 1)
    assert t.q == 3 and t.Q == 3 and t.ext is t.base
    assert t.ext_to_vector(2) == (2,)


def test_gf4_over_gf16_modulus_matches_rootless_search():
    t = make_tower(2, 2, 2)
    F4 = oracles.GF(2, 2)
    assert t.base_modulus == F4.modulus
    assert t.ext_modulus == oracles.smallest_rootless(F4, 2)
    assert t.Q == 16


@pytest.mark.parametrize("p,d", [(2, 3), (3, 2), (3, 3), (5, 2), (2, 4)])
def test_prime_field_moduli_are_lexicographically_smallest(p, d):
    got = galois.smallest_irreducible(galois.prime_field(p), d)
    assert tuple(got) == oracles.smallest_irreducible_prime(p, d)


def test_errors():
    with pytest.raises(NonPrime):
        make_tower(4, 1, 1)
    with pytest.raises(DegreeZero):
        make_tower(2, 0, 1)
    with pytest.raises(DegreeZero):
        make_tower(2, 1, 0)
    F = make_tower(3, 1, 1).base
    with pytest.raises(DivisionByZero):
        F.inv(0)
    with pytest.raises(ZeroDivisionError):
        F.div(1, 0)


def test_tower_dict_round_trip_and_validation():
    t = make_tower(2, 2, 2)
    d = t.to_dict()
    assert d == {"p": 2, "h": 2, "n": 2, "base_modulus": [1, 1, 1], "ext_modulus": list(t.ext_modulus)}
    assert galois.FieldTower.from_dict(d) is t
    d["ext_modulus"] = [1, 0, 1]
    with pytest.raises(ValidationError):
        galois.FieldTower.from_dict(d)


def test_ext_of_n1_is_base_of_h():
    assert make_tower(2, 1, 2).ext == make_tower(2, 2, 1).base


# ---------------------------------------------------------------- arithmetic

def test_gf4_product():
    F = make_tower(2, 2, 1).base
    assert F.mul(2, 2) == 3
    assert all(F.mul(0, a) == 0 for a in range(4))
    assert F.inv(1) == 1


@pytest.mark.parametrize("p,h", [(2, 2), (2, 3), (3, 2), (2, 4), (5, 1), (7, 1)])
def test_tables_match_polynomial_oracle(p, h):
    F = make_tower(p, h, 1).base
    O = oracles.GF(p, h)
    for a, b in itertools.product(range(F.order), repeat=2):
        assert F.mul(a, b) == O.mul(a, b)
        assert F.add(a, b) == O.add(a, b)


@pytest.mark.parametrize("key", TOWERS)
def test_field_axioms_exhaustive_on_small_fields(key):
    t = make_tower(*key)
    for F in (t.base, t.ext):
        q = F.order
        if q ** 3 > 20000:
            continue
        a, b, c = (x.ravel() for x in np.meshgrid(*(np.arange(q),) * 3, indexing="ij"))
        assert np.array_equal(F.vmul(F.vmul(a, b), c), F.vmul(a, F.vmul(b, c)))
        assert np.array_equal(F.vadd(F.vadd(a, b), c), F.vadd(a, F.vadd(b, c)))
        assert np.array_equal(F.vmul(a, b), F.vmul(b, a))
        assert np.array_equal(F.vadd(a, b), F.vadd(b, a))
        assert np.array_equal(F.vmul(a, F.vadd(b, c)), F.vadd(F.vmul(a, b), F.vmul(a, c)))


@settings(max_examples=1000, deadline=None)
@given(st.sampled_from([(3, 1, 4), (2, 1, 8), (7, 1, 2), (3, 2, 2), (2, 2, 3)]), st.data())
def test_field_axioms_random_triples(key, data):
    F = make_tower(*key).ext
    a, b, c = (data.draw(st.integers(0, F.order - 1)) for _ in range(3))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.mul(a, b) == F.mul(b, a)
    assert F.sub(F.add(a, b), b) == a
    if a:
        assert F.mul(a, F.inv(a)) == 1


@pytest.mark.parametrize("key", TOWERS)
def test_lagrange(key):
    t = make_tower(*key)
    for F in (t.base, t.ext):
        nz = np.arange(1, F.order)
        assert all(F.pow(int(a), F.order - 1) == 1 for a in nz)


@pytest.mark.parametrize("key", [(2, 1, 2), (3, 1, 2), (2, 2, 2), (2, 1, 3), (3, 1, 3)])
def test_subfield_embedding_is_a_ring_homomorphism(key):
    t = make_tower(*key)
    emb = [t.vector_to_ext([s] + [0] * (t.n - 1)) for s in range(t.q)]
    for s, u in itertools.product(range(t.q), repeat=2):
        assert t.ext.mul(emb[s], emb[u]) == emb[t.base.mul(s, u)]
        assert t.ext.add(emb[s], emb[u]) == emb[t.base.add(s, u)]


# ---------------------------------------------------------------- coordinates

def test_ext_to_vector_examples():
    t = make_tower(2, 1, 2)
    x = t.q          # the element x
    assert t.ext_to_vector(x) == (0, 1)
    assert t.ext_to_vector(0) == (0, 0)
    assert t.ext_to_vector(t.ext.add(x, 1)) == (1, 1)


@pytest.mark.parametrize("key", TOWERS)
def test_coordinate_map_is_a_linear_bijection(key):
    t = make_tower(*key)
    vecs = {t.ext_to_vector(a) for a in range(t.Q)}
    assert len(vecs) == t.Q
    for a in range(min(t.Q, 30)):
        v = t.ext_to_vector(a)
        assert t.vector_to_ext(v) == a
        for s in range(t.q):
            sa = t.ext.mul(t.vector_to_ext([s] + [0] * (t.n - 1)), a)
            assert t.ext_to_vector(sa) == tuple(t.base.mul(s, c) for c in v)


def test_basis_matrix_is_multiplication_by_x():
    t = make_tower(3, 1, 2)
    X = t.ext_basis_matrix
    from fingeo import linalg as la
    for a in range(t.Q):
        v = np.array([t.ext_to_vector(a)])
        assert t.vector_to_ext(la.matmul(t.base, v, X)[0]) == t.ext.mul(a, t.q)
