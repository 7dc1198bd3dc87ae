"""Finite fields and the tower GF(p) < GF(q) < GF(q^n).

Every field element is an integer code.  For an extension field of a
subfield F the base-|F| digits of the code (least significant first) are
the coefficients of a polynomial of degree < deg over F, reduced modulo a
fixed monic irreducible.  So the code of ``1 + x`` in GF(4) is 3.

Fields of order at most 256 carry log/antilog tables and full addition and
multiplication tables (numpy), which is what the linear algebra layer
uses.  Larger fields reduce on the fly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from functools import cached_property

import numpy as np

from .errors import DegreeZero, DivisionByZero, NonPrime, ValidationError

TABLE_LIMIT = 256
MAX_ORDER = 2 ** 16


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, h) with q = p**h, or raise NonPrime."""
    if q < 2:
        raise NonPrime(f"{q} is not a prime power")
    p = 2
    while q % p:
        p += 1
    h, rest = 0, q
    while rest % p == 0:
        rest //= p
        h += 1
    if rest != 1:
        raise NonPrime(f"{q} is not a prime power")
    return p, h


# Polynomials over a Field: lists of codes, low degree first, no trailing zeros.

def poly_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_add(F, a, b):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return poly_trim(F.add(x, y) for x, y in zip(a, b))


def poly_sub(F, a, b):
    return poly_add(F, a, [F.neg(y) for y in b])


def poly_mul(F, a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] = F.add(out[i + j], F.mul(x, y))
    return poly_trim(out)


def poly_divmod(F, a, b):
    b = poly_trim(b)
    if not b:
        raise DivisionByZero("polynomial division by zero")
    a = poly_trim(a)
    inv_lead = F.inv(b[-1])
    quot = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b):
        shift = len(a) - len(b)
        c = F.mul(a[-1], inv_lead)
        quot[shift] = c
        for j, y in enumerate(b):
            a[shift + j] = F.sub(a[shift + j], F.mul(c, y))
        a = poly_trim(a)
    return poly_trim(quot), a


def poly_mod(F, a, b):
    return poly_divmod(F, a, b)[1]


def poly_gcd(F, a, b):
    a, b = poly_trim(a), poly_trim(b)
    while b:
        a, b = b, poly_mod(F, a, b)
    if not a:
        return a
    c = F.inv(a[-1])
    return [F.mul(c, x) for x in a]


def poly_powmod(F, a, e, m):
    result = [1]
    base = poly_mod(F, a, m)
    while e:
        if e & 1:
            result = poly_mod(F, poly_mul(F, result, base), m)
        base = poly_mod(F, poly_mul(F, base, base), m)
        e >>= 1
    return result


def poly_eval(F, a, x):
    acc = 0
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


def _prime_factors(d):
    out, k = [], 2
    while k * k <= d:
        if d % k == 0:
            out.append(k)
            while d % k == 0:
                d //= k
        k += 1
    if d > 1:
        out.append(d)
    return out


def is_irreducible(F, f) -> bool:
    """Rabin's test for a polynomial over F."""
    f = poly_trim(f)
    d = len(f) - 1
    if d < 1:
        return False
    if d == 1:
        return True
    q = F.order
    x = [0, 1]
    if poly_trim(poly_sub(F, poly_powmod(F, x, q ** d, f), x)) != []:
        return False
    for r in _prime_factors(d):
        g = poly_gcd(F, poly_sub(F, poly_powmod(F, x, q ** (d // r), f), x), f)
        if len(g) > 1:
            return False
    return True


def monic_polys(F, degree):
    """Monic polynomials of the given degree in lexicographic order of
    their coefficient tuple (constant term first)."""
    for coeffs in itertools.product(range(F.order), repeat=degree):
        yield list(coeffs) + [1]


def smallest_irreducible(F, degree):
    if degree < 1:
        raise DegreeZero("degree must be positive")
    for f in monic_polys(F, degree):
        if is_irreducible(F, f):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


class Field:
    """GF(p) when ``base`` is None, else base[x]/(modulus)."""

    def __init__(self, p: int, base: "Field | None" = None, modulus=None):
        if not is_prime(p):
            raise NonPrime(f"{p} is not prime")
        self.p = p
        self.base = base
        if base is None:
            self.degree = 1
            self.modulus = None
            self.order = p
        else:
            modulus = tuple(int(c) for c in modulus)
            if len(modulus) < 2 or modulus[-1] != 1:
                raise ValidationError("modulus must be monic of positive degree")
            self.degree = len(modulus) - 1
            self.modulus = modulus
            self.order = base.order ** self.degree
        if self.order > MAX_ORDER:
            raise ValidationError(f"field order {self.order} exceeds {MAX_ORDER}")
        self.prime = base is None
        self.key = (p,) if base is None else (base.key, self.modulus)
        self._tables = None
        if self.order <= TABLE_LIMIT:
            self._build_tables()

    def __repr__(self):
        return f"GF({self.order})"

    def __eq__(self, other):
        return isinstance(other, Field) and other.key == self.key

    def __hash__(self):
        return hash(self.key)

    # element <-> coefficient vector over the base field

    def to_vector(self, a):
        if self.base is None:
            return (a,)
        b = self.base.order
        out = []
        for _ in range(self.degree):
            a, r = divmod(a, b)
            out.append(r)
        return tuple(out)

    def from_vector(self, v):
        if self.base is None:
            return int(v[0])
        b = self.base.order
        code = 0
        for c in reversed(v):
            code = code * b + int(c)
        return code

    # slow-path arithmetic, used to build tables and for big fields

    def _add(self, a, b):
        if self.base is None:
            return (a + b) % self.p
        B = self.base
        return self.from_vector([B.add(x, y) for x, y in zip(self.to_vector(a), self.to_vector(b))])

    def _neg(self, a):
        if self.base is None:
            return (-a) % self.p
        return self.from_vector([self.base.neg(x) for x in self.to_vector(a)])

    def _mul(self, a, b):
        if self.base is None:
            return (a * b) % self.p
        B = self.base
        prod = poly_mul(B, poly_trim(self.to_vector(a)), poly_trim(self.to_vector(b)))
        rem = poly_mod(B, prod, self.modulus)
        return self.from_vector(rem + [0] * (self.degree - len(rem)))

    def _pow(self, a, e):
        result, base = 1, a
        while e:
            if e & 1:
                result = self._mul(result, base)
            base = self._mul(base, base)
            e >>= 1
        return result

    def _build_tables(self):
        o = self.order
        # primitive element by brute force
        gen = None
        for g in range(2 if o > 2 else 1, o):
            x, k = g, 1
            while x != 1:
                x = self._mul(x, g)
                k += 1
            if k == o - 1:
                gen = g
                break
        exp = np.zeros(2 * (o - 1), dtype=np.int64)
        log = np.zeros(o, dtype=np.int64)
        x = 1
        for k in range(o - 1):
            exp[k] = x
            log[x] = k
            x = self._mul(x, gen)
        exp[o - 1:] = exp[: o - 1]
        elems = np.arange(o)
        if self.base is None:
            add = (elems[:, None] + elems[None, :]) % self.p
        else:
            digits = np.array([self.to_vector(a) for a in range(o)], dtype=np.int64)
            badd = self.base.add_table
            weights = self.base.order ** np.arange(self.degree)
            summed = badd[digits[:, None, :], digits[None, :, :]]
            add = (summed * weights).sum(axis=2)
        mul = np.zeros((o, o), dtype=np.int64)
        nz = elems[1:]
        mul[1:, 1:] = exp[log[nz][:, None] + log[nz][None, :]]
        neg = np.array([int(np.nonzero(add[a] == 0)[0][0]) for a in range(o)], dtype=np.int64)
        inv = np.zeros(o, dtype=np.int64)
        inv[1:] = exp[(o - 1 - log[nz]) % (o - 1)]
        sub = add[elems[:, None], neg[None, :]]
        self.generator = gen
        self._tables = {"add": add, "mul": mul, "neg": neg, "inv": inv, "sub": sub,
                        "exp": exp, "log": log}

    @property
    def has_tables(self):
        return self._tables is not None

    @property
    def add_table(self):
        return self._tables["add"]

    @property
    def mul_table(self):
        return self._tables["mul"]

    @property
    def neg_table(self):
        return self._tables["neg"]

    @property
    def inv_table(self):
        return self._tables["inv"]

    @property
    def sub_table(self):
        return self._tables["sub"]

    # scalar arithmetic

    def add(self, a, b):
        if self._tables is not None:
            return int(self._tables["add"][a, b])
        return self._add(a, b)

    def neg(self, a):
        if self._tables is not None:
            return int(self._tables["neg"][a])
        return self._neg(a)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self._tables is not None:
            return int(self._tables["mul"][a, b])
        return self._mul(a, b)

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of zero")
        if self._tables is not None:
            return int(self._tables["inv"][a])
        return self._pow(a, self.order - 2)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        if e < 0:
            a, e = self.inv(a), -e
        if a == 0:
            return 1 if e == 0 else 0
        if self._tables is not None:
            t = self._tables
            return int(t["exp"][(int(t["log"][a]) * e) % (self.order - 1)])
        return self._pow(a, e)

    def elements(self):
        return range(self.order)

    # vectorised arithmetic on numpy code arrays

    def vadd(self, a, b):
        if self.prime:
            return (a + b) % self.p
        return self._tables["add"][a, b]

    def vsub(self, a, b):
        if self.prime:
            return (a - b) % self.p
        return self._tables["sub"][a, b]

    def vmul(self, a, b):
        if self.prime:
            return (a * b) % self.p
        return self._tables["mul"][a, b]

    def vneg(self, a):
        if self.prime:
            return (-a) % self.p
        return self._tables["neg"][a]

    def vinv(self, a):
        if np.any(np.asarray(a) == 0):
            raise DivisionByZero("inverse of zero")
        if self._tables is not None:
            return self._tables["inv"][a]
        return np.vectorize(lambda x: self.inv(int(x)))(a)


def prime_field(p: int) -> Field:
    return Field(p)


@dataclass(frozen=True)
class FieldTower:
    """GF(p) < GF(q) < GF(q^n) with deterministic moduli.

    ``base`` is GF(q), ``ext`` is GF(q^n).  Elements of ``ext`` are coded over
    the basis 1, x, ..., x^(n-1) with x a root of ``ext_modulus``.
    """

    p: int
    h: int
    n: int
    base_modulus: tuple
    ext_modulus: tuple
    base: Field = dc_field(compare=False, repr=False)
    ext: Field = dc_field(compare=False, repr=False)

    @property
    def q(self):
        return self.p ** self.h

    @property
    def Q(self):
        return self.q ** self.n

    def ext_to_vector(self, a):
        return self.ext.to_vector(a) if self.n > 1 else (a,)

    def vector_to_ext(self, v):
        return self.ext.from_vector(v) if self.n > 1 else int(v[0])

    def to_dict(self):
        return {"p": self.p, "h": self.h, "n": self.n,
                "base_modulus": list(self.base_modulus),
                "ext_modulus": list(self.ext_modulus)}

    @classmethod
    def from_dict(cls, d):
        tower = make_tower(int(d["p"]), int(d["h"]), int(d["n"]))
        if list(tower.base_modulus) != list(d["base_modulus"]) or \
                list(tower.ext_modulus) != list(d["ext_modulus"]):
            raise ValidationError("field descriptor moduli are not the canonical ones")
        return tower

    @cached_property
    def ext_basis_matrix(self):
        """Matrix of multiplication by x on GF(q)^n (row-vector convention)."""
        n, F = self.n, self.base
        rows = []
        for i in range(n):
            # x * x^i
            if i + 1 < n:
                rows.append([1 if j == i + 1 else 0 for j in range(n)])
            else:
                rows.append([F.neg(c) for c in self.ext_modulus[:n]])
        return np.array(rows, dtype=np.int64)


_TOWERS = {}


def make_tower(p: int, h: int = 1, n: int = 1) -> FieldTower:
    if not is_prime(p):
        raise NonPrime(f"{p} is not prime")
    if h < 1 or n < 1:
        raise DegreeZero("h and n must be at least 1")
    key = (p, h, n)
    if key in _TOWERS:
        return _TOWERS[key]
    Fp = Field(p)
    if h == 1:
        base_mod = (0, 1)
        base = Fp
    else:
        base_mod = smallest_irreducible(Fp, h)
        base = Field(p, Fp, base_mod)
    if n == 1:
        ext_mod = (0, 1)
        ext = base
    else:
        ext_mod = smallest_irreducible(base, n)
        ext = Field(p, base, ext_mod)
    tower = FieldTower(p, h, n, tuple(base_mod), tuple(ext_mod), base, ext)
    _TOWERS[key] = tower
    return tower


def tower_for(q: int, n: int = 1) -> FieldTower:
    p, h = prime_power(q)
    return make_tower(p, h, n)
