"""The translation generalised quadrangle T(E) of an egg.

The egg lives in the hyperplane Sigma_inf = {last coordinate 0} of
PG(2n+m, q); affine points are the vectors (v, 1).  Affine points and the
cosets through tangent spaces and egg elements are indexed by integer
codes, so the whole structure is a boolean incidence matrix.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import egg as eg
from . import linalg as la
from . import projective as pg
from .errors import GoodnessUndefined, MissingCertificate
from .projective import Subspace


@dataclass
class IncidenceStructure:
    points: list                 # tags: ("affine", code) | ("tangent", i, coset) | ("infinity",)
    lines: list                  # tags: ("a", i, coset) | ("b", i)
    incidence: np.ndarray        # points x lines, bool
    order: tuple | None = None
    context: dict = dc_field(default_factory=dict, repr=False)

    @property
    def num_points(self):
        return len(self.points)

    @property
    def num_lines(self):
        return len(self.lines)

    def pairs(self):
        p, l = np.nonzero(self.incidence)
        return list(zip(p.tolist(), l.tolist()))

    def to_dict(self):
        return {"points": [_tag_json(t, self.context) for t in self.points],
                "lines": [_tag_json(t, self.context) for t in self.lines],
                "incidence": [list(x) for x in self.pairs()],
                "order": list(self.order) if self.order else None}

    def edge_list(self) -> str:
        return "".join(f"p{p} l{l}\n" for p, l in self.pairs())


def from_pairs(num_points: int, num_lines: int, pairs) -> IncidenceStructure:
    M = np.zeros((num_points, num_lines), dtype=bool)
    for p, l in pairs:
        M[p, l] = True
    return IncidenceStructure([("point", i) for i in range(num_points)],
                              [("line", j) for j in range(num_lines)], M)


def _coset_codes(F, V, S: Subspace):
    """Code of v + S for each row v, from the entries at the non-pivot columns of S."""
    piv = list(S.pivots)
    red = F.vsub(V, la.matmul(F, V[:, piv], S.array)) if piv else V
    free = [c for c in range(V.shape[1]) if c not in piv]
    return la.encode(F, red[:, free]), free


def _coset_vector(F, code, free, r):
    v = np.zeros(r, dtype=np.int64)
    v[free] = la.decode(F, [code], len(free))[0]
    return v


def build_te(cap: "eg.PseudoCap", certificate: "eg.EggCertificate | None") -> IncidenceStructure:
    if certificate is None:
        raise MissingCertificate("T(E) needs the tangent spaces of an egg")
    F, q = cap.field, cap.q
    r = cap.ambient                                        # Sigma_inf coordinates
    V = la.decode(F, np.arange(q ** r), r)                 # affine points (v, 1)
    points = [("affine", c) for c in range(q ** r)]
    lines = []
    pairs_p, pairs_l = [], []
    tangent_pairs = []
    for i, (E, T) in enumerate(zip(cap.elements, certificate.tangents)):
        line_codes, _ = _coset_codes(F, V, E)
        uniq, reps, inv = np.unique(line_codes, return_index=True, return_inverse=True)
        base = len(lines)
        lines.extend(("a", i, int(c)) for c in uniq)
        pairs_p.append(np.arange(q ** r))
        pairs_l.append(base + inv)
        # tangent flags: cosets of T; each a-line lies in the flag of its T-coset
        flag_codes, _ = _coset_codes(F, V[reps], T)
        fu, finv = np.unique(flag_codes, return_inverse=True)
        pbase = len(points)
        points.extend(("tangent", i, int(c)) for c in fu)
        tangent_pairs.append((pbase + finv, base + np.arange(len(uniq))))
        tangent_pairs.append((pbase + np.arange(len(fu)), None, i))
    b_base = len(lines)
    lines.extend(("b", i) for i in range(len(cap.elements)))
    points.append(("infinity",))
    M = np.zeros((len(points), len(lines)), dtype=bool)
    for p, l in zip(pairs_p, pairs_l):
        M[p, l] = True
    for item in tangent_pairs:
        if item[1] is None:
            M[item[0], b_base + item[2]] = True
        else:
            M[item[0], item[1]] = True
    M[len(points) - 1, b_base:] = True
    ctx = {"cap": cap, "certificate": certificate}
    return IncidenceStructure(points, lines, M, context=ctx)


@dataclass(frozen=True)
class GQCheck:
    order: tuple | None
    axiom: str | None = None
    counterexample: tuple | None = None     # (point, line); either may be None


def check_gq(inc: IncidenceStructure) -> GQCheck:
    M = inc.incidence.astype(np.int64)
    line_sizes = M.sum(axis=0)
    point_degrees = M.sum(axis=1)
    if M.shape[0] == 0 or M.shape[1] == 0:
        return GQCheck(None, "empty")
    bad = np.flatnonzero(line_sizes != line_sizes[0])
    if bad.size:
        return GQCheck(None, "line size", (None, int(bad[0])))
    bad = np.flatnonzero(point_degrees != point_degrees[0])
    if bad.size:
        return GQCheck(None, "point degree", (int(bad[0]), None))
    s, t = int(line_sizes[0]) - 1, int(point_degrees[0]) - 1
    if s <= 1 or t <= 1:
        return GQCheck(None, "order", None)
    C = M @ M.T
    np.fill_diagonal(C, 0)
    if C.max() > 1:
        p, p2 = np.argwhere(C > 1)[0]
        line = int(np.flatnonzero(M[p] & M[p2])[0])
        return GQCheck(None, "two points on two lines", (int(p), line))
    # lines through P meeting L, for P off L
    N = C @ M
    off = (N != 1) & (M == 0)
    if off.any():
        p, l = np.argwhere(off)[0]
        return GQCheck(None, "unique transversal", (int(p), int(l)))
    return GQCheck((s, t))


def verify_gq(inc: IncidenceStructure):
    res = check_gq(inc)
    inc.order = res.order
    return res.order


# ---------------------------------------------------------------- subquadrangles

def local_oval(cap: "eg.PseudoCap", section) -> tuple:
    """The section as an egg with m = n, in the frame coordinates of its span."""
    els = [cap.elements[i] for i in section]
    U = pg.span(els)
    local = [pg.restrict(X, U) for X in els]
    return eg.make_cap(cap.tower, cap.n, cap.n, local), U


def subquadrangle_through(cap: "eg.PseudoCap", i: int, j: int, k: int,
                          certificate: "eg.EggCertificate | None" = None,
                          _memo: dict | None = None) -> IncidenceStructure | None:
    """T(O) for the section of span(Ei, Ej, Ek), when it has exactly q^n + 1 elements."""
    if len({i, j, k}) < 3:
        raise ValueError("indices must be distinct")
    els = cap.elements
    section = tuple(cap.elements_in(pg.span(els[i], els[j], els[k])))
    if len(section) != cap.q ** cap.n + 1:
        return None
    if _memo is not None and section in _memo:
        return _memo[section]
    O, U = local_oval(cap, section)
    cert = eg.is_egg(O)
    result = None
    if cert is not None:
        # the 3n-space through the section and the origin (0, ..., 0, 1) has
        # local coordinates (frame of U, anchor); the tangent spaces must agree
        ok = True
        if certificate is not None:
            for idx in section:
                pos = O.elements.index(pg.restrict(els[idx], U))
                T = pg.lift(cert.tangents[pos], U)
                if not certificate.tangents[idx].contains_fast(T):
                    ok = False
        if ok:
            inc = build_te(O, cert)
            if verify_gq(inc) == (cap.q ** cap.n, cap.q ** cap.n):
                inc.context.update(section=section, frame=U)
                result = inc
    if _memo is not None:
        _memo[section] = result
    return result


def goodness_via_subquadrangles(cap: "eg.PseudoCap", ell: int, require_egg: bool = True) -> bool:
    if cap.m == cap.n:
        raise GoodnessUndefined("goodness is only defined for m > n")
    cert = eg.is_egg(cap)
    if cert is None and require_egg:
        raise MissingCertificate("no egg certificate")
    memo = {}
    others = [x for x in range(len(cap)) if x != ell]
    for a, b in itertools.combinations(others, 2):
        if subquadrangle_through(cap, ell, a, b, certificate=cert, _memo=memo) is None:
            return False
    return True


# ---------------------------------------------------------------- export

def _tag_json(tag, ctx):
    kind = tag[0]
    cap = ctx.get("cap")
    if kind == "affine" and cap is not None:
        v = la.decode(cap.field, [tag[1]], cap.ambient)[0].tolist() + [1]
        return {"type": "affine", "coords": v}
    if kind in ("tangent", "a") and cap is not None:
        i, code = tag[1], tag[2]
        base = ctx["certificate"].tangents[i] if kind == "tangent" else cap.elements[i]
        free = [c for c in range(cap.ambient) if c not in base.pivots]
        v = _coset_vector(cap.field, code, free, cap.ambient)
        rows = np.zeros((base.dim + 1, cap.ambient + 1), dtype=np.int64)
        rows[:base.dim, :cap.ambient] = base.array
        rows[base.dim, :cap.ambient] = v
        rows[base.dim, cap.ambient] = 1
        S = pg.subspace(cap.field, rows, cap.ambient + 1)
        return {"type": "tangent" if kind == "tangent" else "a", "element": i,
                "subspace": S.to_dict()}
    if kind == "b":
        return {"type": "b", "element": tag[1]}
    if kind == "infinity":
        return {"type": "infinity"}
    return {"type": kind, "index": tag[1]}
