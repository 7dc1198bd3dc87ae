"""Command line: construct objects, check files, run harnesses.

Exit codes: 0 when everything passes, 1 when a check or harness fails,
2 for bad input (unparseable files, invalid parameters, guards).
"""

from __future__ import annotations

import argparse
import sys
import warnings

from . import __version__
from . import caps
from . import egg as eg
from . import harness as hs
from . import io
from . import spread as sp
from .errors import BadParams, GeometryError, GoodnessUndefined, HypothesisViolated, SizeBoundUnmet
from .galois import tower_for

KINDS = ("conic", "elliptic-quadric", "pseudo-conic", "classical-pseudo-ovoid", "desarguesian-spread")
CAP_CHECKS = ("pseudo-cap", "weak-egg", "egg", "good", "elementary")
SPREAD_CHECKS = ("spread", "normal", "desarguesian")
POINT_CHECKS = ("cap", "conic")
DEFAULT_CHECKS = {"cap": CAP_CHECKS, "spread": SPREAD_CHECKS, "points": ("cap",)}

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


# ---------------------------------------------------------------- construct

def resolve(kind, n=None, k=None):
    """Fill in the default n (and k for spreads) of a construction."""
    if n is None:
        n = 1 if kind in ("conic", "elliptic-quadric") else 2
    if kind == "desarguesian-spread":
        k = 2 if k is None else k
    else:
        k = None
    return n, k


def construct(kind, q, n=None, k=None, max_points=hs.DEFAULT_MAX_POINTS):
    """Returns (document, short description)."""
    if kind not in KINDS:
        raise BadParams(f"unknown kind {kind!r}")
    if q is None:
        raise BadParams("--q is required")
    n, k = resolve(kind, n, k)
    if kind in ("conic", "elliptic-quadric"):
        tower = tower_for(q, n)
        dim = 3 if kind == "conic" else 4
        hs.guard(tower.Q, dim, max_points)
        F = tower.ext
        pts = caps.construct_conic(F) if kind == "conic" else caps.construct_elliptic_quadric(F)
        return io.points_document(tower, pts), f"{len(pts)} points of PG({dim - 1},{tower.Q})"
    if kind == "desarguesian-spread":
        if k < 1:
            raise BadParams("--k must be positive")
        hs.guard(q, k * n, max_points)
        tower = tower_for(q, n)
        S, W = sp.desarguesian_spread(k, tower)
        return io.spread_document(tower, S, W), f"{len(S)} members in PG({k * n - 1},{q})"
    m = n if kind == "pseudo-conic" else 2 * n
    hs.guard(q, 2 * n + m, max_points)
    cap = eg.pseudo_conic(n, q) if kind == "pseudo-conic" else eg.classical_pseudo_ovoid(n, q)
    return io.cap_document(cap), f"{len(cap)} elements in PG({cap.ambient - 1},{q})"


def default_name(kind, q, n=None, k=None):
    n, k = resolve(kind, n, k)
    parts = [kind, f"q{q}", f"n{n}"]
    if k is not None:
        parts.append(f"k{k}")
    return "-".join(parts) + ".json"


# ---------------------------------------------------------------- checks

def _verdict(passed, **evidence):
    return {"passed": bool(passed), "evidence": evidence}


def check_cap(cap: eg.PseudoCap, name: str, seed: int = 0) -> dict:
    if name == "pseudo-cap":
        return _verdict(eg.is_pseudo_cap(cap), elements=len(cap))
    if name == "weak-egg":
        return _verdict(eg.is_weak_egg(cap), elements=len(cap), target=cap.q ** cap.m + 1)
    if name == "egg":
        cert, bad = eg.check_egg(cap)
        if cert is not None:
            return _verdict(True, tangents=[T.to_dict() for T in cert.tangents])
        if bad is None:
            return _verdict(False, reason="not a weak egg")
        return _verdict(False, reason=f"no tangent space at element {bad}", element=bad)
    if name == "good":
        try:
            reps = [eg.is_good_at(cap, i) for i in range(len(cap))]
        except GoodnessUndefined as exc:
            return _verdict(False, reason=str(exc))
        bad = [r.element for r in reps if not r.good]
        per = [{"element": r.element, "good": r.good,
                "section_counts": sorted(set(r.section_counts))} for r in reps]
        return _verdict(not bad, failing=bad, per_element=per)
    if name == "elementary":
        try:
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always", SizeBoundUnmet)
                res = eg.is_elementary(cap, seed=seed)
        except HypothesisViolated as exc:
            return _verdict(False, reason=str(exc))
        ev = {"status": res.status, "reason": res.reason, "size_bound_met": res.size_bound_met,
              "warnings": [str(w.message) for w in caught], "choice": res.evidence}
        if res.elementary:
            ev["witness"] = res.witness.to_dict()
            ev["collapsed_points"] = [list(P.rows[0]) for P in res.collapsed]
        return _verdict(res.elementary, **ev)
    raise BadParams(f"unknown cap check {name!r}; choose from {', '.join(CAP_CHECKS)}")


def check_spread(S: sp.PartialSpread, W, name: str, seed: int = 0) -> dict:
    if name == "spread":
        return _verdict(sp.is_spread(S), members=len(S))
    if name == "normal":
        if not sp.is_spread(S):
            return _verdict(False, reason="not a spread")
        return _verdict(sp.is_normal(S))
    if name == "desarguesian":
        if not sp.is_spread(S):
            return _verdict(False, reason="not a spread")
        if W is not None:
            ok = all(W.contains(X) for X in S.members)
            return _verdict(ok, source="supplied witness", witness=W.to_dict())
        Wf = sp.is_desarguesian(S, seed=seed)
        if Wf is None:
            return _verdict(False, reason="no witness found")
        return _verdict(True, source="computed", witness=Wf.to_dict())
    raise BadParams(f"unknown spread check {name!r}; choose from {', '.join(SPREAD_CHECKS)}")


def check_points(tower, pts, name: str) -> dict:
    if name == "cap":
        return _verdict(caps.is_cap(pts), points=len(pts))
    if name == "conic":
        if tower.ext.order < 4 or pts[0].ambient != 3:
            return _verdict(False, reason="conic recognition needs planar points over GF(Q), Q >= 4")
        form = caps.recognize_conic(pts, tower.ext)
        return _verdict(form is not None, form=list(form) if form else None)
    raise BadParams(f"unknown point check {name!r}; choose from {', '.join(POINT_CHECKS)}")


def default_checks(kind, obj) -> list:
    names = list(DEFAULT_CHECKS.get(kind, ()))
    if kind == "cap":
        # goodness needs m > n, the elementarity procedure needs m = 2n
        if obj.m == obj.n:
            names.remove("good")
        if obj.m != 2 * obj.n:
            names.remove("elementary")
    return names


def run_checks(path, checks=None, seed=0, max_points=hs.DEFAULT_MAX_POINTS) -> dict:
    kind, obj = io.read_document(path)
    names = list(checks) if checks else default_checks(kind, obj)
    results = {}
    if kind == "cap":
        hs.guard(obj.q, obj.ambient, max_points)
        fn = lambda c: check_cap(obj, c, seed)
    elif kind == "spread":
        S, W = obj
        hs.guard(S.field.order, S.ambient, max_points)
        fn = lambda c: check_spread(S, W, c, seed)
    elif kind == "points":
        tower, pts = obj
        fn = lambda c: check_points(tower, pts, c)
    else:
        raise BadParams(f"no checks for {kind} documents")
    for c in names:
        results[c] = fn(c)
    return {"file": str(path), "kind": kind, "checks": results,
            "passed": all(r["passed"] for r in results.values())}


def check_summary(report) -> str:
    lines = [f"{'PASS' if report['passed'] else 'FAIL'} {report['file']} ({report['kind']})"]
    for name, r in report["checks"].items():
        reason = r["evidence"].get("reason")
        lines.append(f"  {'pass' if r['passed'] else 'FAIL'} {name}" + (f": {reason}" if reason else ""))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- info

def info(path=None) -> dict:
    if path is None:
        return {"version": __version__, "kinds": list(KINDS), "harnesses": sorted(hs.HARNESSES),
                "checks": {k: list(v) for k, v in
                           (("cap", CAP_CHECKS), ("spread", SPREAD_CHECKS), ("points", POINT_CHECKS))},
                "output_env": io.OUT_ENV, "max_points_default": hs.DEFAULT_MAX_POINTS}
    kind, obj = io.read_document(path)
    if kind == "cap":
        return {"kind": kind, "n": obj.n, "m": obj.m, "q": obj.q, "elements": len(obj),
                "ambient": f"PG({obj.ambient - 1},{obj.q})",
                "parameters": eg.parameter_check(obj.n, obj.m, obj.q).reason}
    if kind == "spread":
        S, W = obj
        return {"kind": kind, "n": S.n, "q": S.field.order, "members": len(S),
                "ambient": f"PG({S.ambient - 1},{S.field.order})", "witness": W is not None}
    if kind == "points":
        tower, pts = obj
        return {"kind": kind, "Q": tower.Q, "points": len(pts),
                "ambient": f"PG({pts[0].ambient - 1 if pts else '?'},{tower.Q})"}
    return {"kind": kind}


def _text_info(d) -> str:
    return "".join(f"{k}: {v}\n" for k, v in d.items())


# ---------------------------------------------------------------- entry

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--out", help="output file (construct: defaults to $FINGEO_OUT/<name>.json)")
    common.add_argument("--max-points", type=int, default=hs.DEFAULT_MAX_POINTS,
                        help="refuse ambient spaces with more points than this")
    common.add_argument("--seed", type=int, default=0)

    p = argparse.ArgumentParser(prog="fingeo", description="Finite geometry construction and verification.")
    p.add_argument("--version", action="version", version=f"fingeo {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", parents=[common], help="write a named object as JSON")
    c.add_argument("kind", choices=KINDS)
    c.add_argument("--q", type=int, required=True)
    c.add_argument("--n", type=int)
    c.add_argument("--k", type=int)

    k = sub.add_parser("check", parents=[common], help="verify properties of a JSON file")
    k.add_argument("file")
    k.add_argument("--checks", help="comma separated list; defaults depend on the file kind")

    h = sub.add_parser("harness", parents=[common], help="run a theorem harness")
    h.add_argument("name")
    h.add_argument("--q", type=int)
    h.add_argument("--n", type=int)
    h.add_argument("--m", type=int)
    h.add_argument("--samples", type=int)
    h.add_argument("--max-n", type=int)
    h.add_argument("--input", help="cap file to use instead of the built-in example")

    i = sub.add_parser("info", parents=[common], help="describe the toolkit or a JSON file")
    i.add_argument("file", nargs="?")
    return p


def _emit(args, payload: dict, text: str, write_out=True):
    out = io.dumps(payload) if args.format == "json" else text
    sys.stdout.write(out)
    if write_out and args.out:
        io.write_text(args.out, io.dumps(payload))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.max_points is not None and args.max_points < 1:
        print("error: --max-points must be positive", file=sys.stderr)
        return EXIT_INPUT
    try:
        if args.command == "construct":
            doc, desc = construct(args.kind, args.q, args.n, args.k, args.max_points)
            path = args.out or io.output_dir() / default_name(args.kind, args.q, args.n, args.k)
            io.write_text(path, io.dumps(doc))
            payload = {"kind": args.kind, "file": str(path), "description": desc}
            _emit(args, payload, f"wrote {path}: {desc}\n", write_out=False)
            return EXIT_OK
        if args.command == "check":
            checks = [c.strip() for c in args.checks.split(",") if c.strip()] if args.checks else None
            report = run_checks(args.file, checks, args.seed, args.max_points)
            _emit(args, report, check_summary(report))
            return EXIT_OK if report["passed"] else EXIT_FAIL
        if args.command == "harness":
            params = {"q": args.q, "n": args.n, "m": args.m, "seed": args.seed,
                      "samples": args.samples, "max_n": args.max_n, "max_points": args.max_points}
            if args.input:
                kind, obj = io.read_document(args.input)
                if kind != "cap":
                    raise BadParams("--input must be a cap file")
                params["cap"] = obj
            report = hs.run(args.name, **params)
            _emit(args, report, hs.summary(report))
            return EXIT_OK if report["passed"] else EXIT_FAIL
        if args.command == "info":
            d = info(args.file)
            _emit(args, d, _text_info(d))
            return EXIT_OK
    except GeometryError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
