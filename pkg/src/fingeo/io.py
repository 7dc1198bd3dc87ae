"""JSON files for towers, subspaces, spreads, caps and incidence structures.

Every file carries a ``"kind"`` tag.  Loading re-canonicalises and
validates; malformed JSON raises ParseError, well-formed but inconsistent
content raises ValidationError.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

from . import egg as eg
from . import projective as pg
from . import spread as sp
from .errors import GeometryError, ParseError, ValidationError
from .galois import FieldTower

OUT_ENV = "FINGEO_OUT"


def dumps(obj) -> str:
    """Deterministic JSON text."""
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None


def cap_document(cap: eg.PseudoCap) -> dict:
    return dict(cap.to_dict(), kind="cap")


def spread_document(tower: FieldTower, S: sp.PartialSpread, W: sp.DesarguesianWitness | None = None) -> dict:
    doc = dict(S.to_dict(), kind="spread", field=tower.to_dict())
    if W is not None:
        doc["witness"] = W.to_dict()
    return doc


def subspace_document(tower: FieldTower, X) -> dict:
    return dict(X.to_dict(), kind="subspace", field=tower.to_dict())


def points_document(tower: FieldTower, points) -> dict:
    """Point cap over GF(Q) = tower.ext, as one-row subspaces."""
    return {"kind": "points", "field": tower.to_dict(),
            "points": [P.to_dict() for P in sorted(points)]}


def incidence_document(inc) -> dict:
    return dict(inc.to_dict(), kind="incidence")


def load_document(doc):
    """Parse a document into (kind, object).

    cap -> PseudoCap; spread -> (PartialSpread, witness or None);
    subspace -> (tower, Subspace); points -> (tower, list of points).
    """
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ParseError("document must be an object with a 'kind' field")
    kind = doc["kind"]
    try:
        if kind == "cap":
            return kind, eg.cap_from_dict(doc)
        tower = FieldTower.from_dict(doc["field"])
        if kind == "spread":
            S = sp.partial_spread_from_dict(tower.base, doc)
            W = sp.witness_from_dict(tower.base, doc["witness"]) if "witness" in doc else None
            return kind, (S, W)
        if kind == "subspace":
            return kind, (tower, pg.from_dict(tower.base, doc))
        if kind == "points":
            pts = [pg.from_dict(tower.ext, d) for d in doc["points"]]
            if any(P.dim != 1 for P in pts):
                raise ValidationError("every point must have exactly one row")
            return kind, (tower, pts)
    except GeometryError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed {kind} document: {exc!r}") from None
    raise ParseError(f"unknown document kind {kind!r}")


def read_document(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    return load_document(loads(text))


def output_dir(explicit=None) -> Path:
    return Path(explicit or os.environ.get(OUT_ENV) or ".")


def write_text(path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    return path
