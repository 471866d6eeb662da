"""JSON encodings for bodies and subspaces."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ..errors import GeometryError
from .bodies import UNIT_TOL, HPolytope, Subspace, VPolytope, detect_tags


def body_to_dict(P) -> dict:
    if isinstance(P, HPolytope):
        return {
            "type": "H",
            "dim": P.dim,
            "normals": P.normals.tolist(),
            "offsets": P.offsets.tolist(),
            "tags": sorted(P.tags),
        }
    if isinstance(P, VPolytope):
        return {"type": "V", "dim": P.dim, "vertices": P.vertices.tolist()}
    raise TypeError(f"cannot encode {type(P).__name__}")


def body_from_dict(d: dict):
    kind = d.get("type")
    if kind == "H":
        A = np.asarray(d["normals"], dtype=float).reshape(-1, d["dim"])
        b = np.asarray(d["offsets"], dtype=float)
        tags = d.get("tags")
        tags = None if tags is None else frozenset(tags)
        if np.abs(np.linalg.norm(A, axis=1) - 1.0).max(initial=0.0) <= UNIT_TOL:
            return HPolytope(A, b, detect_tags(A, b) if tags is None else tags)
        # hand-written files rarely have exact unit rows
        return HPolytope.from_inequalities(A, b, tags)
    if kind == "V":
        return VPolytope(np.asarray(d["vertices"], dtype=float).reshape(-1, d["dim"]))
    raise GeometryError(f"unknown body type {kind!r}")


def subspace_to_dict(F: Subspace) -> dict:
    # columns listed one after another
    return {
        "ambient": F.ambient,
        "dim": F.dim,
        "basis": F.basis.T.tolist(),
        "offset": F.offset.tolist(),
    }


def subspace_from_dict(d: dict) -> Subspace:
    n, k = d["ambient"], d["dim"]
    Q = np.asarray(d["basis"], dtype=float).reshape(k, n).T
    p = np.asarray(d.get("offset", np.zeros(n)), dtype=float)
    return Subspace(Q, p)


def load_body(path) -> object:
    return body_from_dict(json.loads(Path(path).read_text()))


def save_body(P, path) -> None:
    Path(path).write_text(json.dumps(body_to_dict(P), indent=2) + "\n")


def load_subspace(path) -> Subspace:
    return subspace_from_dict(json.loads(Path(path).read_text()))
