"""JSON documents for algebras, associative factors and p-structures.

An algebra document has keys, in this order: ``name``, ``p``, ``dimEven``,
``dimOdd``, ``labels``, ``bracket``, ``squaring`` and optionally
``pStructure``.  ``bracket`` lists ``[i, j, k, c]`` with ``i < j`` meaning
``[e_i, e_j]`` has coefficient c on e_k; the other order follows by
antisymmetry and even diagonals are zero.  ``squaring`` lists ``[i, k, c]``
for odd i meaning ``e_i^2`` has coefficient c on e_k; for odd p this encodes
``[e_i, e_i] = 2 e_i^2``.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

import numpy as np

from .build import AssocSuperAlgebra
from .gf import check_prime
from .liesuper import SuperAlgebra
from .restricted import PStructure


class DocumentError(ValueError):
    """The input file cannot be read as the expected document."""


def _int(x, what: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise DocumentError(f"{what} must be an integer, got {x!r}")
    return x


def _require(doc: dict, key: str):
    if key not in doc:
        raise DocumentError(f"missing key {key!r}")
    return doc[key]


def algebra_to_doc(g: SuperAlgebra, ps: PStructure | None = None) -> dict:
    n = g.dim
    br = []
    for i in range(n):
        for j in range(i + 1, n):
            for k in np.flatnonzero(g.bracket[i, j]):
                br.append([i, j, int(k), int(g.bracket[i, j, k])])
    sq = []
    if g.p == 2:
        for i in g.odd_indices:
            for k in np.flatnonzero(g.squaring[i]):
                sq.append([i, int(k), int(g.squaring[i, k])])
    else:
        half = pow(2, -1, g.p)
        for i in g.odd_indices:
            for k in np.flatnonzero(g.bracket[i, i]):
                sq.append([i, int(k), int(g.bracket[i, i, k]) * half % g.p])
    doc = {
        "name": g.name,
        "p": g.p,
        "dimEven": g.dim_even,
        "dimOdd": g.dim_odd,
        "labels": [g.label(i) for i in range(n)],
        "bracket": br,
        "squaring": sq,
    }
    if ps is not None:
        pm = ps.p_map
        doc["pStructure"] = {
            "pMap": [[i, int(k), int(pm[i, k])] for i in range(pm.shape[0]) for k in np.flatnonzero(pm[i])]
        }
    return doc


def doc_to_algebra(doc: dict) -> tuple[SuperAlgebra, PStructure | None]:
    if not isinstance(doc, dict):
        raise DocumentError("an algebra document must be a JSON object")
    p = _int(_require(doc, "p"), "p")
    try:
        check_prime(p)
    except ValueError as exc:
        raise DocumentError(str(exc)) from None
    de = _int(_require(doc, "dimEven"), "dimEven")
    do = _int(_require(doc, "dimOdd"), "dimOdd")
    if de < 0 or do < 0:
        raise DocumentError("dimensions must be nonnegative")
    n = de + do
    labels = doc.get("labels")
    if labels is not None and (not isinstance(labels, list) or len(labels) != n):
        raise DocumentError("labels must be a list with one entry per basis vector")
    par = [0] * de + [1] * do
    c = np.zeros((n, n, n), dtype=np.int64)
    for ent in _require(doc, "bracket"):
        if not isinstance(ent, list) or len(ent) != 4:
            raise DocumentError(f"bracket entry {ent!r} is not [i, j, k, c]")
        i, j, k, v = (_int(x, "bracket entry") for x in ent)
        if not (0 <= i < j < n and 0 <= k < n):
            raise DocumentError(f"bracket entry {ent!r} out of range or not i < j")
        c[i, j, k] = (c[i, j, k] + v) % p
        c[j, i, k] = (c[j, i, k] - (-1) ** (par[i] * par[j]) * v) % p
    q = np.zeros((n, n), dtype=np.int64) if p == 2 else None
    for ent in doc.get("squaring", []):
        if not isinstance(ent, list) or len(ent) != 3:
            raise DocumentError(f"squaring entry {ent!r} is not [i, k, c]")
        i, k, v = (_int(x, "squaring entry") for x in ent)
        if not (0 <= i < n and 0 <= k < n):
            raise DocumentError(f"squaring entry {ent!r} out of range")
        if i < de:
            raise DocumentError(f"squaring entry {ent!r} for an even basis vector")
        if p == 2:
            q[i, k] = (q[i, k] + v) % p
        else:
            c[i, i, k] = (c[i, i, k] + 2 * v) % p
    g = SuperAlgebra(p, de, do, c, q, labels, str(doc.get("name", "")))
    ps = None
    if "pStructure" in doc:
        pm = np.zeros((de, de), dtype=np.int64)
        for ent in _require(doc["pStructure"], "pMap"):
            i, k, v = (_int(x, "pMap entry") for x in ent)
            if not (0 <= i < de and 0 <= k < de):
                raise DocumentError(f"pMap entry {ent!r} out of range")
            pm[i, k] = v % p
        from .liesuper import even_part

        ps = PStructure(even_part(g), pm)
    return g, ps


def assoc_to_doc(A: AssocSuperAlgebra) -> dict:
    mult = []
    for i, j, k in zip(*np.nonzero(A.mult)):
        mult.append([int(i), int(j), int(k), int(A.mult[i, j, k])])
    return {
        "p": A.p,
        "dimEven": A.dim_even,
        "dimOdd": A.dim_odd,
        "unit": A.unit,
        "labels": [A.label(i) for i in range(A.dim)],
        "mult": mult,
    }


def doc_to_assoc(doc: dict) -> AssocSuperAlgebra:
    if not isinstance(doc, dict):
        raise DocumentError("an associative algebra document must be a JSON object")
    p = _int(_require(doc, "p"), "p")
    de = _int(_require(doc, "dimEven"), "dimEven")
    do = _int(_require(doc, "dimOdd"), "dimOdd")
    n = de + do
    c = np.zeros((n, n, n), dtype=np.int64)
    for ent in _require(doc, "mult"):
        if not isinstance(ent, list) or len(ent) != 4:
            raise DocumentError(f"mult entry {ent!r} is not [i, j, k, c]")
        i, j, k, v = (_int(x, "mult entry") for x in ent)
        if not all(0 <= t < n for t in (i, j, k)):
            raise DocumentError(f"mult entry {ent!r} out of range")
        c[i, j, k] = (c[i, j, k] + v) % p
    try:
        return AssocSuperAlgebra(p, de, do, c, _int(doc.get("unit", 0), "unit"), doc.get("labels"))
    except ValueError as exc:
        raise DocumentError(str(exc)) from None


def _dump_value(v, indent: str) -> str:
    if isinstance(v, dict):
        if not v:
            return "{}"
        inner = indent + " "
        items = [f"{inner}{json.dumps(k)}: {_dump_value(x, inner)}" for k, x in v.items()]
        return "{\n" + ",\n".join(items) + "\n" + indent + "}"
    if isinstance(v, list) and v and all(isinstance(x, list) for x in v):
        inner = indent + " "
        rows = [inner + json.dumps(x, ensure_ascii=False, separators=(", ", ": ")) for x in v]
        return "[\n" + ",\n".join(rows) + "\n" + indent + "]"
    return json.dumps(v, ensure_ascii=False, separators=(", ", ": "))


def dumps(doc: dict) -> str:
    """Canonical serialization: fixed key order, one entry per line for tables."""
    return _dump_value(doc, "") + "\n"


def read_json(path: str | Path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def load_algebra(path: str | Path) -> tuple[SuperAlgebra, PStructure | None]:
    return doc_to_algebra(read_json(path))



def schema(name: str) -> dict:
    """Load a shipped JSON schema: ``algebra``, ``validation``, ``forms`` or ``theorem``."""
    text = resources.files("nis2").joinpath("schemas", f"{name}.schema.json").read_text(encoding="utf-8")
    return json.loads(text)
