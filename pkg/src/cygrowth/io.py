"""JSON input files.

Quiver file::

    {"vertices": 2,
     "arrows": [{"id": "b", "source": 1, "target": 2, "weight": 1}, ...],
     "cy": {"dimension": 2, "mu": [2, 1], "ell": [2, 2]}}

``"incidence": [[...]]`` may replace ``"arrows"`` (weight-1 arrows, ids
``a{i}_{j}_{k}``). For dimension 1, ``mu`` and ``ell`` may be omitted.

Relations file holds exactly one of::

    {"relations": [{"source": 1, "target": 1, "weight": 3,
                    "terms": [{"coeff": "1", "path": ["y", "x"]}, ...]}]}
    {"mesh": {"tau": {"x1": [{"coeff": "1", "arrow": "y3"}], ...}}}
    {"semipotential": [{"coeff": "1", "path": ["x", "y", "z"]}, ...]}

In ``mesh`` a term may carry ``"path"`` instead of ``"arrow"``.
"""
from __future__ import annotations

import json
from fractions import Fraction

from .errors import ParseError
from .oracle import MeshData, Relation, Semipotential
from .quiver import Arrow, CYDatum, WeightedQuiver


def _load(path_or_obj):
    if isinstance(path_or_obj, dict):
        return path_or_obj
    try:
        with open(path_or_obj) as fh:
            return json.load(fh)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path_or_obj}: invalid JSON ({e})") from None
    except OSError as e:
        raise ParseError(f"{path_or_obj}: {e.strerror}") from None


def _get(obj, key, kind, where):
    if not isinstance(obj, dict) or key not in obj:
        raise ParseError(f"missing field '{where}{key}'")
    v = obj[key]
    if kind is int and (isinstance(v, bool) or not isinstance(v, int)):
        raise ParseError(f"field '{where}{key}' must be an integer, got {v!r}")
    if kind is list and not isinstance(v, list):
        raise ParseError(f"field '{where}{key}' must be a list, got {type(v).__name__}")
    if kind is str and not isinstance(v, str):
        raise ParseError(f"field '{where}{key}' must be a string, got {v!r}")
    if kind is dict and not isinstance(v, dict):
        raise ParseError(f"field '{where}{key}' must be an object, got {type(v).__name__}")
    return v


def _int_list(v, where):
    if not isinstance(v, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in v):
        raise ParseError(f"field '{where}' must be a list of integers, got {v!r}")
    return v


def _coeff(v, where):
    if isinstance(v, bool):
        raise ParseError(f"field '{where}' must be a rational, got {v!r}")
    try:
        return Fraction(v) if isinstance(v, (int, str)) else Fraction(str(v))
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"field '{where}' must be a rational string, got {v!r}") from None


def parse_quiver(src):
    """Returns ``(WeightedQuiver, CYDatum | None)``."""
    obj = _load(src)
    n = _get(obj, "vertices", int, "")
    if "arrows" in obj:
        arrows = []
        for k, a in enumerate(_get(obj, "arrows", list, "")):
            w = f"arrows[{k}]."
            arrows.append(Arrow(str(_get(a, "id", str, w)), _get(a, "source", int, w),
                                _get(a, "target", int, w), a.get("weight", 1) if isinstance(a, dict) else 1))
            if isinstance(arrows[-1].weight, bool) or not isinstance(arrows[-1].weight, int):
                raise ParseError(f"field '{w}weight' must be an integer, got {arrows[-1].weight!r}")
        quiver = WeightedQuiver(n, tuple(arrows))
    elif "incidence" in obj:
        M = _get(obj, "incidence", list, "")
        if len(M) != n or any(not isinstance(r, list) or len(r) != n for r in M):
            raise ParseError(f"field 'incidence' must be a {n}x{n} matrix")
        for r in M:
            _int_list(r, "incidence")
        quiver = WeightedQuiver.from_matrix(M)
    else:
        raise ParseError("missing field 'arrows' (or 'incidence')")
    cy = None
    if "cy" in obj:
        c = _get(obj, "cy", dict, "")
        d = _get(c, "dimension", int, "cy.")
        if d == 1 and "mu" not in c and "ell" not in c:
            from .cy_series import dim_one_datum
            cy = dim_one_datum(quiver)
        else:
            mu = _int_list(_get(c, "mu", list, "cy."), "cy.mu")
            ell = _int_list(_get(c, "ell", list, "cy."), "cy.ell")
            cy = CYDatum(tuple(mu), tuple(ell), d)
    return quiver, cy


def _path(v, where):
    if not isinstance(v, list) or not all(isinstance(x, str) for x in v):
        raise ParseError(f"field '{where}' must be a list of arrow ids")
    return tuple(v)


def _terms(lst, where):
    out = []
    for k, t in enumerate(lst):
        w = f"{where}[{k}]."
        out.append((_coeff(_get(t, "coeff", None, w), w + "coeff"),
                    _path(_get(t, "path", list, w), w + "path")))
    return out


def parse_relations(src):
    """Returns ``("relations", [Relation])``, ``("mesh", MeshData)`` or ``("semipotential", Semipotential)``."""
    obj = _load(src)
    kinds = [k for k in ("relations", "mesh", "semipotential") if k in obj]
    if len(kinds) != 1:
        raise ParseError("relations file needs exactly one of 'relations', 'mesh', 'semipotential'")
    kind = kinds[0]
    if kind == "relations":
        rels = []
        for k, r in enumerate(_get(obj, "relations", list, "")):
            w = f"relations[{k}]."
            rels.append(Relation(_get(r, "source", int, w), _get(r, "target", int, w),
                                 _get(r, "weight", int, w), _terms(_get(r, "terms", list, w), w + "terms")))
        return kind, rels
    if kind == "mesh":
        tau_obj = _get(_get(obj, "mesh", dict, ""), "tau", dict, "mesh.")
        tau = {}
        for x, terms in tau_obj.items():
            w = f"mesh.tau.{x}"
            if not isinstance(terms, list):
                raise ParseError(f"field '{w}' must be a list")
            tau[x] = []
            for k, t in enumerate(terms):
                ww = f"{w}[{k}]."
                c = _coeff(_get(t, "coeff", None, ww), ww + "coeff")
                if "arrow" in t:
                    p = (_get(t, "arrow", str, ww),)
                else:
                    p = _path(_get(t, "path", list, ww), ww + "path")
                tau[x].append((c, p))
        return kind, MeshData(tau)
    return kind, Semipotential.from_words(_terms(_get(obj, "semipotential", list, ""), "semipotential"))
