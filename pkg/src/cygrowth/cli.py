"""Command line front end.

Exit codes: 0 success, 2 parse error, 3 semantic error, 4 oracle error,
5 search bounds too large.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from . import __version__
from .cy_series import (VerdictKind, build_q, dim2_spectral_criterion, dim3_normal_criterion,
                        hypocycloid_boundary, hypocycloid_contains, verify_functional_equation)
from .errors import CYGrowthError, InvalidCYDatum, ParseError
from .growth import classify_algebra, total_series
from .io import parse_quiver, parse_relations
from .oracle import (GradedPresentation, build_mesh_relations, build_semipotential_relations,
                     check_against_series, graded_dims, redundant_relations, truncated_socle_trivial)
from .polyalg import invert_as_series, multiplicity_eps, valuation_at_one
from .search import search


def _load_model(path):
    quiver, cy = parse_quiver(path)
    if cy is None:
        raise InvalidCYDatum("field 'cy' is required for this command")
    return build_q(quiver, cy)


def _criterion(model, tol):
    if model.d == 2:
        return "dimension-2 spectral criterion", dim2_spectral_criterion(model, tol)
    if model.d == 3:
        return "dimension-3 hypocycloid criterion", dim3_normal_criterion(model, tol)
    return None, None


def _ok(b):
    return "OK" if b else "FAILED"


def analyze(path, tol=1e-8):
    """Everything ``analyze`` reports, as a JSON-ready dict."""
    model = _load_model(path)
    rep = classify_algebra(model.q)
    tot = total_series(model.q)
    fe = verify_functional_equation(model)
    name, spec = _criterion(model, tol)
    out = {
        "vertices": model.quiver.n_vertices,
        "arrows": len(model.quiver.arrows),
        "dimension": model.d,
        "mu": list(model.cy.mu),
        "ell": list(model.cy.ell),
        "q": model.q.render(),
        "growth": rep.to_json(),
        "factorization": rep.factorization.render(),
        "total_series": str(tot),
        "total_gk": valuation_at_one(tot) if rep.gk_dimension is not None else None,
        "total_eps": str(multiplicity_eps(tot)) if rep.gk_dimension is not None else None,
        "functional_equation": fe.functional_equation,
        "commutes_with_PtL": fe.commutes,
        "identity_witness": list(fe.witness) if fe.witness else None,
    }
    if spec is not None:
        out["criterion"] = {"name": name, **spec.to_json()}
    return out


def _analyze_text(r):
    lines = [f"quiver: {r['vertices']} vertices, {r['arrows']} arrows",
             f"datum: dimension {r['dimension']}, mu = {r['mu']}, ell = {r['ell']}",
             "q(t):"]
    for i, row in enumerate(r["q"], 1):
        for j, e in enumerate(row, 1):
            lines.append(f"  q[{i},{j}] = {e}")
    g = r["growth"]
    lines += [f"det q(t) = {g['det_q']}",
              f"cyclotomic factorization: {r['factorization']}",
              f"growth: {g['growth_class']}",
              f"GK-dimension: {g['gk_dimension'] if g['gk_dimension'] is not None else 'infinite'}",
              f"pole orders at t = 1: {g['per_entry_pole_orders']}",
              f"total series: {r['total_series']}"]
    if r["total_gk"] is not None:
        lines.append(f"total series: GK {r['total_gk']}, multiplicity {r['total_eps']}")
    lines += [f"functional equation: {_ok(r['functional_equation'])}",
              f"commutation with P t^L: {_ok(r['commutes_with_PtL'])}"]
    if r["identity_witness"]:
        lines.append(f"identity witness: {r['identity_witness']}")
    c = r.get("criterion")
    if c:
        lines.append(f"{c['name']}: {c['verdict']}")
        if c["spectral_radius"] is not None:
            lines.append(f"  spectral radius of M: {c['spectral_radius']:.10g}")
        if c["perron_vector"]:
            lines.append(f"  positive eigenvector: {c['perron_vector']}")
        for p in c["pairs"]:
            d, z = p["delta"], p["zeta"]
            lines.append(f"  eigenpair delta = {d[0]:.6g}{d[1]:+.6g}i, zeta = {z[0]:.6g}{z[1]:+.6g}i: "
                         f"{'inside' if p['inside'] else 'outside'}")
        if c["expected_rho"] is not None:
            lines.append(f"  expected rho = {c['expected_rho']}, expected GK = {c['expected_gk']}")
        for cav in c["caveats"]:
            lines.append(f"  note: {cav}")
    return "\n".join(lines) + "\n"


def _csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def cmd_analyze(args):
    r = analyze(args.quiver, args.tol)
    if args.format == "json":
        return json.dumps(r, indent=2) + "\n"
    if args.format == "csv":
        return _csv(["key", "value"], [(k, json.dumps(v)) for k, v in r.items()])
    return _analyze_text(r)


def cmd_series(args):
    model = _load_model(args.quiver)
    s = invert_as_series(model.q, args.degree)
    if args.format == "json":
        return json.dumps({"D": s.D, "coefficients": [[list(r) for r in H] for H in s.coeffs]}, indent=2) + "\n"
    if args.format == "text":
        lines = []
        for i in range(s.n):
            for j in range(s.n):
                lines.append(f"[{i + 1},{j + 1}] " + " ".join(str(x) for x in s.entry(i, j)))
        lines.append("total " + " ".join(str(x) for x in s.total()))
        return "\n".join(lines) + "\n"
    return _csv(["i", "j", "n", "coeff"], s.rows())


def check(quiver_path, rel_path, D, modulus=None):
    quiver, cy = parse_quiver(quiver_path)
    if cy is None:
        raise InvalidCYDatum("field 'cy' is required for this command")
    model = build_q(quiver, cy)
    kind, data = parse_relations(rel_path)
    cols = None
    if kind == "relations":
        pres = GradedPresentation(quiver, data)
    elif kind == "mesh":
        pres = build_mesh_relations(quiver, cy, data)
    else:
        rows, cols = build_semipotential_relations(quiver, cy, data)
        pres = GradedPresentation(quiver, rows)
    table = graded_dims(pres, D, modulus=modulus)
    match, where = check_against_series(table, model.q)
    out = {"relations": [{"source": r.source, "target": r.target, "weight": r.weight, "relation": r.render()}
                         for r in pres.relations],
           "D": D, "modulus": modulus, "series_match": match,
           "first_mismatch": list(where) if where else None,
           "total_dims": table.total(),
           "redundant_relations": redundant_relations(pres)}
    for side in ("right", "left"):
        soc = truncated_socle_trivial(pres, side, D)
        out[f"socle_{side}"] = {"trivial": soc.trivial, "checked_through": soc.checked_through,
                                "witnesses": [list(w[:3]) + [w[3]] for w in soc.witnesses[:5]],
                                "caveat": soc.caveat}
    if cols is not None:
        other = graded_dims(GradedPresentation(quiver, cols), D, modulus=modulus)
        out["column_relations"] = [r.render() for r in cols]
        out["row_column_dims_agree"] = other.dims == table.dims
    return out, table


def cmd_check(args):
    r, table = check(args.quiver, args.relations, args.degree, args.modulus)
    if args.format == "json":
        return json.dumps(r, indent=2, default=str) + "\n"
    if args.format == "csv":
        return table.to_csv()
    lines = ["relations:"]
    lines += [f"  {x['source']}->{x['target']} (weight {x['weight']}): {x['relation']}" for x in r["relations"]]
    lines.append(f"graded dimensions (total) up to degree {r['D']}: {r['total_dims']}")
    if r["series_match"]:
        lines.append(f"series check: match through degree {r['D']}")
    else:
        i, j, n = r["first_mismatch"]
        lines.append(f"series check: MISMATCH at entry ({i},{j}), degree {n}")
    for side in ("right", "left"):
        s = r[f"socle_{side}"]
        verdict = "trivial" if s["trivial"] else f"NONTRIVIAL, e.g. {s['witnesses'][0]}"
        lines.append(f"{side} socle: {verdict} ({s['caveat']})")
    if "row_column_dims_agree" in r:
        lines.append(f"row and column relations give equal dimensions: {_ok(r['row_column_dims_agree'])}")
    red = r["redundant_relations"]
    lines.append("relations minimal in their own degree: " + ("yes" if not red else f"no, redundant {red}"))
    return "\n".join(lines) + "\n"


def cmd_search(args):
    hits = search(args.dimension, args.max_vertices, args.max_mult, args.ell_min, args.ell_max)
    if args.format == "json":
        return json.dumps([h.to_json() for h in hits], indent=2) + "\n"
    if args.format == "csv":
        return _csv(["M", "mu", "ell", "det_q", "factorization", "gk"],
                     [(json.dumps([list(r) for r in h.M]), json.dumps(list(h.mu)), h.ell, h.det,
                       h.factorization, h.gk) for h in hits])
    lines = [f"{len(hits)} candidates (dimension {args.dimension}, <= {args.max_vertices} vertices, "
             f"multiplicity <= {args.max_mult}, ell in [{args.ell_min}, {args.ell_max}])"]
    for h in hits:
        lines.append(f"M={[list(r) for r in h.M]} mu={list(h.mu)} ell={h.ell} GK={h.gk} det q = {h.factorization}")
    return "\n".join(lines) + "\n"


def cmd_plot_data(args):
    pts = hypocycloid_boundary(args.k, args.samples, args.scale)
    rows = [(f"{2 * math.pi * s / args.samples:.12g}", f"{z.real:.12g}", f"{z.imag:.12g}")
            for s, z in enumerate(pts)]
    out = _csv(["theta", "re", "im"], rows)
    if args.quiver:
        model = _load_model(args.quiver)
        rep = dim3_normal_criterion(model, args.tol)
        if rep.criterion_verdict.kind is VerdictKind.INAPPLICABLE:
            raise InvalidCYDatum(f"no eigenvalue overlay: {rep.criterion_verdict}")
        ell = model.cy.ell[0]
        out += "\n" + _csv(["re", "im", "verdict"], [
            (f"{d.real:.12g}", f"{d.imag:.12g}",
             "inside" if hypocycloid_contains(d, ell, z, args.tol) else "outside")
            for d, z, _ in rep.pairs])
    return out


def _nonneg(v):
    x = int(v)
    if x < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return x


def _pos(v):
    x = int(v)
    if x < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return x


def build_parser():
    p = argparse.ArgumentParser(prog="cygrowth", description="Growth of graded twisted Calabi-Yau algebras.")
    p.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--degree", "-D", type=_nonneg, default=12, help="truncation degree (default 12)")
    common.add_argument("--tol", type=float, default=1e-8, help="numeric tolerance (default 1e-8)")
    common.add_argument("--format", choices=["json", "csv", "text"], default=None,
                        help="output format (default csv for series and plot-data, text otherwise)")
    common.add_argument("--out", help="write output to this file")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="q(t), growth class and criteria for a quiver file")
    a.add_argument("quiver")
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("series", parents=[common], help="coefficients of q(t)^-1")
    s.add_argument("quiver")
    s.set_defaults(func=cmd_series)

    c = sub.add_parser("check", parents=[common], help="brute-force dimensions of kQ/I against q(t)^-1")
    c.add_argument("quiver")
    c.add_argument("relations")
    c.add_argument("--modulus", type=int, default=None, help="compute ranks over GF(p) instead of Q")
    c.set_defaults(func=cmd_check)

    e = sub.add_parser("search", parents=[common], help="enumerate small quivers with finite growth")
    e.add_argument("--dimension", type=int, choices=[1, 2, 3], default=3)
    e.add_argument("--max-vertices", type=_pos, default=3)
    e.add_argument("--max-mult", type=_pos, default=3)
    e.add_argument("--ell-min", type=_pos, default=3)
    e.add_argument("--ell-max", type=_pos, default=4)
    e.set_defaults(func=cmd_search)

    d = sub.add_parser("plot-data", parents=[common], help="hypocycloid boundary (and eigenvalues) as CSV")
    d.add_argument("quiver", nargs="?")
    d.add_argument("--k", type=int, choices=[3, 4], default=3)
    d.add_argument("--samples", type=int, default=360)
    d.add_argument("--scale", type=float, default=1.0)
    d.set_defaults(func=cmd_plot_data)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = "csv" if args.command in ("series", "plot-data") else "text"
    try:
        if getattr(args, "ell_min", 1) > getattr(args, "ell_max", 1):
            raise ParseError("--ell-min must not exceed --ell-max")
        if args.command == "plot-data" and args.samples < 3:
            raise ParseError("--samples must be at least 3")
        text = args.func(args)
    except CYGrowthError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
