"""Batch front end: read a structured example file, run computations,
print a text report and optionally write a machine-readable JSON report.

One file holds one example.  Exit codes: 0 all verdicts pass, 1 a
mathematical verdict failed (including gluing/validation failures),
2 input or schema error.  The JSON report is deterministic (sorted keys,
no timings); wall-clock timings go to stdout only.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import cechp1, hochserre, koszul, lierinehart
from .complexes import (
    CochainComplex,
    DoubleComplex,
    FilteredComplex,
    betti,
    column_filtration,
    row_filtration,
)
from .exactla import ExactMatrix, Subspace
from .specseq import check_convergence, run as ss_run


class SchemaError(Exception):
    pass


def _grid_key(pq) -> str:
    return f"{pq[0]},{pq[1]}"


def _grid_json(grid: dict) -> dict:
    return {_grid_key(k): v for k, v in sorted(grid.items())}


def _format_grid(grid: dict, title: str) -> list[str]:
    lines = [title]
    if not grid:
        lines.append("  (empty)")
        return lines
    ps = sorted({p for p, _ in grid})
    qs = sorted({q for _, q in grid}, reverse=True)
    header = "  q\\p " + " ".join(f"{p:>4}" for p in ps)
    lines.append(header)
    for q in qs:
        lines.append(f"  {q:>3} " + " ".join(f"{grid.get((p, q), 0):>4}" for p in ps))
    return lines


def _need(payload: dict, key: str):
    if key not in payload:
        raise SchemaError(f"missing field {key!r}")
    return payload[key]


def _matrix(data, rows: int, cols: int) -> ExactMatrix:
    if len(data) != rows or any(len(r) != cols for r in data):
        raise SchemaError(f"matrix must be {rows}x{cols}")
    return ExactMatrix.from_rows(data)


# -- builders per kind ---------------------------------------------------------


def build_lie_algebra(payload: dict):
    dim = int(_need(payload, "dim"))
    g = hochserre.LieAlgebra(dim, payload.get("brackets", {}))
    ideal = None
    if "ideal" in payload:
        ideal = hochserre.LieIdeal(g, Subspace(dim, payload["ideal"]))
    if "module" in payload:
        mdata = payload["module"]
        mdim = int(_need(mdata, "dim"))
        actions = [_matrix(a, mdim, mdim) for a in _need(mdata, "actions")]
        if len(actions) != dim:
            raise SchemaError("module needs one action matrix per generator")
        module = hochserre.GModule(g, mdim, actions)
    else:
        module = hochserre.GModule.trivial(g)
    return g, ideal, module


def build_lie_rinehart(payload: dict):
    weights = _need(payload, "variable_weights")
    ring = lierinehart.WeightedPolyRing(len(weights), tuple(int(w) for w in weights))
    lr = lierinehart.LieRinehartPresentation(
        ring,
        _need(payload, "generator_weights"),
        _need(payload, "anchor"),
        payload.get("brackets", {}),
    )
    section = None
    if "section" in payload:
        section = lierinehart.SectionV(lr, payload["section"])
    return lr, section


def build_p1(payload: dict):
    algebroid = cechp1.atiyah_algebroid(int(_need(payload, "degree")))
    section = cechp1.EquivariantSection(
        algebroid,
        tuple(_need(payload, "vector_field")),
        payload.get("scalar_part"),
    )
    untwisted = bool(payload.get("untwisted", False))
    window = int(payload.get("window", 2))
    return algebroid, section, untwisted, window


def build_raw_complex(payload: dict):
    dims = [int(d) for d in _need(payload, "dims")]
    lo = int(payload.get("lo", 0))
    hi = lo + len(dims) - 1
    diffs = []
    for i, mat in enumerate(_need(payload, "differentials")):
        diffs.append(_matrix(mat, dims[i + 1], dims[i]))
    if len(diffs) != len(dims) - 1:
        raise SchemaError("need one differential per adjacent pair of degrees")
    return CochainComplex(lo, hi, dims, diffs)


def build_raw_double(payload: dict) -> DoubleComplex:
    block = _need(payload, "double")
    p_lo, p_hi = int(_need(block, "p_lo")), int(_need(block, "p_hi"))
    q_lo, q_hi = int(_need(block, "q_lo")), int(_need(block, "q_hi"))
    dims = {}
    for key, d in _need(block, "dims").items():
        p, q = (int(t) for t in key.split(","))
        dims[(p, q)] = int(d)

    def read_maps(field, shape):
        out = {}
        for key, mat in block.get(field, {}).items():
            p, q = (int(t) for t in key.split(","))
            rows, cols = shape(p, q)
            out[(p, q)] = _matrix(mat, rows, cols)
        return out

    horiz = read_maps("horizontal",
                      lambda p, q: (dims.get((p + 1, q), 0), dims.get((p, q), 0)))
    vert = read_maps("vertical",
                     lambda p, q: (dims.get((p, q + 1), 0), dims.get((p, q), 0)))
    if block.get("commuting", False):
        return DoubleComplex.from_commuting(p_lo, p_hi, q_lo, q_hi, dims, horiz, vert)
    return DoubleComplex(p_lo, p_hi, q_lo, q_hi, dims, horiz, vert)


def build_raw_filtration(payload: dict, cplx: CochainComplex) -> FilteredComplex:
    block = _need(payload, "filtration")
    p_lo, p_hi = int(_need(block, "p_lo")), int(_need(block, "p_hi"))
    levels = {}
    for key, vectors in _need(block, "spaces").items():
        p, n = (int(t) for t in key.split(","))
        levels[(p, n)] = Subspace(cplx.dim(n), vectors)
    return FilteredComplex(cplx, p_lo, p_hi, levels)


# -- command handlers -----------------------------------------------------------


def cmd_validate(payload: dict, args) -> tuple[dict, bool, list[str]]:
    kind = payload["kind"]
    lines = []
    if kind == "lie_algebra":
        build_lie_algebra(payload)  # constructors check all identities
        lines.append("all identities hold (antisymmetry, Jacobi, ideal, module)")
        return {"verdict": "pass"}, True, lines
    if kind == "lie_rinehart":
        lr, _ = build_lie_rinehart(payload)
        w_max = int(payload.get("validate_weight", 2))
        report = lierinehart.validate(lr, w_max)
        if report.ok:
            lines.append(f"all identities hold up to weight {w_max}")
        else:
            for f in report.failures:
                lines.append(f"FAILED {f.identity}: {f.witness}")
        return (
            {"verdict": "pass" if report.ok else "fail",
             "failures": [{"identity": f.identity, "witness": f.witness}
                          for f in report.failures]},
            report.ok,
            lines,
        )
    raise SchemaError(f"validate does not apply to kind {kind!r}")


def cmd_cohomology(payload: dict, args) -> tuple[dict, bool, list[str]]:
    kind = payload["kind"]
    lines = []
    if kind == "raw_complex":
        cplx = build_raw_complex(payload)
        dims = betti(cplx)
        lines.append("cohomology dims: " +
                     " ".join(f"H^{k}={v}" for k, v in sorted(dims.items())))
        return {"betti": {str(k): v for k, v in sorted(dims.items())}}, True, lines
    if kind == "lie_algebra":
        g, _, module = build_lie_algebra(payload)
        dims = betti(hochserre.ce_complex(g, module))
        lines.append("cohomology dims: " +
                     " ".join(f"H^{k}={v}" for k, v in sorted(dims.items())))
        return {"betti": {str(k): v for k, v in sorted(dims.items())}}, True, lines
    if kind == "lie_rinehart":
        lr, _ = build_lie_rinehart(payload)
        lo, hi = _weight_range(payload, args)
        table = {}
        for w in range(lo, hi + 1):
            dims = betti(lierinehart.omega_slice_complex(lr, w))
            table[str(w)] = {str(k): v for k, v in sorted(dims.items())}
            lines.append(f"weight {w}: " +
                         " ".join(f"H^{k}={v}" for k, v in sorted(dims.items())))
        return {"betti_per_weight": table}, True, lines
    raise SchemaError(f"cohomology does not apply to kind {kind!r}")


def _weight_range(payload: dict, args) -> tuple[int, int]:
    rng = getattr(args, "weights", None) or payload.get("weights")
    if rng is None:
        return 0, 3
    if isinstance(rng, str):
        lo, hi = rng.split("..")
        return int(lo), int(hi)
    lo, hi = rng
    return int(lo), int(hi)


def cmd_specseq(payload: dict, args) -> tuple[dict, bool, list[str]]:
    if payload["kind"] != "raw_complex":
        raise SchemaError("specseq applies to kind 'raw_complex'")
    if "double" in payload:
        double = build_raw_double(payload)
        filt = (column_filtration(double) if args.filtration == "column"
                else row_filtration(double))
    else:
        cplx = build_raw_complex(payload)
        filt = build_raw_filtration(payload, cplx)
    result = ss_run(filt)
    convergent = check_convergence(filt)
    lines = []
    pages_out = {}
    max_page = args.max_page if args.max_page is not None else len(result.pages) - 1
    for page in result.pages:
        if page.r > max_page:
            break
        grid = page.nonzero_dims()
        pages_out[str(page.r)] = _grid_json(grid)
        lines.extend(_format_grid(grid, f"page r={page.r}:"))
    lines.append(f"stable page: {result.stable_page}; "
                 f"degeneration page: {result.degeneration_page}; "
                 f"convergent: {convergent}")
    report = {
        "pages": pages_out,
        "stable_page": result.stable_page,
        "degeneration_page": result.degeneration_page,
        "convergent": convergent,
        "infinity_totals": {str(k): v for k, v in sorted(result.infinity_totals().items())},
    }
    return report, convergent, lines


def cmd_koszul(payload: dict, args) -> tuple[dict, bool, list[str]]:
    if payload["kind"] != "lie_rinehart":
        raise SchemaError("koszul applies to kind 'lie_rinehart'")
    lr, section = build_lie_rinehart(payload)
    if section is None:
        raise SchemaError("koszul needs a 'section' field")
    lo, hi = _weight_range(payload, args)
    weights = range(lo, hi + 1)
    lines = []
    slice_dims = {}
    for w in weights:
        dims = betti(koszul.lie_koszul(lr, section, w).complex)
        slice_dims[str(w)] = {str(k): v for k, v in sorted(dims.items())}
        lines.append(f"weight {w}: " +
                     " ".join(f"H^{k}={v}" for k, v in sorted(dims.items())))
    if "dim_y" in payload:
        dim_y = int(payload["dim_y"])
        dim_y_source = "asserted"
    else:
        try:
            dim_y = 0 if koszul.is_zero_dimensional(section, hi + 2) else None
        except koszul.InconclusiveError:
            dim_y = None
        dim_y_source = "certified" if dim_y == 0 else "unknown"
    formality = koszul.formality_check(lr, section, weights)
    lines.append(f"formality: {'pass' if formality.ok else 'fail'}")
    if not formality.ok:
        lines.append(f"  first failing weight: {formality.first_failure.w}")
    ok = formality.ok
    report = {
        "slice_cohomology": slice_dims,
        "dim_y": dim_y,
        "dim_y_source": dim_y_source,
        "formality": formality.ok,
        "formality_per_weight": {str(s.w): s.ok for s in formality.slices},
    }
    if dim_y is not None:
        vr = koszul.vanishing_check(lr, section, dim_y, weights)
        report["vanishing"] = vr.ok
        report["vanishing_violations"] = [list(v) for v in vr.violations]
        lines.append(f"vanishing above dim Y={dim_y}: {'pass' if vr.ok else 'fail'}")
        ok = ok and vr.ok
    return report, ok, lines


def cmd_hs(payload: dict, args) -> tuple[dict, bool, list[str]]:
    if payload["kind"] != "lie_algebra":
        raise SchemaError("hs applies to kind 'lie_algebra'")
    g, ideal, module = build_lie_algebra(payload)
    if ideal is None:
        raise SchemaError("hs needs an 'ideal' field")
    filtered = hochserre.hs_filtered(g, ideal, module)
    expected = hochserre.expected_e2(g, ideal, module)
    from .specseq import compute_page
    page2 = {pq: d for pq, d in compute_page(filtered, 2).dims().items() if d}
    result = ss_run(filtered)
    totals = result.infinity_totals()
    target = betti(hochserre.ce_complex(g, module))
    verdict = hochserre.verify(g, ideal, module)
    lines = _format_grid({k: v for k, v in expected.items() if v}, "expected E2 grid:")
    lines.extend(_format_grid(page2, "computed E2 grid:"))
    lines.append("limit totals:  " + " ".join(f"H^{k}={v}" for k, v in sorted(totals.items())))
    lines.append("direct betti:  " + " ".join(f"H^{k}={v}" for k, v in sorted(target.items())))
    lines.append(f"verdict: {'pass' if verdict else 'fail'}")
    report = {
        "expected_e2": _grid_json({k: v for k, v in expected.items() if v}),
        "computed_e2": _grid_json(page2),
        "infinity_totals": {str(k): v for k, v in sorted(totals.items())},
        "betti": {str(k): v for k, v in sorted(target.items())},
        "verdict": verdict,
    }
    return report, verdict, lines


def cmd_p1(payload: dict, args) -> tuple[dict, bool, list[str]]:
    if payload["kind"] != "p1_bundle":
        raise SchemaError("p1 applies to kind 'p1_bundle'")
    algebroid, section, untwisted, window = build_p1(payload)
    if args.window is not None:
        window = args.window
    lines = [f"degree {algebroid.degree}, window {window}"
             + (", untwisted" if untwisted else "")]
    fp = cechp1.first_page(algebroid, window, section, untwisted)
    lines.extend(_format_grid({k: v for k, v in fp.grid.items() if v},
                              "first page (wedge p, cech q):"))
    d1 = {k: v for k, v in fp.d1_ranks.items() if v}
    lines.append(f"observed d1 ranks: {_grid_json(d1) if d1 else 'all zero'}")
    hdims = cechp1.equivariant_H(algebroid, section, window, untwisted)
    lines.append("equivariant cohomology: " +
                 " ".join(f"H^{k}={v}" for k, v in sorted(hdims.items())))
    assumption = cechp1.assumption_check(algebroid, section)
    lines.append(f"assumption (simple zeros): {assumption}")
    ok = fp.consistent
    report = {
        "degree": algebroid.degree,
        "untwisted": untwisted,
        "window": window,
        "first_page": _grid_json(fp.grid),
        "d1_ranks": _grid_json(fp.d1_ranks),
        "equivariant_h": {str(k): v for k, v in sorted(hdims.items())},
        "assumption": assumption,
    }
    if assumption:
        cor = cechp1.corollary_check(algebroid, section, window, untwisted)
        lines.append(f"fixed points: {[str(p) for p in cor.fixed_points]}")
        lines.append(f"fixed-point prediction: "
                     + " ".join(f"H^{k}={v}" for k, v in sorted(cor.predicted.items())))
        lines.append(f"corollary match: {cor.match}")
        report["fixed_points"] = [str(p) for p in cor.fixed_points]
        report["corollary_predicted"] = {str(k): v for k, v in sorted(cor.predicted.items())}
        report["corollary_match"] = cor.match
        ok = ok and cor.match
    degen = cechp1.second_page_degeneration(algebroid, section, window, untwisted)
    lines.append(f"degeneration page: {degen.degeneration_page}; "
                 f"E2 = Einf: {degen.e2_dims == degen.einf_dims}; "
                 f"convergent: {degen.convergent}")
    report["degeneration_page"] = degen.degeneration_page
    report["degeneration_ok"] = degen.ok
    report["e2"] = _grid_json(degen.e2_dims)
    ok = ok and degen.ok
    return report, ok, lines


COMMANDS = {
    "validate": cmd_validate,
    "cohomology": cmd_cohomology,
    "specseq": cmd_specseq,
    "koszul": cmd_koszul,
    "hs": cmd_hs,
    "p1": cmd_p1,
}

MATH_ERRORS = (
    lierinehart.PresentationError,
    hochserre.LieAlgebraError,
    koszul.ZeroLocusError,
    cechp1.GluingError,
    cechp1.WindowError,
    cechp1.IrrationalZeroError,
)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="liekoszul",
        description="Exact homological computations from structured example files.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("file")
        p.add_argument("--json", dest="json_out", default=None,
                       help="write the machine-readable report to this path")
        if name == "specseq":
            p.add_argument("--filtration", choices=["row", "column"], default="column")
            p.add_argument("--max-page", type=int, default=None)
        if name == "koszul":
            p.add_argument("--weights", default=None, help="weight range a..b")
        if name == "p1":
            p.add_argument("--window", type=int, default=None)
    args = parser.parse_args(argv)

    started = time.monotonic()
    try:
        with open(args.file, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read example file: {exc}", file=sys.stderr)
        return 2
    if not isinstance(payload, dict) or "kind" not in payload:
        print("error: example file must be an object with a 'kind' field",
              file=sys.stderr)
        return 2

    try:
        report_body, ok, lines = COMMANDS[args.command](payload, args)
    except (SchemaError, KeyError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except MATH_ERRORS as exc:
        print(f"verdict failure: {exc}", file=sys.stderr)
        return 1

    name = payload.get("name", args.file)
    print(f"== {args.command} {name} ==")
    for line in lines:
        print(line)
    print(f"result: {'pass' if ok else 'FAIL'}")
    print(f"elapsed: {time.monotonic() - started:.3f}s")

    if args.json_out:
        report = {
            "tool": "liekoszul",
            "command": args.command,
            "example": name,
            "ok": ok,
            "report": report_body,
        }
        with open(args.json_out, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
