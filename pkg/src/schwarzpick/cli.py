"""Command-line front end.

Usage::

    schwarzpick <command> problem.json [options]

Exit status is 0 on success, 2 on invalid input and 3 when the mathematics
refuses the request (for example ``solve`` on data without a strict
solution); the report is still written in the last case.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .construct import audit_f1_properties, necessity_stress
from .errors import DegenerateNodesError, SolverRefusal
from .hyperbolic import hyperbolic_lattice
from .quotients import (_build_tables, _ratio_sweep, column_condition_check, epsilon_of,
                        resolve_permutations)
from .report import ProblemError, Report, parse_problem, to_jsonable
from .sampling import make_test_family, sampling_constant
from .sequences import DEFAULT_ALPHA_GRID, density_constant, fit_density, layer_sup, order_check
from .solver import denjoy_sum, schur_solve, solvability

COMMANDS = ("triangle", "solve", "solvable", "denjoy", "analyze", "density", "sampling", "stress", "audit")
EXIT_OK, EXIT_INPUT, EXIT_REFUSED = 0, 2, 3


class UsageError(ValueError):
    pass


class Output:
    """What a command hands back to the dispatcher."""

    def __init__(self, results, csv_header=None, csv_rows=(), figure=None, warnings=(), status=EXIT_OK):
        self.results = results
        self.csv_header = csv_header
        self.csv_rows = list(csv_rows)
        self.figure = figure
        self.warnings = list(warnings)
        self.status = status


def _need_values(problem):
    if problem.values is None:
        raise UsageError("this command needs a values list in the problem file")
    return problem.values


def _need_seed(args):
    if args.seed is None:
        raise UsageError(f"{args.command} is randomised and requires an explicit --seed")
    return args.seed


def _complex_flag(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def _alpha_grid(text: str):
    try:
        grid = tuple(float(a) for a in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad alpha grid {text!r}") from None
    if not grid or any(not 0 < a < 1 for a in grid):
        raise argparse.ArgumentTypeError("alpha grid values must lie in (0, 1)")
    return grid


def _permutations(text: str):
    if text in ("all", "identity"):
        return text
    try:
        count = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("--permutations takes 'all', 'identity' or a count") from None
    if count < 1:
        raise argparse.ArgumentTypeError("--permutations count must be positive")
    return count


def _verdict_dict(v):
    return {
        "status": v.status,
        "criteria": dict(v.criteria),
        "margin": v.margin,
        "max_modulus": v.max_modulus,
        "pick_min_eigenvalue": v.pick_min_eigenvalue,
    }


# -- commands --------------------------------------------------------------

def cmd_triangle(problem, args):
    w = _need_values(problem)
    z = problem.nodes
    n = z.size
    mode = args.permutations
    if isinstance(mode, int):
        _need_seed(args)
    orders, exhaustive = resolve_permutations(mode, n, seed=args.seed or 0)
    table, sat, poi = _build_tables(z[orders], w[orders])
    triangles, rows = [], []
    for p, order in enumerate(orders):
        entries = []
        for r in range(n):
            for k in range(r + 1):
                val = complex(table[p, k, r])
                entries.append({"k": k, "j": r + 1, "value": val, "modulus": abs(val),
                                "saturated": bool(sat[p, k, r]), "poisoned": bool(poi[p, k, r])})
                rows.append([p, k, r + 1, val.real, val.imag, abs(val), int(sat[p, k, r]), int(poi[p, k, r])])
        triangles.append({"order": order.tolist(), "entries": entries})
    if n >= 2:
        eps, witness, infinite, per_level = _ratio_sweep(z, w, orders)
    else:
        eps, witness, infinite, per_level = 0.0, None, False, {}
    results = {
        "triangles": triangles,
        "permutations_checked": len(orders),
        "exhaustive": bool(exhaustive),
        "epsilon_min": eps,
        "epsilon_infinite": infinite,
        "epsilon_per_level": per_level,
        "worst_witness": None if witness is None else
        {"k": witness[0], "i": witness[1], "j": witness[2], "order": list(witness[3])},
    }

    def figure(path):
        from .plotting import triangle_figure
        triangle_figure(np.abs(table[0]), path)

    header = ["order_index", "k", "j", "re", "im", "modulus", "saturated", "poisoned"]
    return Output(results, header, rows, figure)


def cmd_solvable(problem, args):
    v = solvability(problem.nodes, _need_values(problem))
    return Output(_verdict_dict(v))


def cmd_solve(problem, args):
    z, w = problem.nodes, _need_values(problem)
    try:
        chain = schur_solve(z, w, g0=args.g0)
    except SolverRefusal as exc:
        return Output({"verdict": _verdict_dict(exc.verdict)},
                      warnings=[str(exc)], status=EXIT_REFUSED)
    grid = hyperbolic_lattice(args.grid_step or 0.1, args.grid_radius or 4.0)
    residual = float(np.max(np.abs(chain(z) - w)))
    gvals = chain(grid)
    results = {
        "verdict": _verdict_dict(solvability(z, w)),
        "chain": {
            "nodes": chain.nodes,
            "diagonal": chain.diagonal,
            "g0": chain.g0,
            "initial_tag": chain.initial_tag,
            "level_constant": chain.level_constant,
        },
        "interpolation_residual": residual,
        "grid_sup": float(np.max(np.abs(gvals))),
        "grid_points": int(grid.size),
    }
    rows = [[i, zi.real, zi.imag, complex(chain(zi)).real, complex(chain(zi)).imag, wi.real, wi.imag]
            for i, (zi, wi) in enumerate(zip(z, w))]

    def figure(path):
        from .plotting import disc_figure
        disc_figure(grid, path, colour=np.abs(gvals), title="|g| on the grid")

    return Output(results, ["node", "z_re", "z_im", "g_re", "g_im", "w_re", "w_im"], rows, figure)


def cmd_denjoy(problem, args):
    res = denjoy_sum(problem.nodes, _need_values(problem))
    results = {"partial_sums": res.partial_sums, "terms": res.terms,
               "saturated": res.saturated, "saturated_at": res.saturated_at}
    rows = [[i + 1, t, s] for i, (t, s) in enumerate(zip(res.terms, res.partial_sums))]

    def figure(path):
        from .plotting import series_figure
        x = list(range(1, len(res.partial_sums) + 1))
        series_figure(x, {"partial sum": res.partial_sums, "term": res.terms}, path, "n", "value")

    warnings = [f"diagonal saturated at n = {res.saturated_at}"] if res.saturated else []
    return Output(results, ["n", "term", "partial_sum"], rows, figure, warnings)


def _layer_output(results, z, depth, alpha):
    sup = layer_sup(z, depth)
    m = np.arange(1, depth + 1)
    rows = [[int(mi), int(s), float(s * 2.0 ** (-alpha * mi)) if math.isfinite(alpha) else "inf"]
            for mi, s in zip(m, sup)]
    results["layer_sup"] = sup

    def figure(path):
        from .plotting import series_figure
        ys = {"worst layer count": np.maximum(sup, 0.5)}
        if math.isfinite(alpha) and math.isfinite(results["carleson_M"]):
            ys[f"M 2^(alpha m), alpha={alpha}"] = results["carleson_M"] * 2.0 ** (alpha * m)
        series_figure(m, ys, path, "layer m", "count", logy=True)

    return rows, figure


def cmd_density(problem, args):
    z = problem.nodes
    depth = args.depth or 8
    grid = args.alpha_grid or DEFAULT_ALPHA_GRID
    M, alpha = fit_density(z, depth, grid)
    results = {"carleson_M": M, "carleson_alpha": alpha, "depth": depth,
               "alpha_grid": list(grid),
               "M_by_alpha": {str(a): density_constant(z, a, depth) for a in grid}}
    rows, figure = _layer_output(results, z, depth, alpha)
    warnings = [] if math.isfinite(alpha) else ["no alpha on the grid bounds the layer counts"]
    return Output(results, ["m", "layer_sup", "scaled"], rows, figure, warnings)


def cmd_analyze(problem, args):
    z = problem.nodes
    depth = args.depth or 8
    rep = order_check(z, args.order, args.eta, depth, args.alpha_grid or DEFAULT_ALPHA_GRID,
                      probe_radius_beta=args.probe_radius, grid_step_beta=args.grid_step or 0.1)
    results = to_jsonable(rep)
    rows, figure = _layer_output(results, z, depth, rep.carleson_alpha)
    warnings = []
    if not rep.condition_a:
        warnings.append(f"condition (a) fails: {rep.part_count} parts for order {rep.order}")
    if not rep.condition_b:
        warnings.append("condition (b) fails on the alpha grid")
    return Output(results, ["m", "layer_sup", "scaled"], rows, figure, warnings)


def cmd_sampling(problem, args):
    seed = _need_seed(args)
    family = make_test_family(seed, args.family_size, args.max_degree)
    radius = args.grid_radius or 8.0
    step = args.grid_step or 0.05
    rep = sampling_constant(problem.nodes, family, radius, step)
    results = to_jsonable(rep)
    results["seed"] = seed
    rows = [[m["index"], m["capacity"], m["sup_ratio"], m["ratio"]] for m in rep.members]
    warnings = [f"member {e['index']} excluded: {e['reason']}" for e in rep.excluded]

    def figure(path):
        from .plotting import series_figure
        ratios = sorted(m["ratio"] for m in rep.members)
        series_figure(list(range(len(ratios))), {"sup ratio / N(f)": ratios}, path,
                      "family member (sorted)", "ratio")

    return Output(results, ["member", "capacity", "sup_ratio", "ratio"], rows, figure, warnings)


def cmd_stress(problem, args):
    z = problem.nodes
    case = necessity_stress(z, args.eps, args.C)
    bound = args.eps * args.C
    subsets = []
    ok_all = True
    for sub in itertools.combinations(range(z.size), z.size - 1):
        idx = list(sub)
        rep = epsilon_of(z[idx], case.values[idx]) if len(idx) >= 2 else None
        relabelled = [i for i in case.order if i in sub]
        col_ok, col_wit = column_condition_check(z[relabelled], case.values[relabelled], bound,
                                                 "identity", rtol=1e-12)
        passed = rep is None or rep.epsilon_min <= bound * (1 + 1e-12)
        ok_all &= passed
        subsets.append({
            "subset": idx,
            "epsilon_min": 0.0 if rep is None else rep.epsilon_min,
            "permutations_checked": 0 if rep is None else rep.permutations_checked,
            "passes": bool(passed),
            "column_max_in_construction_order": col_wit[3] if col_wit else 0.0,
            "column_passes_in_construction_order": bool(col_ok),
        })
    verdict = solvability(z, case.values)
    results = {"values": case.values, "order": list(case.order), "x": case.x,
               "eps": args.eps, "C": args.C, "bound": bound,
               "subsets": subsets, "all_subsets_pass": bool(ok_all),
               "full_verdict": _verdict_dict(verdict)}
    rows = [[s["subset"].__str__(), s["epsilon_min"], int(s["passes"])] for s in subsets]
    return Output(results, ["subset", "epsilon_min", "passes"], rows)


def cmd_audit(problem, args):
    z, w = problem.nodes, _need_values(problem)
    try:
        f1 = schur_solve(z, w)
    except SolverRefusal as exc:
        return Output({"verdict": _verdict_dict(exc.verdict)}, warnings=[str(exc)], status=EXIT_REFUSED)
    audit = audit_f1_properties(f1, z, args.eta, args.eps,
                                grid_radius_beta=args.grid_radius or 3.0,
                                grid_step_beta=args.grid_step or 0.1)
    results = {"f1": "Schur chain through the problem data", **to_jsonable(audit),
               "eta1": args.eta, "eps": args.eps}
    warnings = [f"{audit.excluded_prop1} grid points skipped (1 - |f1| < 1e-9)"] if audit.excluded_prop1 else []
    return Output(results, warnings=warnings)


HANDLERS = {
    "triangle": cmd_triangle, "solve": cmd_solve, "solvable": cmd_solvable, "denjoy": cmd_denjoy,
    "analyze": cmd_analyze, "density": cmd_density, "sampling": cmd_sampling,
    "stress": cmd_stress, "audit": cmd_audit,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="schwarzpick",
                                     description="Multi-point Schwarz-Pick and Nevanlinna-Pick toolkit")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("input", help="problem file (JSON)")
    parser.add_argument("--seed", type=int, default=None, help="seed for randomised commands")
    parser.add_argument("--grid-radius", type=float, default=None, help="beta-radius of evaluation grids")
    parser.add_argument("--grid-step", type=float, default=None, help="beta-spacing of evaluation grids")
    parser.add_argument("--alpha-grid", type=_alpha_grid, default=None, help="comma-separated alphas in (0,1)")
    parser.add_argument("--depth", type=int, default=None, help="dyadic square depth (default 8)")
    parser.add_argument("--permutations", type=_permutations, default="identity",
                        help="'identity' (default), 'all' or a count of orders")
    parser.add_argument("--order", type=int, default=2, help="n for the order n-1 audit (analyze)")
    parser.add_argument("--eta", type=float, default=0.5, help="separation target / audit radius")
    parser.add_argument("--eps", type=float, default=0.1, help="compatibility constant")
    parser.add_argument("--C", type=float, default=0.25, help="stress constant in (0,1)")
    parser.add_argument("--g0", type=_complex_flag, default=0j, help="constant seed of the Schur chain")
    parser.add_argument("--probe-radius", type=float, default=None, help="R-density probe radius (analyze)")
    parser.add_argument("--family-size", type=int, default=100)
    parser.add_argument("--max-degree", type=int, default=3)
    parser.add_argument("--out", type=Path, default=None, help="write the report here instead of stdout")
    parser.add_argument("--csv", type=Path, default=None, help="CSV sidecar with plot data")
    parser.add_argument("--figure", type=Path, default=None, help="PNG figure of the plot data")
    return parser


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        text = Path(args.input).read_text()
    except OSError as exc:
        print(f"error: cannot read {args.input}: {exc.strerror}", file=stderr)
        return EXIT_INPUT
    try:
        problem = parse_problem(text)
        out = HANDLERS[args.command](problem, args)
    except (ProblemError, UsageError, DegenerateNodesError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    params = {k: v for k, v in sorted(vars(args).items())
              if k not in ("command", "input", "out", "csv", "figure")}
    report = Report(args.command, problem.digest, to_jsonable(params), to_jsonable(out.results), out.warnings)
    text = report.to_json()
    if args.out:
        args.out.write_text(text)
    else:
        stdout.write(text)
    if args.csv and out.csv_header:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(out.csv_header)
        writer.writerows(out.csv_rows)
        args.csv.write_text(buf.getvalue())
    if args.figure and out.figure:
        out.figure(args.figure)
    return out.status


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
