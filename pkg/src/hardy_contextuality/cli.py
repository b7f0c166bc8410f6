"""Command-line front end.

Exit codes: 0 on success, 1 when a scenario fails validation or an
optimization finds no feasible point, 2 on usage errors or unreadable input.
Human tables print 6 decimals; json and csv print 12 significant digits.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import warnings
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

from . import bounds, graph, optimize, sampler, scenario
from .errors import ContextualityError

FORMATS: dict[str, tuple[str, ...]] = {
    "demo": ("text", "json"),
    "family": ("text", "json"),
    "bounds": ("text", "json", "csv"),
    "check": ("text", "json"),
    "optimize": ("text", "json"),
    "graph": ("dot", "json", "text"),
    "ks-block": ("text", "json", "dot"),
    "simulate": ("text", "json", "csv"),
}
_SUFFIX_FORMATS = {".json": "json", ".csv": "csv", ".dot": "dot", ".gv": "dot", ".txt": "text"}


class ValidationFailure(Exception):
    pass


class UsageFailure(Exception):
    pass


def num(x: float) -> float:
    """Round to 12 significant digits for machine-readable output."""
    return float(f"{x:.12g}")


def human(x: float) -> str:
    return f"{x:.6f}"


def as_fraction(x: float, max_den: int = 1000) -> str | None:
    frac = Fraction(x).limit_denominator(max_den)
    if frac.denominator > 1 and abs(float(frac) - x) < 1e-12:
        return f"{frac.numerator}/{frac.denominator}"
    return None


def vec_text(v) -> str:
    return "(" + ", ".join(f"{x:9.6f}" for x in v) + ")"


def table(rows: list[list[str]]) -> str:
    widths = [max(len(r[c]) for r in rows) for c in range(len(rows[0]))]
    return "\n".join(
        "  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in rows
    )


def odd_n(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if n < 5 or n % 2 == 0:
        raise argparse.ArgumentTypeError(f"n must be an odd integer >= 5, got {n}")
    return n


def positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def family_k(text: str) -> int:
    k = positive_int(text)
    if k < 2:
        raise argparse.ArgumentTypeError("k must be >= 2 (k=1 is degenerate)")
    return k


def _load(path: str) -> scenario.CycleScenario:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageFailure(f"cannot read scenario file {path}: {exc}") from exc
    if not isinstance(doc, dict) or not {"n", "state", "vectors"} <= doc.keys():
        raise UsageFailure(f"{path}: scenario document needs fields n, state, vectors")
    try:
        return scenario.scenario_from_dict(doc)
    except (ContextualityError, ValueError) as exc:
        raise ValidationFailure(f"{path}: {exc}") from exc


def _require_valid(s: scenario.CycleScenario) -> None:
    violations = scenario.validate_scenario(s)
    if violations:
        raise ValidationFailure(
            "scenario violates its invariants:\n" + "\n".join(f"  {v}" for v in violations)
        )


def _scenario_source(args) -> scenario.CycleScenario:
    if getattr(args, "scenario", None):
        return _load(args.scenario)
    if getattr(args, "k", None):
        return scenario.hardy_family(args.k)
    return scenario.pentagon()


def _scenario_rows(s: scenario.CycleScenario) -> list[list[str]]:
    rows = [["box", "vector"], ["eta", vec_text(s.state)]]
    rows += [[str(i), vec_text(s.vector(i))] for i in range(1, s.n + 1)]
    return rows


def _report_dict(rep: scenario.ConditionReport) -> dict[str, Any]:
    return {
        "condition_sums": [num(x) for x in rep.condition_sums],
        "hardy_prob": num(rep.hardy_prob),
        "cycle_sum": num(rep.cycle_sum),
        "all_satisfied": rep.all_satisfied,
    }


def _report_rows(s: scenario.CycleScenario, rep: scenario.ConditionReport) -> list[list[str]]:
    rows = [["quantity", "value"]]
    for j, x in enumerate(rep.condition_sums, start=1):
        rows.append([f"P(0,1|{2 * j - 1},{2 * j}) + P(0,1|{2 * j},{2 * j + 1})", human(x)])
    hardy = human(rep.hardy_prob)
    frac = as_fraction(rep.hardy_prob)
    rows.append([f"P(0,1|{s.n},1)", f"{hardy} (= {frac})" if frac else hardy])
    rows.append(["cycle sum", human(rep.cycle_sum)])
    rows.append(["noncontextual bound", str(bounds.nchv_cycle_bound_closed_form(s.n))])
    rows.append(["quantum bound", human(bounds.quantum_cycle_bound(s.n))])
    rows.append(["all conditions hold", "yes" if rep.all_satisfied else "no"])
    return rows


def _scenario_doc(s: scenario.CycleScenario, report: dict[str, Any]) -> dict[str, Any]:
    doc = scenario.scenario_to_dict(s)
    doc["report"] = report
    return doc


def cmd_demo(args) -> tuple[str, Any]:
    s = scenario.pentagon()
    rep = scenario.check_conditions(s)
    implication = bounds.nchv_implication_check(s.n)
    payload = {
        "scenario": scenario.scenario_to_dict(s),
        **_report_dict(rep),
        "nchv_hardy_prob": 0,
        "nchv_implication_holds": implication,
        "nchv_cycle_bound": bounds.nchv_cycle_bound(s.n),
        "quantum_cycle_bound": num(bounds.quantum_cycle_bound(s.n)),
    }
    text = "\n\n".join(
        [
            "Hardy-like contextuality on the pentagon (n = 5)",
            table(_scenario_rows(s)),
            table(_report_rows(s, rep)),
            "noncontextual models: conditions force P(0,1|5,1) = 0 "
            f"(checked over all 2^5 assignments: {'holds' if implication else 'FAILS'})",
        ]
    )
    return text, payload


def cmd_bounds(args) -> tuple[str, Any]:
    ns = args.n or list(range(5, 22, 2))
    rows = []
    for n in ns:
        if n <= bounds.MAX_ENUMERATION_N:
            nchv, method = bounds.nchv_cycle_bound(n), "enumeration"
        else:
            nchv, method = bounds.nchv_cycle_bound_closed_form(n), "closed-form"
        rows.append(
            {
                "n": n,
                "nchv_bound": nchv,
                "quantum_bound": num(bounds.quantum_cycle_bound(n)),
                "hardy_max_bound": num(bounds.hardy_max_bound(n)),
                "nchv_method": method,
            }
        )
    text = table(
        [["n", "nchv_bound", "quantum_bound", "hardy_max_bound"]]
        + [
            [str(r["n"]), str(r["nchv_bound"]), human(r["quantum_bound"]), human(r["hardy_max_bound"])]
            for r in rows
        ]
    )
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "nchv_bound", "quantum_bound", "hardy_max_bound"])
    for r in rows:
        writer.writerow([r["n"], r["nchv_bound"], repr(r["quantum_bound"]), repr(r["hardy_max_bound"])])
    return text, {"rows": rows, "_csv": buf.getvalue()}


def cmd_family(args) -> tuple[str, Any]:
    params = scenario.hardy_family_params(args.k)
    s = scenario.hardy_family(args.k)
    rep = scenario.check_conditions(s)
    residual = max(abs(float(s.vector(i) @ s.vector(j))) for i, j in s.contexts())
    closed = scenario.closed_form_hardy_prob(params)
    report = {
        "k": params.k,
        "phis": [num(x) for x in params.phis],
        "thetas": [num(x) for x in params.thetas],
        "deltas": [num(x) for x in params.deltas],
        "max_orthogonality_residual": num(residual),
        "closed_form_hardy_prob": num(closed),
        **_report_dict(rep),
    }
    angle_rows = [["j", "phi_j", "theta_j"]] + [
        [str(j), human(p), human(t)]
        for j, (p, t) in enumerate(zip(params.phis, params.thetas), start=1)
    ]
    text = "\n\n".join(
        [
            f"Hardy family k = {params.k} (n = {params.n})",
            table(angle_rows),
            table(_report_rows(s, rep)),
            f"closed-form P(0,1|{s.n},1) = {human(closed)}; "
            f"max orthogonality residual = {residual:.3e}",
        ]
    )
    return text, _scenario_doc(s, report)


def cmd_check(args) -> tuple[str, Any]:
    s = _load(args.scenario)
    _require_valid(s)
    rep = scenario.check_conditions(s)
    text = "\n\n".join([f"scenario {s.label} (n = {s.n})", table(_report_rows(s, rep))])
    return text, {"label": s.label, "n": s.n, **_report_dict(rep)}


def cmd_optimize(args) -> tuple[str, Any]:
    if args.objective == "hardy":
        res = optimize.optimize_hardy_max(args.n, args.starts, args.seed, args.tol, args.workers)
        target, bound = f"P(0,1|{args.n},1)", bounds.hardy_max_bound(args.n)
    else:
        res = optimize.optimize_cycle_max(args.n, args.starts, args.seed, args.tol, args.workers)
        target, bound = "cycle sum", bounds.quantum_cycle_bound(args.n)
    if res.objective <= optimize.INFEASIBLE_SCORE:
        raise ValidationFailure("optimizer found no feasible point")
    rep = scenario.check_conditions(res.best_scenario)
    report = {
        "objective_name": args.objective,
        "objective": num(res.objective),
        "upper_bound": num(bound),
        "starts_run": res.starts_run,
        "best_start_index": res.best_start_index,
        "converged": res.converged,
        "seed": args.seed,
        "params": [num(x) for x in res.params],
        "objective_history": [num(x) for x in res.objective_history],
        **_report_dict(rep),
    }
    rows = [
        ["quantity", "value"],
        [f"max {target}", human(res.objective)],
        ["upper bound", human(bound)],
        ["starts", str(res.starts_run)],
        ["best start", str(res.best_start_index)],
        ["converged", "yes" if res.converged else "no"],
    ]
    text = "\n\n".join([table(rows), table(_scenario_rows(res.best_scenario))])
    return text, _scenario_doc(res.best_scenario, report)


def _graph_text(g: graph.OrthogonalityGraph) -> str:
    rows = [["vertex", "vector"]] + [[label, vec_text(v)] for label, v in g.vertices]
    edges = ", ".join(f"{a}-{b}" for a, b in g.sorted_edges())
    return f"{table(rows)}\n\n{len(g.edges)} orthogonal pairs: {edges}"


def cmd_graph(args) -> tuple[str, Any]:
    if args.builtin == "ks-block":
        g = graph.build_graph(scenario.ks_block(), args.tol)
    else:
        s = _scenario_source(args)
        _require_valid(s)
        g = graph.build_graph(graph.scenario_vectors(s, args.include_state), args.tol)
    return _graph_text(g), g


def cmd_ks_block(args) -> tuple[str, Any]:
    g = graph.build_graph(scenario.ks_block(), args.tol)
    return _graph_text(g), g


def cmd_simulate(args) -> tuple[str, Any]:
    s = _scenario_source(args)
    _require_valid(s)
    rep = sampler.run_experiment(s, args.shots, args.seed)
    rows = []
    for i, j in s.contexts():
        for a, b in sampler.OUTCOMES:
            key = (i, j, a, b)
            rows.append(
                {
                    "i": i,
                    "j": j,
                    "a": a,
                    "b": b,
                    "count": rep.counts[key],
                    "estimate": num(rep.estimates[key]),
                    "standard_error": num(rep.standard_errors[key]),
                    "exact": num(s.prob(i, j, a, b)),
                }
            )
    payload = {
        "label": rep.label,
        "n": rep.n,
        "shots": rep.shots,
        "seed": rep.seed,
        "contexts": rows,
        "hardy_prob": num(rep.hardy_prob()),
        "cycle_sum": num(rep.cycle_sum()),
        "cycle_sum_standard_error": num(rep.cycle_sum_error()),
        "condition_sums": [num(x) for x in rep.condition_sums()],
    }
    text_rows = [["context", "outcome", "count", "estimate", "std err", "exact"]] + [
        [
            f"({r['i']},{r['j']})",
            f"({r['a']},{r['b']})",
            str(r["count"]),
            human(r["estimate"]),
            human(r["standard_error"]),
            human(r["exact"]),
        ]
        for r in rows
    ]
    summary = table(
        [
            ["quantity", "estimate"],
            [f"P(0,1|{s.n},1)", human(payload["hardy_prob"])],
            ["cycle sum", human(payload["cycle_sum"])],
        ]
        + [[f"condition {j}", human(x)] for j, x in enumerate(payload["condition_sums"], start=1)]
    )
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    payload["_csv"] = buf.getvalue()
    header = f"{rep.label}: {rep.shots} shots per context, seed {rep.seed}"
    return "\n\n".join([header, table(text_rows), summary]), payload


HANDLERS: dict[str, Callable] = {
    "demo": cmd_demo,
    "bounds": cmd_bounds,
    "family": cmd_family,
    "check": cmd_check,
    "optimize": cmd_optimize,
    "graph": cmd_graph,
    "ks-block": cmd_ks_block,
    "simulate": cmd_simulate,
}


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("text", "json", "csv", "dot"), default=None)
    p.add_argument("--out", metavar="PATH", help="write output here instead of stdout")


def _add_source(p: argparse.ArgumentParser, builtins: tuple[str, ...]) -> None:
    src = p.add_mutually_exclusive_group()
    src.add_argument("--scenario", metavar="PATH", help="scenario file (json)")
    src.add_argument("--builtin", choices=builtins, default=None)
    src.add_argument("--k", type=family_k, help="use the n = 4k+1 Hardy family")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hardy-ctx",
        description="Hardy-like contextuality on odd measurement cycles of a qutrit.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("demo", help="the pentagon argument end to end")
    _add_common(p)

    p = sub.add_parser("bounds", help="noncontextual and quantum cycle bounds")
    p.add_argument("--n", type=odd_n, nargs="+", help="odd cycle lengths (default 5..21)")
    _add_common(p)

    p = sub.add_parser("family", help="the n = 4k+1 Hardy family")
    p.add_argument("--k", type=family_k, required=True)
    _add_common(p)

    p = sub.add_parser("check", help="validate a scenario file and evaluate its conditions")
    p.add_argument("--scenario", metavar="PATH", required=True)
    _add_common(p)

    p = sub.add_parser("optimize", help="numerically maximize the Hardy probability")
    p.add_argument("--n", type=odd_n, required=True)
    p.add_argument("--starts", type=positive_int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--workers", type=positive_int, default=1)
    p.add_argument(
        "--objective",
        choices=("hardy", "cycle"),
        default="hardy",
        help="hardy: P(0,1|n,1) under the conditions; cycle: unconstrained cycle sum",
    )
    _add_common(p)

    p = sub.add_parser("graph", help="orthogonality graph of a scenario")
    _add_source(p, ("pentagon", "ks-block"))
    p.add_argument("--include-state", action="store_true", help="add the state as vertex 'eta'")
    p.add_argument("--tol", type=float, default=graph.EDGE_TOL)
    _add_common(p)

    p = sub.add_parser("ks-block", help="the eight-vector Kochen-Specker gadget")
    p.add_argument("--tol", type=float, default=graph.EDGE_TOL)
    _add_common(p)

    p = sub.add_parser("simulate", help="sample box openings for every context")
    _add_source(p, ("pentagon",))
    p.add_argument("--shots", type=positive_int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    _add_common(p)
    return parser


def _resolve_format(parser: argparse.ArgumentParser, args) -> str:
    fmt = args.format
    if fmt is None and args.out:
        fmt = _SUFFIX_FORMATS.get(Path(args.out).suffix.lower())
    if fmt is None:
        fmt = FORMATS[args.command][0]
    if fmt not in FORMATS[args.command]:
        parser.error(
            f"{args.command} does not support --format {fmt} "
            f"(choose from {', '.join(FORMATS[args.command])})"
        )
    return fmt


def render(payload: Any, text: str, fmt: str) -> str:
    if isinstance(payload, graph.OrthogonalityGraph):
        return text + "\n" if fmt == "text" else graph.export_graph(payload, fmt)
    if fmt == "text":
        return text + "\n"
    if fmt == "csv":
        return payload["_csv"]
    return json.dumps({k: v for k, v in payload.items() if k != "_csv"}, indent=2) + "\n"


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    fmt = _resolve_format(parser, args)
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            text, payload = HANDLERS[args.command](args)
        for w in caught:
            print(f"warning: {w.message}", file=sys.stderr)
        out = render(payload, text, fmt)
    except UsageFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValidationFailure, ContextualityError) as exc:
        print(f"validation failed: {exc}", file=sys.stderr)
        return 1
    if args.out:
        try:
            Path(args.out).write_text(out)
        except OSError as exc:
            print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
            return 2
    else:
        sys.stdout.write(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
