"""
Command-line interface.

Subcommands: ``constants``, ``bound``, ``certify``, ``simulate`` and
``compare-fickett``. Exit codes: 0 success / certified, 1 parse or usage
error, 2 inadmissible epsilon, 3 bound violated.

``simulate --per-trial FILE`` writes CSV with columns
``index,seed,epsilon_measured,sup_deviation,bound,ratio,certified,coordinate_violations``.
"""
import argparse
import csv
import io
import json
import sys

import numpy as np

from .constants import Mode, build_constant_table, epsilon_sup
from .errors import GenerationError, InvalidInputError
from .harness import ExperimentConfig, run_experiment
from .pointmap_io import PointMapParseError, format_real, read_point_map
from .stability import (
    Verdict,
    bound_polynomial,
    certify,
    crossover_epsilon,
    fickett_bound,
    linear_majorant,
    stability_bound_coefficient,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INADMISSIBLE = 2
EXIT_VIOLATED = 3

VERDICT_EXIT = {
    Verdict.CERTIFIED: EXIT_OK,
    Verdict.INADMISSIBLE_EPSILON: EXIT_INADMISSIBLE,
    Verdict.BOUND_VIOLATED: EXIT_VIOLATED,
}

PER_TRIAL_COLUMNS = ["index", "seed", "epsilon_measured", "sup_deviation", "bound", "ratio",
                     "certified", "coordinate_violations"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _csv(rows):
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _json(obj):
    return json.dumps(obj, indent=2) + "\n"


def _table(n, mode):
    if n < 3:
        raise UsageError(f"--n must be >= 3, got {n}")
    return build_constant_table(n, mode)


def _check_d(d):
    if not d >= 1:
        raise UsageError(f"--d must be >= 1, got {d}")


def poly_string(coeffs):
    a, b, c = coeffs
    return f"{a}*d^2 + {b}*d + {c}"


def cmd_constants(n, mode="paper", fmt="text"):
    table = _table(n, mode)
    budget = epsilon_sup(table)
    eps = budget.eps_sup
    if fmt == "csv":
        rows = [["kind", "i", "j", "value"]]
        rows += [["c", i, j, table.entry(i, j)] for i in range(1, n + 1) for j in range(1, i + 1)]
        rows.append(["sigma", "", "", budget.sigma])
        rows.append(["eps_sup", "", "", f"{eps.numerator}/{eps.denominator}"])
        rows.append(["eps_sup_decimal", "", "", format_real(eps)])
        return _csv(rows)
    if fmt == "json":
        return _json({
            "n": n, "mode": Mode(mode).value,
            "c": [list(r) for r in table.rows],
            "sigma": budget.sigma,
            "eps_sup": f"{eps.numerator}/{eps.denominator}",
            "eps_sup_decimal": float(eps),
        })
    width = max(len(str(v)) for r in table.rows for v in r)
    lines = [f"constant table (n = {n}, mode = {Mode(mode).value})"]
    for i, row in enumerate(table.rows, start=1):
        lines.append(f"  row {i:>2}: " + " ".join(f"{v:>{width}}" for v in row))
    lines.append(f"sigma = {budget.sigma}")
    lines.append(f"eps_sup = {eps.numerator}/{eps.denominator} ({format_real(eps)})")
    return "\n".join(lines) + "\n"


def cmd_bound(n, d, mode="paper", fmt="text"):
    table = _table(n, mode)
    _check_d(d)
    coef = stability_bound_coefficient(n, d, table)
    poly = bound_polynomial(table)
    alpha, beta = linear_majorant(table)
    eps = epsilon_sup(table).eps_sup
    fields = {
        "n": n, "d": d, "mode": Mode(mode).value,
        "B": coef,
        "B_squared": coef * coef,
        "B_squared_polynomial": poly_string(poly),
        "linear_majorant": f"{alpha}*d + {beta}",
        "linear_majorant_value": alpha * d + beta,
        "eps_sup": f"{eps.numerator}/{eps.denominator}",
        "bound_at_eps_sup": coef * float(eps),
        "fickett_at_eps_sup": fickett_bound(n, float(eps)),
        "crossover_eps": crossover_epsilon(n, d, table),
    }
    return _render_record(fields, fmt)


def _render_record(fields, fmt):
    if fmt == "json":
        return _json(fields)
    def cell(v):
        return format_real(v) if isinstance(v, float) else str(v)
    if fmt == "csv":
        return _csv([list(fields), [cell(v) for v in fields.values()]])
    width = max(len(k) for k in fields)
    return "".join(f"{k:<{width}} = {cell(v)}\n" for k, v in fields.items())


def report_fields(report):
    eps = report.eps_sup
    return {
        "verdict": report.verdict.value,
        "epsilon_measured": report.epsilon_measured,
        "eps_sup": f"{eps.numerator}/{eps.denominator}",
        "admissible": report.admissible,
        "bound_coefficient": report.bound_coefficient,
        "bound_value": report.bound_value,
        "sup_deviation_alignment": report.sup_deviation_alignment,
        "sup_deviation_procrustes": report.sup_deviation_procrustes,
        "frobenius_deviation_alignment": report.frobenius_deviation_alignment,
        "frobenius_deviation_procrustes": report.frobenius_deviation_procrustes,
        "coordinate_bound_violations": report.coordinate_bound_violations,
        "recentered": report.recentered,
    }


def cmd_certify(path, mode="paper", recenter=False, fmt="text"):
    """Returns ``(rendered, exit_code)``."""
    pm = read_point_map(path)
    if pm.n < 3:
        raise UsageError(f"certification needs dimension >= 3, file has {pm.n}")
    report = certify(pm, build_constant_table(pm.n, mode), recenter_map=recenter)
    fields = report_fields(report)
    if fmt == "json":
        fields["alignment_q"] = np.asarray(report.alignment.q).tolist()
        fields["procrustes_q"] = np.asarray(report.procrustes.q).tolist()
        fields["translation"] = np.asarray(report.alignment.t).tolist()
    return _render_record(fields, fmt), VERDICT_EXIT[report.verdict]


def per_trial_csv(summary):
    rows = [PER_TRIAL_COLUMNS]
    for r in summary.records:
        rows.append([r.index, r.seed, format_real(r.epsilon_measured), format_real(r.sup_deviation),
                     format_real(r.bound), format_real(r.ratio), int(r.certified),
                     r.coordinate_violations])
    return _csv(rows)


def cmd_simulate(n, d, eps=None, trials=1000, seed=0, extra_points=20, mode="paper",
                 fmt="text", per_trial=None, workers=1):
    table = _table(n, mode)
    _check_d(d)
    if eps is None:
        eps = float(epsilon_sup(table).eps_sup) / 2
    try:
        config = ExperimentConfig(n=n, d=d, eps_target=eps, trials=trials,
                                  extra_points=extra_points, seed=seed, mode=mode)
    except InvalidInputError as exc:
        raise UsageError(str(exc)) from exc
    summary = run_experiment(config, workers=workers)
    if per_trial is not None:
        with open(per_trial, "w", encoding="utf-8", newline="") as fh:
            fh.write(per_trial_csv(summary))
    fields = {
        "n": n, "d": d, "eps_target": eps, "mode": Mode(mode).value, "seed": seed,
        "trials_run": summary.trials_run,
        "certified_count": summary.certified_count,
        "max_ratio": summary.max_ratio,
        "mean_ratio": summary.mean_ratio,
        "max_coordinate_violations": summary.max_coordinate_violations,
    }
    code = EXIT_OK if summary.certified_count == summary.trials_run else EXIT_VIOLATED
    return _render_record(fields, fmt), code


def default_eps_grid(eps_sup):
    return [float(eps_sup) * 10.0 ** (-k) for k in range(0, 7)]


def cmd_compare_fickett(n, d, eps_grid=None, mode="paper", fmt="text"):
    table = _table(n, mode)
    _check_d(d)
    budget = epsilon_sup(table).eps_sup
    coef = stability_bound_coefficient(n, d, table)
    star = crossover_epsilon(n, d, table)
    grid = default_eps_grid(budget) if not eps_grid else list(eps_grid)
    rows = []
    for eps in grid:
        if not eps > 0:
            raise UsageError(f"epsilon grid values must be positive, got {eps}")
        new = coef * eps
        old = fickett_bound(n, eps)
        rows.append({"eps": eps, "new_bound": new, "fickett_bound": old,
                     "ratio": new / old, "in_budget": 0 < eps < budget})
    if fmt == "json":
        return _json({"n": n, "d": d, "mode": Mode(mode).value, "crossover_eps": star,
                      "rows": rows})
    if fmt == "csv":
        out = [list(rows[0])] if rows else [["eps", "new_bound", "fickett_bound", "ratio",
                                             "in_budget"]]
        for r in rows:
            out.append([format_real(r["eps"]), format_real(r["new_bound"]),
                        format_real(r["fickett_bound"]), format_real(r["ratio"]),
                        int(r["in_budget"])])
        return _csv(out)
    lines = [f"n = {n}, d = {d}, B = {format_real(coef)}, crossover_eps = {format_real(star)}",
             f"{'eps':>24} {'new_bound':>24} {'fickett_bound':>24} {'ratio':>24}  budget"]
    for r in rows:
        flag = "ok" if r["in_budget"] else "OUTSIDE"
        lines.append(f"{format_real(r['eps']):>24} {format_real(r['new_bound']):>24} "
                     f"{format_real(r['fickett_bound']):>24} {format_real(r['ratio']):>24}  {flag}")
    return "\n".join(lines) + "\n"


def _eps_list(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from exc


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "csv", "json"], default="text")
    common.add_argument("--mode", choices=[m.value for m in Mode], default="paper")
    common.add_argument("--seed", type=int, default=0)

    parser = _Parser(prog="isostab", description="Stability constants, bounds and "
                     "certification for epsilon-isometries of bounded domains.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("constants", parents=[common], help="print the constant table")
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("bound", parents=[common], help="deviation bound for dimension n, radius d")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=float, default=1.0)

    p = sub.add_parser("certify", parents=[common], help="certify a point-map file")
    p.add_argument("file")
    p.add_argument("--recenter", action="store_true", help="subtract f(0) before analysis")

    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo certification run",
                       epilog="--per-trial columns: " + ",".join(PER_TRIAL_COLUMNS))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=float, default=1.0)
    p.add_argument("--eps", type=float, default=None, help="target distortion (default eps_sup/2)")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--extra-points", type=int, default=20)
    p.add_argument("--per-trial", metavar="CSV", default=None)
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("compare-fickett", parents=[common], help="compare against Fickett's bound")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=float, default=1.0)
    p.add_argument("--eps", type=_eps_list, default=None, help="comma-separated epsilon grid")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    code = EXIT_OK
    try:
        if args.command == "constants":
            out = cmd_constants(args.n, args.mode, args.format)
        elif args.command == "bound":
            out = cmd_bound(args.n, args.d, args.mode, args.format)
        elif args.command == "certify":
            out, code = cmd_certify(args.file, args.mode, args.recenter, args.format)
        elif args.command == "simulate":
            out, code = cmd_simulate(args.n, args.d, args.eps, args.trials, args.seed,
                                     args.extra_points, args.mode, args.format,
                                     args.per_trial, args.workers)
        else:
            out = cmd_compare_fickett(args.n, args.d, args.eps, args.mode, args.format)
    except (UsageError, PointMapParseError, OSError, GenerationError) as exc:
        print(f"isostab {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
