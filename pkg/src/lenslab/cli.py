"""Command-line front end: ``lenslab <command> [options]``.

Each command writes ``<output_dir>/<command>-<params>.csv`` (or ``.json``)
and, unless ``--no-plot`` is given, an SVG next to it.  A ``--config`` file of
``key = value`` lines supplies defaults for the same options; flags given on
the command line win.  Exit codes: 0 on success, 1 when a computation raises
(or ``verify`` finds a failing criterion), 2 on configuration errors.
Errors are reported on stderr as one JSON object.
"""

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .errors import LenslabError

FORMAT_VERSION = "v1"


class ConfigError(Exception):
    """Bad command line or configuration file."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def float_list(text):
    try:
        return [float(v) for v in str(text).replace(",", " ").split()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a list of numbers: {text!r}") from exc


def int_list(text):
    try:
        return [int(v) for v in str(text).replace(",", " ").split()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a list of integers: {text!r}") from exc


def read_config(path):
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


@dataclass
class Result:
    """Tabular output of one command plus a summary and optional plot data."""

    columns: list
    rows: list
    summary: dict = field(default_factory=dict)
    plot: dict = None
    name_params: tuple = ()
    document: dict = None  # replaces the table in JSON output when set


# ----------------------------------------------------------------------------
# Commands


def _lens_like(kind, theta):
    from .maps import LensMap, ReducedLensMap, SpreadLensMap

    return {"lens": LensMap, "spread": SpreadLensMap, "reduced": ReducedLensMap}[kind](theta)


def cmd_spectrum(args):
    from .hardy_spectral import fit_decay, kernel_truncation, matrix

    phi = _lens_like(args.map, args.theta)
    if args.route == "kernel":
        sv = kernel_truncation(phi, args.dim).singular_values
    else:
        sv = np.linalg.svd(matrix(phi, args.dim).entries, compute_uv=False)
    fit = fit_decay(sv)
    summary = {"model": fit.model, "exponent": fit.exponent, "rate": fit.rate,
               "amplitude": fit.amplitude, "residual": fit.residual,
               "poly_exponent": fit.poly_exponent, "poly_residual": fit.poly_residual,
               "fit_range": list(fit.fit_range)}
    n = np.arange(1, sv.size + 1)
    return Result(["n", "s_n"], [[int(k), float(s)] for k, s in zip(n, sv)], summary,
                  plot={"series": [("s_n", n, sv)], "xlog": False, "ylog": True,
                        "xlabel": "n", "ylabel": "s_n",
                        "notes": [f"stretched exponent {fit.exponent:.3g}, residual {fit.residual:.3g}"]},
                  name_params=(("map", args.map), ("theta", args.theta), ("dim", args.dim),
                               ("route", args.route)))


def cmd_hs_norm(args):
    from .hardy_spectral import hs_norm_integral, matrix
    from .maps import LensMap

    rows = []
    for a in args.alphas:
        hs = hs_norm_integral(LensMap(a))
        frob = float(np.linalg.norm(matrix(LensMap(a), args.dim).entries))
        rows.append([a, hs, frob, hs * (1 - a), abs(frob - hs) / hs])
    scaled = [r[3] for r in rows]
    summary = {"scaled_ratio": max(scaled) / min(scaled)}
    al = np.array(args.alphas)
    return Result(["alpha", "hs_integral", "frobenius", "hs_times_one_minus_alpha", "relative_gap"],
                  rows, summary,
                  plot={"series": [("integral", al, [r[1] for r in rows]),
                                   ("Frobenius", al, [r[2] for r in rows])],
                        "xlog": False, "ylog": True, "xlabel": "alpha", "ylabel": "HS norm"},
                  name_params=(("dim", args.dim),))


def cmd_rho(args):
    from .carleson import rho_area_profile, rho_profile
    from .maps import LensMap, SpreadLensMap

    exps = np.arange(args.h_min_exp, args.h_max_exp + 1)
    h = 2.0 ** -exps
    if args.area:
        if args.spread:
            raise ConfigError("the area profile is implemented for the lens map only")
        prof = rho_area_profile(LensMap(args.theta), h, samples=args.samples, seed=args.seed)
        expected = 2 / args.theta
        kind = "area"
    elif args.spread:
        prof = rho_profile(SpreadLensMap(args.theta), h)
        expected = 1 + 1 / args.theta
        kind = "spread"
    else:
        prof = rho_profile(LensMap(args.theta), h)
        expected = 1 / args.theta
        kind = "lens"
    slope = prof.slope()
    rows = [[float(a), float(b), float(c)] for a, b, c in zip(prof.h, prof.rho, prof.halfwidth)]
    return Result(["h", "rho", "halfwidth"], rows,
                  {"profile": kind, "slope": slope, "expected_slope": expected},
                  plot={"series": [(kind, prof.h, prof.rho)], "xlabel": "h", "ylabel": "rho(h)",
                        "notes": [f"slope {slope:.4f} (expected {expected:.4f})"]},
                  name_params=(("profile", kind), ("theta", args.theta),
                               ("h", f"{args.h_min_exp}to{args.h_max_exp}")))


def cmd_luecking(args):
    from .carleson import luecking_sum
    from .maps import LensMap, SpreadLensMap

    phi = SpreadLensMap(args.theta) if args.spread else LensMap(args.theta)
    rows, series, summary = [], [], {}
    for p in args.p:
        S = luecking_sum(phi, p, args.n_max)
        for n in range(1, S.size + 1):
            ratio = S[n - 1] / S[n - 2] if n > 1 else float("nan")
            rows.append([p, n, float(S[n - 1]), float(ratio)])
        summary[f"p={p:g}"] = {"last_ratio": float(S[-1] / S[-2]),
                               "tail_from_10": float((S[-1] - S[9]) / S[9]) if S.size > 10 else None}
        series.append((f"p={p:g}", np.arange(1, S.size + 1), S))
    return Result(["p", "n", "S_n", "ratio"], rows, summary,
                  plot={"series": series, "xlog": False, "ylog": True, "xlabel": "n",
                        "ylabel": "S_n"},
                  name_params=(("map", "spread" if args.spread else "lens"), ("theta", args.theta),
                               ("nmax", args.n_max)))


def cmd_blaschke(args):
    from .blaschke import embedding_bound

    rows = []
    for N in args.N:
        rep = embedding_bound(args.theta, N)
        rows.append([int(N), rep.degree, rep.chi_emp, rep.sup_value, rep.bound])
    Ns = np.array([r[0] for r in rows], dtype=float)
    logb = np.log([r[4] for r in rows])
    summary = {}
    if Ns.size >= 2:
        slope = float(np.polyfit(Ns, logb, 1)[0])
        summary["log_bound_slope"] = slope
    return Result(["N", "degree", "chi_emp", "sup_value", "bound"], rows, summary,
                  plot={"series": [("sqrt(sup)", Ns, [r[4] for r in rows])], "xlog": False,
                        "xlabel": "N", "ylabel": "bound"},
                  name_params=(("theta", args.theta),))


def cmd_orlicz(args):
    from .carleson import rho_area_profile, rho_profile
    from .maps import LensMap
    from .orlicz import (
        collinearity_check,
        d_criterion,
        delta2_diagnostics,
        e_criterion,
        psi_breakpoints,
        psi_studia,
        witness_report,
    )

    psi = psi_studia(max(args.n_max, 2))
    xs = psi_breakpoints(args.n_max)
    delta = [{"n": k + 1, "log10_x": row.x.log10, "log10_ratio": row.ratio.log10}
             for k, row in enumerate(delta2_diagnostics(psi, xs))]
    n_crit = min(args.n_max, 4)
    xf = [float(x) for x in xs[:n_crit]]
    lens = LensMap(0.5)
    rho = rho_profile(lens, [1 / x ** 2 for x in xf])
    area = rho_area_profile(lens, [1 / x for x in xf], samples=args.samples, seed=args.seed)
    D = [{"n": k + 1, "h": 1 / x ** 2, "D": d_criterion(psi, rho, 1 / x ** 2)}
         for k, x in enumerate(xf)]
    E = [{"n": k + 1, "k": 1 / x, "E": e_criterion(psi, area, 1 / x)} for k, x in enumerate(xf)]
    report = {
        "report": "orlicz-report",
        "breakpoints_log10": [x.log10 for x in xs],
        "collinearity": [{"n": n, "residual": collinearity_check(n)} for n in range(1, args.n_max + 1)],
        "delta2": delta,
        "D": D,
        "E": E,
        "witness_f": witness_report("f_n_family", range(1, args.n_max + 1)),
        "witness_q": witness_report("q_n_family", range(1, args.n_max + 1)),
    }
    rows = [[d["n"], d["h"], d["D"], e["k"], e["E"]] for d, e in zip(D, E)]
    return Result(["n", "h_n", "D", "k_n", "E"], rows,
                  {"D_floor_ratio": max(r[2] for r in rows) / min(r[2] for r in rows),
                   "E_floor_ratio": max(r[4] for r in rows) / min(r[4] for r in rows)},
                  plot={"series": [("D(h_n)", np.arange(1, n_crit + 1), [r[2] for r in rows]),
                                   ("E(k_n)", np.arange(1, n_crit + 1), [r[4] for r in rows])],
                        "xlog": False, "ylog": True, "xlabel": "n", "ylabel": "criterion"},
                  name_params=(("nmax", args.n_max),), document=report)


def cmd_semigroup(args):
    from .maps import semigroup_compose_check

    rng = np.random.default_rng(args.seed)
    z = np.sqrt(rng.random(args.points)) * 0.999 * np.exp(1j * rng.uniform(-np.pi, np.pi, args.points))
    dev = semigroup_compose_check(args.t1, args.t2, z)
    return Result(["theta1", "theta2", "points", "max_deviation"],
                  [[args.t1, args.t2, args.points, dev]], {"max_deviation": dev},
                  name_params=(("t1", args.t1), ("t2", args.t2)))


def cmd_verify(args):
    from .acceptance import run_criterion

    rows, failed = [], 0
    for k in args.only or range(1, 11):
        res = run_criterion(k)
        print(res.line, flush=True)
        failed += not res.passed
        rows.append([res.number, res.title, "PASS" if res.passed else "FAIL", res.detail])
    return Result(["criterion", "title", "status", "detail"], rows, {"failed": failed},
                  name_params=(("only", "-".join(map(str, args.only)) if args.only else "all"),))


COMMANDS = {
    "spectrum": cmd_spectrum,
    "hs-norm": cmd_hs_norm,
    "rho": cmd_rho,
    "luecking": cmd_luecking,
    "blaschke": cmd_blaschke,
    "orlicz": cmd_orlicz,
    "semigroup": cmd_semigroup,
    "verify": cmd_verify,
}


# ----------------------------------------------------------------------------
# Output


def _plain(value):
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, float) and not np.isfinite(value):
        return None if np.isnan(value) else ("inf" if value > 0 else "-inf")
    return value


def _cell(value):
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.16e}"
    text = str(value)
    return f'"{text}"' if "," in text else text


def _slug(value):
    text = f"{value:g}" if isinstance(value, float) else str(value)
    return "".join(c if c.isalnum() or c in ".-" else "_" for c in text)


def output_stem(command, params):
    return "-".join([command] + [f"{k}{_slug(v)}" for k, v in params])


def write_outputs(command, args, result):
    out_dir = Path(args.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = output_stem(command, result.name_params)
    params = [("seed", args.seed)] + list(result.name_params)
    paths = []
    if args.format == "json" or result.document is not None:
        doc = {"lenslab": FORMAT_VERSION, "command": command, "seed": args.seed,
               "params": dict(result.name_params), "summary": result.summary}
        if result.document is not None:
            doc.update(result.document)
        else:
            doc["columns"] = result.columns
            doc["rows"] = result.rows
        path = out_dir / f"{stem}.json"
        path.write_text(json.dumps(_plain(doc), indent=2) + "\n")
        paths.append(path)
    if args.format == "csv":
        header = ", ".join([f"# lenslab {FORMAT_VERSION}", command]
                           + [f"{k}={_slug(v)}" for k, v in params])
        lines = [header]
        for key, value in result.summary.items():
            lines.append(f"# {key}={json.dumps(_plain(value))}")
        lines.append(",".join(result.columns))
        lines += [",".join(_cell(v) for v in row) for row in result.rows]
        path = out_dir / f"{stem}.csv"
        path.write_text("\n".join(lines) + "\n")
        paths.append(path)
    if result.plot and not args.no_plot:
        from .svgplot import line_plot

        plot = dict(result.plot)
        series = plot.pop("series")
        svg = line_plot(series, title=f"lenslab {command}", **plot)
        path = out_dir / f"{stem}.svg"
        path.write_text(svg)
        paths.append(path)
    return paths


# ----------------------------------------------------------------------------
# Parser


def build_parser():
    parser = _Parser(prog="lenslab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"lenslab {__version__}")
    parser.add_argument("--config", help="key = value file with option defaults")
    common = _Parser(add_help=False)
    common.add_argument("--config", help="key = value file with option defaults")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--output-dir", default="results")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--no-plot", action="store_true")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("spectrum", parents=[common], help="truncation singular values and decay fit")
    p.add_argument("--theta", type=float, default=0.5)
    p.add_argument("--dim", type=int, default=400)
    p.add_argument("--map", choices=("lens", "spread", "reduced"), default="lens")
    p.add_argument("--route", choices=("kernel", "monomial"), default="kernel")

    p = sub.add_parser("hs-norm", parents=[common], help="Hilbert-Schmidt norms, two routes")
    p.add_argument("--alphas", type=float_list, default=list(np.round(np.arange(0.5, 0.951, 0.05), 2)))
    p.add_argument("--dim", type=int, default=512)

    p = sub.add_parser("rho", parents=[common], help="maximal Carleson profiles and slopes")
    p.add_argument("--theta", type=float, default=0.5)
    p.add_argument("--spread", action="store_true", help="use the spread lens map")
    p.add_argument("--area", action="store_true", help="area (Bergman) profile by Monte Carlo")
    p.add_argument("--h-min-exp", type=int, default=4, help="largest h is 2^-h_min_exp")
    p.add_argument("--h-max-exp", type=int, default=20, help="smallest h is 2^-h_max_exp")
    p.add_argument("--samples", type=int, default=10 ** 5)

    p = sub.add_parser("luecking", parents=[common], help="dyadic Luecking partial sums")
    p.add_argument("--theta", type=float, default=0.5)
    p.add_argument("--spread", action="store_true")
    p.add_argument("--p", type=float_list, default=[0.8, 1.4])
    p.add_argument("--n-max", type=int, default=14)

    p = sub.add_parser("blaschke", parents=[common], help="Blaschke-product embedding bound")
    p.add_argument("--theta", type=float, default=0.5)
    p.add_argument("--N", type=int_list, default=list(range(3, 9)))

    p = sub.add_parser("orlicz", parents=[common], help="Orlicz function report (JSON)")
    p.add_argument("--n-max", type=int, default=6)
    p.add_argument("--samples", type=int, default=10 ** 5)

    p = sub.add_parser("semigroup", parents=[common], help="lens semigroup identity")
    p.add_argument("--t1", type=float, default=0.5)
    p.add_argument("--t2", type=float, default=0.5)
    p.add_argument("--points", type=int, default=1000)

    p = sub.add_parser("verify", parents=[common], help="run the acceptance checks")
    p.add_argument("--only", type=int_list, default=None, help="comma-separated criterion numbers")
    return parser, sub


def parse(argv):
    parser, sub = build_parser()
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    argv = list(argv)
    if known.config:
        config = read_config(known.config)
        command = config.pop("command", None)
        if command and not any(a in sub.choices for a in argv):
            argv = [command] + argv
        chosen = next((a for a in argv if a in sub.choices), None)
        if chosen is None:
            raise ConfigError("no command given")
        target = sub.choices[chosen]
        dests = {a.dest for a in target._actions}
        unknown = sorted(set(config) - dests)
        if unknown:
            raise ConfigError(f"unknown config keys for {chosen}: {', '.join(unknown)}")
        for action in target._actions:
            if action.dest in config:
                value = config[action.dest]
                if isinstance(action, argparse._StoreTrueAction):
                    value = value.lower() in ("1", "true", "yes", "on")
                action.default = value
    args = parser.parse_args(argv)
    if args.command is None:
        raise ConfigError("no command given")
    return args


def _fail(kind, exc, command=None):
    payload = {"status": "error", "kind": kind, "type": type(exc).__name__,
               "message": str(exc), "command": command}
    print(json.dumps(payload), file=sys.stderr)


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    if any(a in ("-h", "--help", "--version") for a in argv):
        build_parser()[0].parse_args(argv)  # prints and exits 0
    try:
        args = parse(argv)
    except ConfigError as exc:
        _fail("config", exc)
        return 2
    try:
        result = COMMANDS[args.command](args)
        paths = write_outputs(args.command, args, result)
    except ConfigError as exc:
        _fail("config", exc, args.command)
        return 2
    except (LenslabError, ArithmeticError, ValueError) as exc:
        _fail("module", exc, args.command)
        return 1
    for key, value in result.summary.items():
        print(f"{key}: {json.dumps(_plain(value))}")
    for path in paths:
        print(f"wrote {path}")
    if args.command == "verify" and result.summary["failed"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
