"""Command line entry point: ``crouzeix-lab {bounds,boundary,convergence,omega,all}``."""

import argparse
import contextlib
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import bounds, conformal, io, kms, omega

log = logging.getLogger("crouzeix_lab")

EXIT_OK = 0
EXIT_NUMERICAL = 2
EXIT_ASSERTION = 3
EXIT_USAGE = 64
EXIT_IO = 74

PUBLISHED_N_DISC = 1205
PUBLISHED_TOL = 1e-5
CONVERGENCE_NS = (23, 47, 95, 191, 383, 767, 1205)
CONVERGENCE_REF = 1447
A_WINDOW = (33.0, 65.0)
B_WINDOW = (130.0, 350.0)
SLOPE_WINDOW = (-4.5, -3.5)
FORMATS = {"json", "csv", "svg", "png"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _formats(text: str) -> set:
    fmts = {f.strip() for f in text.split(",") if f.strip()}
    unknown = fmts - FORMATS
    if unknown:
        raise argparse.ArgumentTypeError(f"unknown format(s): {', '.join(sorted(unknown))}")
    return fmts


def _figures(cfg, fig, stem):
    from .plotting import save_figure

    written = []
    for fmt in ("svg", "png"):
        if fmt in cfg.format:
            written.append(save_figure(fig, cfg.out / f"{stem}.{fmt}"))
    if not written:
        import matplotlib.pyplot as plt

        plt.close(fig)
    return written


def cmd_bounds(cfg) -> int:
    k = cfg.k
    if k not in bounds.PUBLISHED_BRACKETS:
        raise UsageError(f"--k must be in 3..6 for bounds, got {k}")
    coarse = cfg.n_disc < PUBLISHED_N_DISC
    if coarse:
        log.warning("n_disc=%d is coarser than %d; bounds will not match the published brackets digits", cfg.n_disc, PUBLISHED_N_DISC)
    cd = conformal.conformal_map(k, cfg.n_disc)
    report = bounds.bracket(k, cd.M, search=not cfg.no_search)
    record = report.to_record()
    record["conformal"] = cd.to_record()
    if "json" in cfg.format:
        io.write_json(cfg.out / f"bounds_{k}.json", record)
    if "csv" in cfg.format:
        io.write_csv(
            cfg.out / f"bounds_{k}.csv",
            ["n", "nn", "lower", "upper", "published_lower", "published_upper", "contraction_norm", "bracket_valid"],
            [(k, cd.nn, report.lower, report.upper, *bounds.PUBLISHED_BRACKETS[k], report.contraction_norm, report.bracket_valid)],
        )
    lo, hi = bounds.PUBLISHED_BRACKETS[k]
    print(f"{'n':>2} {'nodes':>6} {'lower':>12} {'upper':>12} {'difference':>11}   published: [{lo}, {hi}]")
    print(f"{k:>2} {cd.nn:>6} {report.lower:>12.9f} {report.upper:>12.9f} {report.upper - report.lower:>11.2e}")
    if not report.bracket_valid:
        log.error("bracket violated: lower=%r upper=%r contraction=%r", report.lower, report.upper, report.contraction_norm)
        return EXIT_ASSERTION
    if not coarse and (abs(report.lower - lo) > PUBLISHED_TOL or abs(report.upper - hi) > PUBLISHED_TOL):
        log.error("bounds differ from the published brackets by more than %g", PUBLISHED_TOL)
        return EXIT_ASSERTION
    return EXIT_OK


def cmd_boundary(cfg) -> int:
    k = cfg.k
    if k < 3:
        raise UsageError(f"--k must be >= 3 for boundary, got {k}")
    disc = kms.discretize_total(k, cfg.n_disc)
    if "csv" in cfg.format:
        io.write_csv(cfg.out / f"boundary_{k}.csv", ["theta_or_index", "re", "im", "part"], kms.boundary_rows(disc))
    if {"svg", "png"} & cfg.format:
        from .plotting import boundary_figure

        _figures(cfg, boundary_figure(k), f"boundary_{k}")
    print(f"W(A_{k}): {disc.nn} nodes ({disc.n + 1} on the upper arc, {disc.n_segment} on the upper segment)")
    return EXIT_OK


def _windows_ok(rows, slope) -> dict:
    body = rows[:-1]
    return {
        "a_ratio": all(A_WINDOW[0] <= r.a_ratio <= A_WINDOW[1] for r in body),
        "b_ratio": all(B_WINDOW[0] <= r.b_ratio <= B_WINDOW[1] for r in body),
        "slope": SLOPE_WINDOW[0] <= slope <= SLOPE_WINDOW[1],
    }


def cmd_convergence(cfg) -> int:
    k = cfg.k
    if k < 3 or k > 6:
        raise UsageError(f"--k must be in 3..6 for convergence, got {k}")
    ns = list(cfg.n_list) + [cfg.ref]
    rows = conformal.convergence_study(k, ns)
    slope = conformal.convergence_slope(rows)
    cd = conformal.conformal_map(k, rows[-1].n)
    windows = _windows_ok(rows, slope) if k == 3 else {}
    record = cd.to_record()
    record["a_table"] = [r.__dict__ for r in rows]
    record["slope"] = slope
    record["windows"] = windows
    if "json" in cfg.format:
        io.write_json(cfg.out / f"convergence_{k}.json", record)
    if "csv" in cfg.format:
        header = ["n", "a", "b", "g2", "a_ratio", "b_ratio", "g2_ratio"]
        io.write_csv(cfg.out / f"convergence_{k}.csv", header, [[getattr(r, h) for h in header] for r in rows])
    if {"svg", "png"} & cfg.format:
        from .plotting import convergence_figure

        _figures(cfg, convergence_figure(rows), f"convergence_{k}")
    print(f"{'n':>6} {'a(n)':>16} {'(a_ref-a)n^4':>13} {'(b-b_ref)n^4':>13} {'(g2-g2_ref)n^4':>15}")
    for r in rows:
        print(f"{r.n:>6} {r.a:>16.12f} {r.a_ratio:>13.2f} {r.b_ratio:>13.2f} {r.g2_ratio:>15.2f}")
    print(f"log-log slope of |a(n) - a_ref|: {slope:.3f}")
    failed = [name for name, ok in windows.items() if not ok]
    if failed:
        log.error("convergence windows violated: %s", ", ".join(failed))
        return EXIT_ASSERTION
    return EXIT_OK


def cmd_omega(cfg) -> int:
    try:
        report = omega.verify_inclusion(cfg.samples)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    a1, b1 = omega.g1_derivs()
    record = report.to_record()
    record["a1"], record["b1"] = a1, b1
    if "json" in cfg.format:
        io.write_json(cfg.out / "omega.json", record)
    if "csv" in cfg.format:
        c = report.curves
        io.write_csv(
            cfg.out / "omega_curves.csv",
            ["theta", "re", "im", "p", "part"],
            [
                (t, x, y, p, "cardioid" if j <= c["split"] else "segment")
                for j, (t, x, y, p) in enumerate(zip(c["theta"], c["re"], c["im"], c["p"]))
            ],
        )
    if {"svg", "png"} & cfg.format:
        from .plotting import inclusion_curves_figure, omega_figure

        _figures(cfg, omega_figure(report), "omega_domain")
        _figures(cfg, inclusion_curves_figure(report), "omega_curves")
    cond = record["cond_H1"]
    print(f"samples={report.samples} included={report.included}")
    print(f"  cardioid part: max p = {report.max_p_cardioid:.7f}, max |dp/dt| = {report.max_dp_quotient:.5f}, bound {report.cardioid_certified_bound:.7f}")
    print(f"  segment part:  min Re = {report.min_re_segment:.7f}, max |dRe/dt| = {report.max_dre_quotient:.5f}, bound {report.segment_certified_bound:.7f}")
    print(f"  cond(H1) = {cond:.7f}")
    if not (report.included and cond < 2):
        log.error("inclusion of Omega in W(A_3) not established at %d samples", report.samples)
        return EXIT_ASSERTION
    return EXIT_OK


def cmd_all(cfg) -> int:
    codes = []
    for k in (3, 4, 5, 6):
        codes.append(cmd_bounds(_with(cfg, k=k)))
        codes.append(cmd_boundary(_with(cfg, k=k)))
    codes.append(cmd_convergence(_with(cfg, k=3)))
    codes.append(cmd_omega(cfg))
    return max(codes)


def _with(cfg, **kw):
    ns = argparse.Namespace(**vars(cfg))
    for key, value in kw.items():
        setattr(ns, key, value)
    return ns


COMMANDS = {
    "bounds": cmd_bounds,
    "boundary": cmd_boundary,
    "convergence": cmd_convergence,
    "omega": cmd_omega,
    "all": cmd_all,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", type=Path, default=Path("."), help="output directory")
    common.add_argument("--format", type=_formats, default="json,csv,svg", help="comma list of json,csv,svg,png")
    common.add_argument("--n-disc", type=int, default=PUBLISHED_N_DISC, help="total boundary nodes (nearest achievable)")
    common.add_argument("--samples", type=int, default=omega.PUBLISHED_SAMPLES)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="crouzeix-lab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = sub.add_parser("bounds", parents=[common], help="two-sided bounds on psi(A_k)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--no-search", action="store_true", help="use the published parameters without refinement")
    p = sub.add_parser("boundary", parents=[common], help="boundary of W(A_k) as CSV and figure")
    p.add_argument("--k", type=int, required=True)
    p = sub.add_parser("convergence", parents=[common], help="a(n) convergence table")
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--n-list", type=lambda s: [int(x) for x in s.split(",")], default=list(CONVERGENCE_NS))
    p.add_argument("--ref", type=int, default=CONVERGENCE_REF)
    sub.add_parser("omega", parents=[common], help="rational domain inside W(A_3)")
    p = sub.add_parser("all", parents=[common], help="every reproduction run")
    p.add_argument("--no-search", action="store_true")
    return parser


def _thread_limit():
    limit = os.environ.get("CROUZEIX_LAB_THREADS")
    if not limit:
        return contextlib.nullcontext()
    from threadpoolctl import threadpool_limits

    return threadpool_limits(limits=int(limit))


def main(argv=None) -> int:
    parser = build_parser()
    cfg = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if cfg.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    if isinstance(cfg.format, str):
        cfg.format = _formats(cfg.format)
    if cfg.n_disc < 23:
        parser.error("--n-disc must be >= 23")
    try:
        cfg.out.mkdir(parents=True, exist_ok=True)
        with _thread_limit():
            return COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"crouzeix-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        log.error("I/O failure: %s", exc)
        return EXIT_IO
    except (ArithmeticError, ValueError, np.linalg.LinAlgError) as exc:
        log.error("numerical failure: %s", exc)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
