"""Command-line front end.

Subcommands emit plot-ready CSV curves or JSON reports:

    bc          boundary matrix of a single interaction
    scatter     transmission curve of a defect chain read from a JSON file
    filter      two-defect mass-jump energy filter curve with peak report
    circle      ring spectrum with a degeneracy report footer
    regularize  small-width convergence study of extracted boundary matrices
    splitting   flux-split ring level pairs

CSV output has a header row, 17-significant-digit floats and LF line
endings; structured footers are appended as one '# '-prefixed JSON line.
Exit codes: 0 success, 2 invalid input, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile

import numpy as np
from scipy.optimize import minimize_scalar

from . import circle as circle_mod
from . import regularized, scattering
from .boundary import (
    ExtensionKind,
    boundary_matrix,
    flux_to_x3,
    mass_ratio_to_x2,
    x2_to_mass_ratio,
    x3_to_flux,
)
from .errors import InvalidInputError, NumericalFailureError

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NUMERICAL = 3


def _finite(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number")
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError("numeric flags must be finite")
    return value


def _eps_list(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a comma-separated number list")
    if not values:
        raise argparse.ArgumentTypeError("need at least one eps value")
    return values


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def _csv(header, rows, footer=None) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) if isinstance(v, float) else str(v) for v in row))
    if footer is not None:
        lines.append("# " + json.dumps(footer, sort_keys=True))
    return "\n".join(lines) + "\n"


def _json_doc(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _write_output(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(out))
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".zerorange-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp_path, out)
    except BaseException:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise


def _matrix_report(bc) -> dict:
    m = bc.matrix
    report = {
        "matrix_re": [[m[0, 0].real, m[0, 1].real], [m[1, 0].real, m[1, 1].real]],
        "matrix_im": [[m[0, 0].imag, m[0, 1].imag], [m[1, 0].imag, m[1, 1].imag]],
        "det_re": complex(bc.det).real,
        "det_im": complex(bc.det).imag,
    }
    if isinstance(bc.kind, ExtensionKind):
        report["kind"] = bc.kind.kind
        report["param"] = bc.kind.param
        if bc.kind.kind == "x2":
            report["mu"] = x2_to_mass_ratio(bc.kind.param).mu
        elif bc.kind.kind == "x3":
            report["gamma"] = x3_to_flux(bc.kind.param).gamma
    else:
        report["kind"] = "custom"
    return report


def _resolve_kind(args) -> ExtensionKind:
    kind = args.kind
    given = [name for name in ("param", "mu", "gamma") if getattr(args, name, None) is not None]
    if kind == "x2" and args.mu is not None:
        if "param" in given:
            raise InvalidInputError("give either --param or --mu, not both")
        return ExtensionKind("x2", mass_ratio_to_x2(args.mu))
    if kind == "x3" and args.gamma is not None:
        if "param" in given:
            raise InvalidInputError("give either --param or --gamma, not both")
        return ExtensionKind("x3", flux_to_x3(args.gamma))
    if args.param is None:
        raise InvalidInputError(f"kind {kind} needs --param"
                                + (" or --mu" if kind == "x2" else "")
                                + (" or --gamma" if kind == "x3" else ""))
    if getattr(args, "mu", None) is not None or getattr(args, "gamma", None) is not None:
        raise InvalidInputError("--mu/--gamma apply only to their own kinds")
    return ExtensionKind(kind, args.param)


def cmd_bc(args) -> str:
    bc = boundary_matrix(_resolve_kind(args))
    report = _matrix_report(bc)
    if args.format == "json":
        return _json_doc(report)
    rows = []
    for key in sorted(report):
        value = report[key]
        if isinstance(value, list):
            for i in range(2):
                for j in range(2):
                    rows.append((f"{key[:-3]}_{i + 1}{j + 1}{key[-3:]}", float(value[i][j])))
        elif isinstance(value, float):
            rows.append((key, value))
        else:
            rows.append((key, value))
    return _csv(("name", "value"), rows)


def _curve_rows(chain, k_grid):
    return scattering.transmission_curve(chain, k_grid)


def _refined_peaks(chain, ks, ts):
    """Local transmission maxima refined off the grid."""
    peaks = []
    for i in range(1, len(ks) - 1):
        if ts[i] > ts[i - 1] and ts[i] > ts[i + 1]:
            res = minimize_scalar(
                lambda k: -scattering.smatrix(chain, k).transmission,
                bounds=(ks[i - 1], ks[i + 1]),
                method="bounded",
                options={"xatol": 1e-10},
            )
            peaks.append((float(res.x), float(-res.fun)))
    return peaks


def cmd_scatter(args) -> str:
    chain = scattering.load_chain(args.chain)
    if args.samples < 2 or args.kmin <= 0.0 or args.kmax <= args.kmin:
        raise InvalidInputError("need kmax > kmin > 0 and at least 2 samples")
    k_grid = np.linspace(args.kmin, args.kmax, args.samples)
    rows = _curve_rows(chain, k_grid)
    if args.format == "json":
        return _json_doc({"rows": [list(row) for row in rows]})
    return _csv(("k", "T", "R", "phase_t"), rows)


def cmd_filter(args) -> str:
    if args.mu <= 0.0:
        raise InvalidInputError("mass ratio must be positive")
    if args.spacing <= 0.0:
        raise InvalidInputError("defect spacing must be positive")
    if args.samples < 2 or args.kmin <= 0.0 or args.kmax <= args.kmin:
        raise InvalidInputError("need kmax > kmin > 0 and at least 2 samples")
    first = mass_ratio_to_x2(args.mu)
    second = mass_ratio_to_x2(1.0 / args.mu) if args.pair == "inverse" else first
    chain = scattering.chain_from_spec([
        {"position": 0.0, "kind": "x2", "param": first},
        {"position": args.spacing, "kind": "x2", "param": second},
    ])
    k_grid = np.linspace(args.kmin, args.kmax, args.samples)
    rows = _curve_rows(chain, k_grid)
    ts = [row[1] for row in rows]
    peaks = _refined_peaks(chain, k_grid, ts)
    t_values = ts + [t for _, t in peaks]
    footer = {
        "peak_positions": [k for k, _ in peaks],
        "peak_transmissions": [t for _, t in peaks],
        "t_max": max(t_values),
        "t_min": min(ts),
    }
    if args.format == "json":
        return _json_doc({"rows": [list(row) for row in rows], "report": footer})
    return _csv(("k", "T", "R", "phase_t"), rows, footer)


def _degeneracy_footer(report) -> dict:
    return {
        "degenerate_pairs": [[r1.k, r2.k] for r1, r2 in report.degenerate_pairs],
        "split_pairs": [[r1.k, r2.k] for r1, r2 in report.split_pairs],
        "n_degenerate": len(report.degenerate_pairs),
        "n_split": len(report.split_pairs),
        "max_split": report.max_split,
    }


def cmd_circle(args) -> str:
    if args.kmax <= 0.0:
        raise InvalidInputError("kmax must be positive")
    spec = circle_mod.CircleSpec(args.length, boundary_matrix(_resolve_kind(args)))
    result = circle_mod.circle_spectrum(spec, args.kmax)
    report = circle_mod.degeneracy_report(result)
    rows = [(r.k, r.energy, r.multiplicity, r.branch) for r in result.roots]
    footer = _degeneracy_footer(report)
    if args.format == "json":
        return _json_doc({
            "rows": [[r.k, r.energy, r.multiplicity, r.branch] for r in result.roots],
            "report": footer,
        })
    return _csv(("k", "E", "multiplicity", "branch"), rows, footer)


def cmd_regularize(args) -> str:
    report = regularized.convergence_study(
        args.x2, args.x4, args.eps, args.k, args.half_width)
    doc = {
        "eps_values": list(report.eps_values),
        "errors": list(report.errors),
        "estimated_order": report.estimated_order,
    }
    if args.format == "csv":
        rows = list(zip(report.eps_values, report.errors))
        return _csv(("eps", "error"), rows, {"estimated_order": report.estimated_order})
    return _json_doc(doc)


def cmd_splitting(args) -> str:
    if args.mmax < 1:
        raise InvalidInputError("mmax must be at least 1")
    levels = circle_mod.zeeman_levels(args.gamma, args.mmax, args.length)
    rows = [(lvl.m, lvl.e_minus, lvl.e_plus, lvl.splitting) for lvl in levels]
    if args.format == "json":
        return _json_doc({"rows": [list(row) for row in rows]})
    return _csv(("m", "E_minus", "E_plus", "splitting"), rows)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zerorange",
        description="Point interactions in one dimension: boundary matrices, "
                    "scattering, ring spectra and smoothed-defect studies.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=None, help="output path (default: stdout)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p, default):
        p.add_argument("--format", choices=("csv", "json"), default=default)

    kind_flags = argparse.ArgumentParser(add_help=False)
    kind_flags.add_argument("--kind", choices=("x1", "x2", "x3", "x4"), required=True)
    kind_flags.add_argument("--param", type=_finite, default=None)
    kind_flags.add_argument("--mu", type=_finite, default=None,
                            help="mass ratio, alternative parameter for x2")
    kind_flags.add_argument("--gamma", type=_finite, default=None,
                            help="flux, alternative parameter for x3")

    p = sub.add_parser("bc", parents=[common, kind_flags],
                       help="boundary matrix of one interaction")
    add_format(p, "json")
    p.set_defaults(func=cmd_bc)

    p = sub.add_parser("scatter", parents=[common],
                       help="transmission curve of a chain file")
    p.add_argument("--chain", required=True, help="JSON chain description file")
    p.add_argument("--kmin", type=_finite, required=True)
    p.add_argument("--kmax", type=_finite, required=True)
    p.add_argument("--samples", type=int, default=1000)
    add_format(p, "csv")
    p.set_defaults(func=cmd_scatter)

    p = sub.add_parser("filter", parents=[common],
                       help="two-defect mass-jump energy filter")
    p.add_argument("--mu", type=_finite, required=True)
    p.add_argument("--spacing", type=_finite, default=5.0)
    p.add_argument("--kmin", type=_finite, default=0.1)
    p.add_argument("--kmax", type=_finite, default=5.0)
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--pair", choices=("equal", "inverse"), default="equal",
                   help="second defect equal to the first or with inverted ratio")
    add_format(p, "csv")
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("circle", parents=[common, kind_flags],
                       help="ring spectrum with degeneracy report")
    p.add_argument("--L", dest="length", type=_finite, default=2.0)
    p.add_argument("--kmax", type=_finite, default=20.0)
    add_format(p, "csv")
    p.set_defaults(func=cmd_circle)

    p = sub.add_parser("regularize", parents=[common],
                       help="convergence study of the smoothed defect")
    p.add_argument("--x2", type=_finite, default=0.0)
    p.add_argument("--x4", type=_finite, default=0.0)
    p.add_argument("--eps", type=_eps_list, default=(0.2, 0.1, 0.05, 0.025),
                   help="comma-separated descending widths")
    p.add_argument("--k", type=_finite, default=1.0)
    p.add_argument("--half-width", dest="half_width", type=_finite, default=None)
    add_format(p, "json")
    p.set_defaults(func=cmd_regularize)

    p = sub.add_parser("splitting", parents=[common],
                       help="flux-split ring level pairs")
    p.add_argument("--gamma", type=_finite, required=True)
    p.add_argument("--mmax", type=int, default=5)
    p.add_argument("--L", dest="length", type=_finite, default=2.0 * math.pi)
    add_format(p, "csv")
    p.set_defaults(func=cmd_splitting)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = args.func(args)
        _write_output(text, args.out)
    except (InvalidInputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (NumericalFailureError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
