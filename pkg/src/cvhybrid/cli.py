"""Command-line interface.

Exit codes: 0 success (claim verified), 1 claim not verified, 2 bad
arguments or input files, 3 output could not be written, 4 fit target out
of reach.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .detection import (
    SCHEMES,
    TargetUnreachable,
    detection_scan,
    emulate_detection,
    fit_loss,
    fit_squeezing,
    scan_to_csv,
)
from .entanglement import (
    PAIRS,
    ExactLO,
    LinearizedLO,
    MeasurementCombination,
    closed_form,
    reports_to_csv,
    scan,
)
from .exceptions import InvalidArgument
from .gaussian_core import GaussianState
from .observables import quadratic_stats, stokes_observable
from .states import KINDS, MODE_LABELS, CylindricalStateSpec, build, verify_factorization
from .vector_modes import (
    VectorModeCoefficients,
    is_structurally_separable,
    render_intensity,
    schmidt_decompose,
    standard_mode,
    to_pgm,
)

log = logging.getLogger("cvhybrid")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_WRITE, EXIT_UNREACHABLE = 0, 1, 2, 3, 4


def complex_arg(text: str) -> complex:
    """Parse ``re,im`` (or a bare real) into a complex number."""
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected 're,im', got {text!r}")


def pair_arg(text: str) -> tuple[int, int]:
    try:
        pair = tuple(int(v) for v in text.split(","))
    except ValueError:
        pair = ()
    if pair not in PAIRS:
        raise argparse.ArgumentTypeError(f"Stokes pair must be one of {['%d,%d' % p for p in PAIRS]}")
    return pair


def combinations_arg(text: str) -> list[tuple[str, str]]:
    out = []
    for item in text.split(","):
        dofs = tuple(item.strip().split("/"))
        if len(dofs) != 2 or not set(dofs) <= {"pol", "spa"}:
            raise argparse.ArgumentTypeError(f"combination must look like 'pol/spa', got {item!r}")
        out.append(dofs)
    return out


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(type(obj).__name__)


def _emit(args, text: str) -> int:
    if args.out:
        try:
            Path(args.out).write_text(text)
        except OSError as exc:
            print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_WRITE
        log.info("wrote %s", args.out)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _dump(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True, default=_json_default) + "\n"


def cmd_factorize(args) -> int:
    dev = verify_factorization(args.kind, args.alpha, args.zeta)
    ok = dev < args.tol
    if args.format == "json":
        print(_dump({"kind": args.kind, "max_deviation": dev, "tol": args.tol, "verified": ok}), end="")
    else:
        print(f"max_deviation {dev:.6e}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_duan(args) -> int:
    if args.s_min < 0 or args.s_max < args.s_min:
        print("error: need 0 <= s_min <= s_max", file=sys.stderr)
        return EXIT_USAGE
    if args.steps < 1:
        print("error: steps must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    s_values = np.linspace(args.s_min, args.s_max, args.steps) if args.steps > 1 else np.array([args.s_min])
    mu, nu = args.pair
    combos = [MeasurementCombination(mu, nu, a, b) for a, b in args.combinations]
    lo_model = ExactLO(args.exact_aux) if args.exact_aux else LinearizedLO(args.lo_amplitude)
    try:
        reports = scan(args.kind, s_values, combos, lo_model, alpha=args.alpha)
    except InvalidArgument as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    has_closed_form = (mu, nu) == (2, 3)
    if has_closed_form:
        gap = max(abs(r.lhs - closed_form(r.s)) / closed_form(r.s) for r in reports)
    else:
        gap = 0.0
    if args.format == "json":
        body = _dump({"reports": [r.to_dict() for r in reports], "max_rel_gap": gap if has_closed_form else None})
    else:
        body = reports_to_csv(reports, with_closed_form=has_closed_form)
    code = _emit(args, body)
    if code:
        return code
    if args.out:
        print(f"max_rel_gap {gap:.6e}" if has_closed_form else "max_rel_gap n/a")
    else:
        print(f"# max_rel_gap {gap:.6e}" if has_closed_form else "# max_rel_gap n/a", file=sys.stderr)
    return EXIT_OK if gap < args.gap_tol else EXIT_FAIL


def cmd_detect(args) -> int:
    if not 0.0 <= args.eta <= 1.0:
        print("error: eta must lie in [0, 1]", file=sys.stderr)
        return EXIT_USAGE
    if args.sweep:
        param, start, stop, steps = args.sweep
        rows = detection_scan(
            param, np.linspace(start, stop, steps), args.kind, args.s, args.eta, args.scheme, args.alpha
        )
        return _emit(args, scan_to_csv(rows))
    s, eta = args.s, args.eta
    fitted = None
    if args.fit_db is not None:
        param = args.fit_param or ("s" if args.scheme == "direct" else "eta")
        try:
            if param == "s":
                s = fit_squeezing(args.fit_db, args.scheme, eta, args.kind, args.alpha)
                fitted = {"parameter": "s", "value": s}
            else:
                eta = fit_loss(args.fit_db, s, args.scheme, args.kind, args.alpha)
                fitted = {"parameter": "eta", "value": eta}
        except TargetUnreachable as exc:
            print(_dump({"error": str(exc), "achievable_bound_db": exc.bound_db}), end="")
            return EXIT_UNREACHABLE
    result = emulate_detection(args.kind, s, eta, args.scheme, args.alpha)
    payload = {
        "kind": args.kind,
        "scheme": args.scheme,
        "s": s,
        "eta": eta,
        "alpha": args.alpha,
        "result": result.to_dict(),
    }
    if fitted:
        payload["fit"] = fitted
    return _emit(args, _dump(payload))


def _schmidt_payload(c: VectorModeCoefficients, tol: float) -> dict:
    dec = schmidt_decompose(c)
    return {
        "lambdas": dec.lambdas.tolist(),
        "schmidt_rank": dec.schmidt_rank,
        "separable": is_structurally_separable(c, tol),
    }


def cmd_mode(args) -> int:
    c = standard_mode(args.kind)
    image = render_intensity(c, args.grid, args.extent, args.waist)
    target = args.out or f"{args.kind}.pgm"
    try:
        Path(target).write_bytes(to_pgm(image))
    except OSError as exc:
        print(f"error: cannot write {target}: {exc}", file=sys.stderr)
        return EXIT_WRITE
    payload = {"kind": args.kind, "image": target, **_schmidt_payload(c, args.sep_tol)}
    if args.format == "json":
        print(_dump(payload), end="")
    else:
        print(f"K={payload['schmidt_rank']:.6f} lambdas={payload['lambdas']} image={target}")
    return EXIT_OK


def cmd_schmidt(args) -> int:
    try:
        c = VectorModeCoefficients.from_json(Path(args.coeffs).read_text())
    except OSError as exc:
        print(f"error: cannot read {args.coeffs}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvalidArgument as exc:
        print(f"error: malformed coefficients: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if not np.any(c.coeffs):
        print("error: malformed coefficients: $.coeffs: all entries are zero", file=sys.stderr)
        return EXIT_USAGE
    payload = _schmidt_payload(c.normalized(), args.sep_tol)
    if args.format == "json":
        print(_dump(payload), end="")
    else:
        verdict = "separable" if payload["separable"] else "inseparable"
        print(f"lambdas={payload['lambdas']} K={payload['schmidt_rank']:.6f} {verdict}")
    return EXIT_OK


def cmd_stokes(args) -> int:
    if args.state:
        try:
            state = GaussianState.from_json(Path(args.state).read_text())
        except (OSError, ValueError) as exc:
            print(f"error: cannot load state: {exc}", file=sys.stderr)
            return EXIT_USAGE
        labels = ("mode0", "mode1")
    else:
        state = build(CylindricalStateSpec(args.kind, args.alpha, args.zeta))
        labels = MODE_LABELS[args.kind]
    if state.num_modes < 2:
        print("error: Stokes operators need at least two modes", file=sys.stderr)
        return EXIT_USAGE
    stats = {}
    for mu in range(4):
        mean, var = quadratic_stats(state, stokes_observable(args.dof, mu, (0, 1), state.num_modes))
        stats[f"S{mu}"] = {"mean": mean, "variance": var}
    return _emit(args, _dump({"dof": args.dof, "modes": list(labels), "stokes": stats}))


def _sweep_arg(text: str):
    try:
        param, start, stop, steps = text.split(":")
        if param not in ("s", "eta"):
            raise ValueError
        return param, float(start), float(stop), int(steps)
    except ValueError:
        raise argparse.ArgumentTypeError("sweep must look like 's:0:0.5:11' or 'eta:0:1:11'") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--format", choices=("json", "csv", "pgm", "text"), help="output format")
    common.add_argument("--tol", type=float, default=1e-10, help="verification tolerance")
    common.add_argument("--verbose", action="store_true", help="log run metadata to stderr")
    common.add_argument("--config", help="JSON file whose keys override command-line flags")

    parser = argparse.ArgumentParser(prog="cvhybrid", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("factorize", parents=[common], help="check the two constructions of the squeezed state agree")
    p.add_argument("--kind", choices=KINDS, default="azimuthal")
    p.add_argument("--alpha", type=complex_arg, default=0j, help="coherent amplitude as re,im")
    p.add_argument("--zeta", type=complex_arg, default=0j, help="squeezing parameter as re,im")
    p.set_defaults(func=cmd_factorize)

    p = sub.add_parser("duan", parents=[common], help="scan the Duan criterion over squeezing")
    p.add_argument("--kind", choices=KINDS, default="azimuthal")
    p.add_argument("--s-min", type=float, default=0.0)
    p.add_argument("--s-max", type=float, default=2.0)
    p.add_argument("--steps", type=int, default=21)
    p.add_argument("--pair", type=pair_arg, default=(2, 3), help="Stokes pair mu,nu")
    p.add_argument("--combinations", type=combinations_arg, default=[("pol", "pol"), ("spa", "spa"), ("spa", "pol")])
    p.add_argument("--lo-amplitude", type=float, default=1e4)
    p.add_argument("--exact-aux", type=float, default=None, help="use exact Stokes with this auxiliary amplitude")
    p.add_argument("--alpha", type=float, default=1.0, help="composite-mode amplitude (real)")
    p.add_argument("--gap-tol", type=float, default=1e-5)
    p.set_defaults(func=cmd_duan, format="csv")

    p = sub.add_parser(
        "detect",
        parents=[common],
        help="emulate direct / split detection of the bright squeezed beam",
        description="Squeezing s is applied as a real parameter to the composite mode with a real "
        "amplitude alpha, which gives amplitude squeezing of the bright beam.",
    )
    p.add_argument("--kind", choices=KINDS, default="azimuthal")
    p.add_argument("--s", type=float, default=0.0)
    p.add_argument("--eta", type=float, default=1.0, help="transmissivity applied to both modes")
    p.add_argument("--scheme", choices=SCHEMES, default="direct")
    p.add_argument("--alpha", type=float, default=1e3)
    p.add_argument("--fit-db", type=float, default=None, help="solve for a parameter hitting this dB reading")
    p.add_argument("--fit-param", choices=("s", "eta"), default=None,
                   help="parameter to fit (default: s for direct, eta otherwise)")
    p.add_argument("--sweep", type=_sweep_arg, default=None, help="param:start:stop:steps, writes CSV")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("mode", parents=[common], help="render a standard vector mode to PGM")
    p.add_argument("--kind", choices=KINDS, default="radial")
    p.add_argument("--waist", type=float, default=1.0)
    p.add_argument("--grid", type=int, default=256)
    p.add_argument("--extent", type=float, default=3.0, help="half-width in waists")
    p.add_argument("--sep-tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_mode)

    p = sub.add_parser("schmidt", parents=[common], help="Schmidt weights of a coefficient file")
    p.add_argument("coeffs", help="coefficient JSON file")
    p.add_argument("--sep-tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_schmidt)

    p = sub.add_parser("stokes", parents=[common], help="exact Stokes means and variances")
    p.add_argument("--kind", choices=KINDS, default="azimuthal")
    p.add_argument("--alpha", type=complex_arg, default=0j)
    p.add_argument("--zeta", type=complex_arg, default=0j)
    p.add_argument("--dof", choices=("pol", "spa"), default="pol")
    p.add_argument("--state", help="GaussianState JSON file instead of --kind/--alpha/--zeta")
    p.set_defaults(func=cmd_stokes)
    return parser


def _config_tokens(path: str) -> list[str]:
    data = json.loads(Path(path).read_text())
    if not isinstance(data, dict):
        raise ValueError("config must be a JSON object")
    tokens = []
    for key, value in data.items():
        flag = "--" + key.replace("_", "-")
        if isinstance(value, bool):
            if value:
                tokens.append(flag)
            continue
        if isinstance(value, list):
            value = ",".join(str(v) for v in value)
        tokens += [flag, str(value)]
    return tokens


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.config:
            try:
                extra = _config_tokens(args.config)
            except (OSError, ValueError) as exc:
                parser.error(f"cannot read config {args.config}: {exc}")
            args = parser.parse_args(argv + extra)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    log.info("cvhybrid %s %s", __version__, args.command)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
