"""Command-line interface: ``thermopiezo {check,eval,simulate,oracle}``.

Machine-readable JSON goes to stdout (or ``--out``), one-line human
summaries go to stderr.  Exit codes: 0 pass, 1 a checked condition failed,
2 usage, I/O or parse error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .admissibility import DEFAULT_TOL, check, cross_validate
from .constitutive import (
    LocalState,
    as_aniso,
    evaluate,
    form_F,
    form_G,
    form_P,
    form_W,
    lyapunov_density,
)
from .errors import InadmissibleMaterialError, ThermopiezoError
from .material import load_material, parse_json_text
from .simulator1d import config_from_dict, run
from .tensor_core import Kappa, Sym2

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2
TOL_ENV = "THERMOPIEZO_TOL"

STATE_KEYS = ("e", "kappa", "E", "theta", "thetaDot", "gradTheta", "V", "uDot")


class UsageError(Exception):
    pass


def _err(msg: str) -> None:
    print(msg, file=sys.stderr)


def _emit(data: dict, out: str | None) -> None:
    text = json.dumps(data, indent=2, sort_keys=True)
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


def _tolerance(arg: float | None) -> float:
    if arg is not None:
        return arg
    env = os.environ.get(TOL_ENV)
    if env is None:
        return DEFAULT_TOL
    try:
        tol = float(env)
    except ValueError:
        raise UsageError(f"{TOL_ENV} must be a decimal number, got {env!r}") from None
    if not (np.isfinite(tol) and tol >= 0):
        raise UsageError(f"{TOL_ENV} must be a non-negative number, got {env!r}")
    return tol


def _non_negative_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {value}")
    return value


def _array(data: dict, key: str, shape: tuple[int, ...], source: str) -> np.ndarray:
    try:
        arr = np.asarray(data[key], dtype=float)
    except (TypeError, ValueError):
        raise ThermopiezoError(f"{source}: field {key!r} must be numeric") from None
    if arr.shape != shape:
        raise ThermopiezoError(f"{source}: field {key!r} must have shape {shape}, got {arr.shape}")
    return arr


def load_state(path) -> LocalState:
    """Read a ``LocalState`` from JSON; absent fields are zero, unknown ones are rejected."""
    path = Path(path)
    source = str(path)
    data = parse_json_text(path.read_text(encoding="utf-8"), source)
    for key in data:
        if key not in STATE_KEYS:
            raise ThermopiezoError(f"{source}: unknown state field {key!r}")
    kw = {}
    if "e" in data:
        kw["e"] = Sym2.from_full(_array(data, "e", (3, 3), source))
    if "V" in data:
        kw["V"] = Sym2.from_full(_array(data, "V", (3, 3), source))
    if "kappa" in data:
        kw["kappa"] = Kappa.from_full(_array(data, "kappa", (3, 3, 3), source))
    for key, attr in (("E", "E"), ("gradTheta", "grad_theta"), ("uDot", "u_dot")):
        if key in data:
            kw[attr] = _array(data, key, (3,), source)
    for key, attr in (("theta", "theta"), ("thetaDot", "theta_dot")):
        if key in data:
            value = data[key]
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ThermopiezoError(f"{source}: field {key!r} must be a number")
            kw[attr] = float(value)
    return LocalState(**kw)


def cmd_check(args) -> int:
    tol = _tolerance(args.tol)
    m = load_material(args.material)
    report = check(m, tol)
    _emit(report.to_dict(), args.out)
    failed = [c.name for c in report.failures()]
    verdict = "PASS" if report.all_passed else "FAIL"
    detail = f" (failed: {', '.join(failed)})" if failed else ""
    _err(f"check {args.material}: {verdict} [{report.method}]{detail}")
    return EXIT_OK if report.all_passed else EXIT_FAIL


def cmd_eval(args) -> int:
    m = as_aniso(load_material(args.material))
    s = load_state(args.state)
    z = s.z(m.beta)
    out = {
        "response": evaluate(m, s).to_dict(),
        "forms": {
            "W": form_W(m, s.e, s.kappa),
            "F": form_F(m, s.E, s.V, z),
            "G": form_G(m, s.E, s.V, z),
            "P": form_P(m, s.theta_dot, s.grad_theta),
            "lyapunov": lyapunov_density(m, s),
        },
    }
    _emit(out, args.out)
    _err(f"eval {args.state}: ok")
    return EXIT_OK


def cmd_simulate(args) -> int:
    path = Path(args.config)
    data = parse_json_text(path.read_text(encoding="utf-8"), str(path))
    config = config_from_dict(data, base_dir=path.parent)
    if args.force:
        config.force = True
    try:
        result = run(config)
    except InadmissibleMaterialError as exc:
        _emit({"error": str(exc), "admissibility": exc.report.to_dict()}, None)
        _err(f"simulate: {exc} (use --force to run anyway)")
        return EXIT_ERROR
    if args.out:
        result.write_csv(args.out)
    summary = result.summary()
    _emit(summary, None)
    verdict = "non-increasing" if summary["monotone"] else "INCREASING"
    _err(f"simulate: Lyapunov {summary['initial_lyapunov']:.6g} -> "
         f"{summary['final_lyapunov']:.6g}, {verdict}"
         + (" (forced run, verdict informational)" if config.force else ""))
    if not summary["monotone"] and not config.force:
        return EXIT_FAIL
    return EXIT_OK


def cmd_oracle(args) -> int:
    tol = _tolerance(args.tol)
    report = cross_validate(args.samples, args.range, args.seed, tol=tol)
    _emit(report, args.out)
    tested = ", ".join(f"{k}: {v}" for k, v in report["tested"].items())
    _err(f"oracle seed={args.seed} samples={args.samples}: tested {tested}; "
         f"{len(report['disagreements'])} disagreements")
    return EXIT_OK if report["all_agree"] else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thermopiezo",
        description="Admissibility checks, constitutive evaluation and 1D simulation "
                    "for gradient thermopiezoelectric materials.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="certify the uniqueness hypotheses of a material")
    p.add_argument("material", help="material JSON file")
    p.add_argument("--tol", type=float, default=None,
                   help=f"definiteness tolerance (default {DEFAULT_TOL:g} or ${TOL_ENV})")
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("eval", help="evaluate the constitutive map at a local state")
    p.add_argument("material", help="material JSON file")
    p.add_argument("state", help="state JSON file")
    p.add_argument("--out", help="write the JSON output here instead of stdout")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("simulate", help="run the 1D coupled simulation")
    p.add_argument("config", help="simulation config JSON file")
    p.add_argument("--out", help="CSV trace file")
    p.add_argument("--force", action="store_true",
                   help="run even if the material fails the admissibility gate")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("oracle", help="cross-validate closed-form and eigenvalue checks")
    p.add_argument("--samples", type=_non_negative_int, default=10000)
    p.add_argument("--range", type=float, default=2.0)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        _err(f"error: {exc}")
        return EXIT_ERROR
    except (OSError, ThermopiezoError, ValueError) as exc:
        _err(f"error: {exc}")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
