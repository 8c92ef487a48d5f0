"""Batch command-line front end.

Commands: ``constants``, ``certify``, ``simulate``, ``modelcheck``.
Reports go to stdout (JSON for certify, key/value text otherwise); exit
codes are the only pass/fail channel:

    0   success / certified / all checks pass
    1   a verification check failed
    2   certification found a counterexample
    3   certification exhausted its box budget
    5   simulation step size too large
    64  usage error

A ``--config`` file of ``key=value`` lines pre-populates any flag of the
chosen command; explicit flags win.  ``PINCHLAB_THREADS`` sets the default
parallelism, falling back to the machine's CPU count.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from pathlib import Path

from . import flow
from .certify import certify as run_certify
from .certify import constants_eval
from .models import ModelKind, ModelSpace, remark_report

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_COUNTEREXAMPLE = 2
EXIT_BUDGET = 3
EXIT_STEP = 5
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits with 2, which collides
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(v: float) -> str:
    return repr(float(v))


def _default_threads() -> int:
    env = os.environ.get("PINCHLAB_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def _load_config(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"malformed config line: {line!r}")
        key, _, value = line.partition("=")
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def _apply_config(args: argparse.Namespace, parser: _Parser) -> None:
    """Fill still-unset (None) options from the config file, then defaults."""
    if getattr(args, "config", None):
        try:
            overrides = _load_config(args.config)
        except (OSError, ValueError) as exc:
            parser.error(str(exc))
        for key, raw in overrides.items():
            if hasattr(args, key) and getattr(args, key) is None:
                setattr(args, key, raw)


def _require_float(parser: _Parser, args, name: str, default: float | None = None) -> float:
    raw = getattr(args, name)
    if raw is None:
        if default is None:
            parser.error(f"--{name.replace('_', '-')} is required")
        return default
    try:
        return float(raw)
    except (TypeError, ValueError):
        parser.error(f"--{name.replace('_', '-')}: invalid float {raw!r}")


def _require_int(parser: _Parser, args, name: str, default: int | None = None) -> int:
    raw = getattr(args, name)
    if raw is None:
        if default is None:
            parser.error(f"--{name.replace('_', '-')} is required")
        return default
    try:
        return int(raw)
    except (TypeError, ValueError):
        parser.error(f"--{name.replace('_', '-')}: invalid integer {raw!r}")


# ---------------------------------------------------------------------------
# constants
# ---------------------------------------------------------------------------


def _cmd_constants(args, parser: _Parser) -> int:
    digits = _require_int(parser, args, "digits", 5)
    report = constants_eval()
    c = report.constants
    print(f"c0             = {round(c.c0, digits)} ({_fmt(c.c0)})")
    print(f"c_tilde        = {round(c.c_tilde, digits)} ({_fmt(c.c_tilde)})")
    print(f"gamma_star     = {round(c.gamma_star, digits)} ({_fmt(c.gamma_star)})")
    print(f"gamma_starstar = {round(c.gamma_starstar, digits)} ({_fmt(c.gamma_starstar)})")
    for check in report.checks:
        status = "PASS" if check.passed else "FAIL"
        detail = ", ".join(f"{k}={_fmt(v)}" for k, v in check.detail.items() if isinstance(v, float))
        print(f"{check.name}: {status} ({detail})")
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


# ---------------------------------------------------------------------------
# certify
# ---------------------------------------------------------------------------


def _cmd_certify(args, parser: _Parser) -> int:
    gamma = _require_float(parser, args, "gamma")
    eta_lo = _require_float(parser, args, "eta_lo")
    tol = _require_float(parser, args, "tol", 1e-6)
    max_boxes = _require_int(parser, args, "max_boxes", 10_000_000)
    threads = _require_int(parser, args, "threads", _default_threads())
    mode = args.mode or "star"
    if mode not in ("star", "star-star"):
        parser.error("--mode must be star or star-star")
    if not gamma > 0.0:
        parser.error("--gamma must be positive")
    if not 0.0 < eta_lo <= 1.0:
        parser.error("--eta-lo must lie in (0, 1]")
    if not tol > 0.0:
        parser.error("--tol must be positive")
    if max_boxes <= 0:
        parser.error("--max-boxes must be positive")

    start = time.perf_counter()
    result = run_certify(gamma, eta_lo, tol=tol, max_boxes=max_boxes, threads=threads)
    runtime_ms = (time.perf_counter() - start) * 1e3

    witness = None
    if result.witness is not None:
        witness = {
            "eta": result.witness.eta,
            "x": result.witness.x,
            "y": result.witness.y,
            "value": result.witness.value,
        }
    report = {
        "mode": mode,
        "gamma": gamma,
        "eta_lo": eta_lo,
        "tol": tol,
        "status": result.status,
        "lower_bound": result.lower_bound,
        "witness": witness,
        "boxes_processed": result.boxes_processed,
        "runtime_ms": runtime_ms,
    }
    text = json.dumps(report, indent=2)
    print(text)
    if args.out:
        Path(args.out).write_text(text + "\n")
    plot = args.plot or "off"
    if plot != "off":
        from .plots import save_envelope_figure

        path = plot if plot != "auto" else _plot_path(args.out, "envelope.png")
        save_envelope_figure(gamma, eta_lo, path)
        print(f"figure written to {path}", file=sys.stderr)

    if result.status == "certified":
        return EXIT_OK
    if result.status == "counterexample":
        return EXIT_COUNTEREXAMPLE
    return EXIT_BUDGET


def _plot_path(out: str | None, fallback: str) -> str:
    if out:
        return str(Path(out).with_suffix(".png"))
    return fallback


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------

_MODELS = {
    "flat": ModelKind.FLAT4,
    "s4": ModelKind.SPHERE_S4,
    "s3xr": ModelKind.S3XR,
    "s2xr2": ModelKind.S2XR2,
}


def _initial_state(args, parser: _Parser) -> flow.FlowState:
    if args.lambdas and args.model:
        parser.error("--lambda and --model are mutually exclusive")
    if args.lambdas:
        try:
            lam = tuple(float(v) for v in args.lambdas.split(","))
        except ValueError:
            parser.error(f"--lambda: invalid eigenvalue list {args.lambdas!r}")
        if len(lam) != 4:
            parser.error("--lambda needs exactly four comma-separated values")
        return flow.FlowState(t=0.0, lam=tuple(sorted(lam)))
    model = args.model or "s3xr"
    if model not in _MODELS:
        parser.error(f"--model must be one of {', '.join(sorted(_MODELS))}")
    k = _require_float(parser, args, "k", 1.0)
    if model == "flat":
        return flow.FlowState(t=0.0, lam=(0.0, 0.0, 0.0, 0.0))
    from .curvature import ricci_spectrum
    from .models import model_curvature

    spectrum = ricci_spectrum(model_curvature(ModelSpace(_MODELS[model], k)))
    return flow.FlowState(t=0.0, lam=spectrum.lam)


def _policy(args, parser: _Parser) -> flow.WeylPolicy:
    name = args.policy or "zero"
    if name == "zero":
        return flow.ZeroWeyl()
    if name == "constant":
        w = _require_float(parser, args, "w")
        return flow.ConstantWeyl(w=w)
    if name in ("worst-star", "worst-star-star"):
        gamma = _require_float(parser, args, "gamma")
        if not gamma > 0.0:
            parser.error("--gamma must be positive")
        if name == "worst-star":
            return flow.WorstStarWeyl(gamma=gamma)
        return flow.WorstStarStarWeyl(gamma=gamma)
    parser.error("--policy must be zero, constant, worst-star or worst-star-star")


def _cmd_simulate(args, parser: _Parser) -> int:
    state = _initial_state(args, parser)
    policy = _policy(args, parser)
    dt = _require_float(parser, args, "dt", 1e-4)
    t_end = _require_float(parser, args, "t_end", 0.1)
    r_cap = _require_float(parser, args, "r_cap", 1e4)
    if dt <= 0.0:
        parser.error("--dt must be positive")
    if t_end <= state.t:
        parser.error("--t-end must exceed the initial time")
    if r_cap <= state.scalar:
        parser.error("--r-cap must exceed the initial scalar curvature")

    try:
        trace = flow.integrate(state, policy, dt=dt, t_end=t_end, r_cap=r_cap)
    except flow.StepTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STEP

    out = args.out or "trace.tsv"
    Path(out).write_text(flow.serialize_trace(trace))

    etas = trace.etas()
    finite = etas[~(etas != etas)]  # drop NaN (zero scalar curvature)
    if finite.size >= 2:
        total_drop = float(finite[0] - finite[-1])
        max_rise = float(max(finite[i + 1] - finite[i] for i in range(finite.size - 1)))
        if abs(total_drop) <= 1e-9 and max_rise <= 1e-9:
            verdict = "constant"
        elif total_drop > 0.0 and max_rise <= 1e-12:
            verdict = "decreasing"
        elif total_drop < 0.0:
            verdict = "increasing"
        else:
            verdict = "nonmonotone"
        final_eta = float(finite[-1])
    else:
        verdict = "undefined"
        final_eta = math.nan

    scalars = trace.scalars()
    monotone_r = bool((scalars[1:] >= scalars[:-1] - 1e-12).all())

    print(f"trace written to {out} ({len(trace.states)} rows)")
    print(f"termination: {trace.reason}")
    print(f"eta {verdict} {final_eta:.6f}")
    print(f"dR/dt nonnegative: {'yes' if monotone_r else 'NO'}")
    print(f"final R = {_fmt(trace.final().scalar)}")

    plot = args.plot or "auto"
    if plot != "off":
        from .plots import save_trace_figure

        path = plot if plot != "auto" else str(Path(out).with_suffix(".png"))
        save_trace_figure(trace, path)
        print(f"figure written to {path}", file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------
# modelcheck
# ---------------------------------------------------------------------------


def _cmd_modelcheck(args, parser: _Parser) -> int:
    k = _require_float(parser, args, "k", 1.0)
    all_pass = True
    for kind in (ModelKind.FLAT4, ModelKind.SPHERE_S4, ModelKind.S3XR, ModelKind.S2XR2):
        report = remark_report(ModelSpace(kind, k))
        all_pass = all_pass and report.passed
        print(f"[{kind.value} k={k:g}]")
        print(f"R = {_fmt(report.scalar)}")
        for row in report.checks:
            status = "PASS" if row.passed else "FAIL"
            if report.scalar != 0.0 and row.name in (
                "ricci0_norm",
                "weyl_norm",
                "lambda1+lambda2",
            ):
                ratio = row.value / report.scalar
                expected = row.expected / report.scalar
                label = {
                    "ricci0_norm": "|Ric0|/R",
                    "weyl_norm": "|W|/R",
                    "lambda1+lambda2": "(lambda1+lambda2)/R",
                }[row.name]
                print(
                    f"{label} = {ratio:.5f} (expected {expected:.5f}) {status}"
                    f"  [raw {_fmt(row.value)}]"
                )
            else:
                print(
                    f"{row.name} = {row.value:.5f} (expected {row.expected:.5f}) {status}"
                    f"  [raw {_fmt(row.value)}]"
                )
        print()
    print(f"modelcheck: {'PASS' if all_pass else 'FAIL'}")
    return EXIT_OK if all_pass else EXIT_CHECK_FAILED


# ---------------------------------------------------------------------------


def _build_parser() -> _Parser:
    parser = _Parser(prog="pinchlab", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p_const = sub.add_parser("constants", help="gap-threshold constants and identity checks")
    p_const.add_argument("--digits", default=None)
    p_const.add_argument("--config", default=None)

    p_cert = sub.add_parser("certify", help="certified envelope positivity over D(eta_lo)")
    p_cert.add_argument("--gamma", default=None)
    p_cert.add_argument("--eta-lo", dest="eta_lo", default=None)
    p_cert.add_argument("--mode", default=None, help="star or star-star")
    p_cert.add_argument("--tol", default=None)
    p_cert.add_argument("--max-boxes", dest="max_boxes", default=None)
    p_cert.add_argument("--threads", default=None)
    p_cert.add_argument("--out", default=None, help="also write the JSON report here")
    p_cert.add_argument("--plot", nargs="?", const="auto", default=None,
                        help="render an envelope slice figure: off (default), auto, or a path")
    p_cert.add_argument("--config", default=None)

    p_sim = sub.add_parser("simulate", help="integrate the eigenvalue flow")
    p_sim.add_argument("--model", default=None, help="flat, s4, s3xr or s2xr2")
    p_sim.add_argument("--k", default=None, help="sectional curvature of the curved factor")
    p_sim.add_argument("--lambda", dest="lambdas", default=None,
                       help="four comma-separated initial eigenvalues")
    p_sim.add_argument("--policy", default=None,
                       help="zero, constant, worst-star or worst-star-star")
    p_sim.add_argument("--w", default=None, help="Weyl value for the constant policy")
    p_sim.add_argument("--gamma", default=None, help="pinching constant for worst policies")
    p_sim.add_argument("--dt", default=None)
    p_sim.add_argument("--t-end", dest="t_end", default=None)
    p_sim.add_argument("--r-cap", dest="r_cap", default=None)
    p_sim.add_argument("--out", default=None, help="trace file path (default trace.tsv)")
    p_sim.add_argument("--plot", nargs="?", const="auto", default=None,
                       help="trace figure: auto (default, next to the trace), off, or a path")
    p_sim.add_argument("--config", default=None)

    p_model = sub.add_parser("modelcheck", help="verify the sharp model-space relations")
    p_model.add_argument("--k", default=None)
    p_model.add_argument("--config", default=None)

    return parser


_COMMANDS = {
    "constants": _cmd_constants,
    "certify": _cmd_certify,
    "simulate": _cmd_simulate,
    "modelcheck": _cmd_modelcheck,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    _apply_config(args, parser)
    return _COMMANDS[args.command](args, parser)


if __name__ == "__main__":
    sys.exit(main())
