"""Command line front end: ``shockconv run | converge | combined-run | selftest``."""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Sequence

import numpy as np

from .experiments import ConfigError, RunConfig, config_summary, converge, read_config_file, run_example
from .schemes import CFLViolation
from .swe_model import NegativeDepthError

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2

_FLAGS = {
    "scheme": str, "example": int, "cells": int, "t_final": float, "dt_mode": str, "cfl": float,
    "nu": float, "dt": float, "kappa": float, "g": float, "C": float, "mu": float,
    "weno_p": int, "weno_eps": float, "out_dir": str, "reference_multiplier": int,
}

_HELP = {
    "scheme": "cu, rbm, aweno, rbm-cu or rbm-aweno", "example": "benchmark 1-6", "cells": "coarsest N",
    "t_final": "final time (default: the example's last snapshot)", "dt_mode": "auto, adaptive, fixed or fixed_pow",
    "dt": "step for --dt-mode fixed", "kappa": "dt = kappa * dx^(5/3) for fixed_pow", "C": "RBM viscosity",
    "mu": "detector threshold", "out_dir": "relative to $SHOCKCONV_OUT",
    "reference_multiplier": "refinement factor of the reference run",
}


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="shockconv", description="1-D shallow-water shock-capturing convergence lab")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)
    for name, help_ in [("run", "run one benchmark and write snapshots and error fields"),
                        ("converge", "convergence rates on three imbedded grids"),
                        ("combined-run", "combined-scheme presets for Examples 4-6")]:
        s = sub.add_parser(name, help=help_)
        s.add_argument("--config", help="key = value file; flags override it")
        for key, kind in _FLAGS.items():
            s.add_argument("--" + key.replace("_", "-"), dest=key, type=kind, default=None, help=_HELP.get(key))
        if name != "converge":
            s.add_argument("--no-error", action="store_true", help="skip the reference / exact error field")
    sub.add_parser("selftest", help="fast oracle checks of the numerical kernels")
    return p


def _config(args: argparse.Namespace, preset: dict[str, object] | None = None) -> RunConfig:
    values: dict[str, object] = dict(preset or {})
    if args.config:
        values.update(read_config_file(args.config))
    values.update({k: getattr(args, k) for k in _FLAGS if getattr(args, k) is not None})
    return RunConfig.from_mapping(values)


def selftest() -> list[tuple[str, bool, str]]:
    """A handful of cheap oracle checks; returns ``(name, ok, detail)`` rows."""
    from .benchmarks import breaking_time_one_shock
    from .grids import Grid1D
    from .rates import QUAD_WEIGHTS, runge_ratio_rate
    from .reconstruction import candidate_values, wenoz_weights
    from .schemes import cu_rhs
    from .swe_model import SHOCK_LEFT, SHOCK_RIGHT, SHOCK_SPEED, flux
    from .time_march import ssprk3_step

    rows = []
    s = np.arange(-2, 3, dtype=float)
    quad = max(abs(QUAD_WEIGHTS @ s**k - ((0.5**(k + 1) - (-0.5) ** (k + 1)) / (k + 1))) for k in range(6))
    rows.append(("quadrature exact to degree 5", quad < 1e-14, f"{quad:.2e}"))

    rng = np.random.default_rng(0)
    v = rng.normal(size=(5, 100))
    w = np.array(wenoz_weights(*v))
    rows.append(("WENO-Z weights sum to 1", bool(np.allclose(w.sum(axis=0), 1, atol=1e-14)), ""))
    quadv = np.array([(k - 2.0) ** 2 for k in range(5)])[:, None]
    vals = np.array(candidate_values(*quadv))
    rows.append(("WENO-Z candidates exact on quadratics", bool(np.allclose(vals, 0.25, atol=1e-13)), ""))

    z = -0.7 + 0.3j
    amp = ssprk3_step(np.array([1.0 + 0j]), 0.0, 1.0, lambda W: z * W)[0]
    err = abs(amp - (1 + z + z**2 / 2 + z**3 / 6))
    rows.append(("SSP-RK3 amplification factor", err < 1e-14, f"{err:.2e}"))

    p = np.array([1.0, 2.0, 3.0, 5.0])
    rec = runge_ratio_rate(0.5 ** (2 * p), 0.5**p)
    rows.append(("Runge estimator recovers exponents", bool(np.allclose(rec, p, atol=1e-10)), str(rec)))

    L, R = np.array(SHOCK_LEFT)[:, None], np.array(SHOCK_RIGHT)[:, None]
    rh = np.abs(SHOCK_SPEED * (L - R) - (flux(L, 10.0) - flux(R, 10.0))).max()
    rows.append(("Rankine-Hugoniot residual", rh < 1e-12, f"{rh:.2e}"))

    T = breaking_time_one_shock()
    rows.append(("breaking time before the observed breakdown", 0.52 < T < 0.54, f"{T:.6f}"))

    grid = Grid1D(0.0, 10.0, 64)
    U = np.stack([2.0 + np.sin(grid.centers), 0.3 * np.cos(grid.centers)])
    mass = np.abs(cu_rhs(U, grid, 10.0).dUdt.sum(axis=1)).max() * grid.dx
    rows.append(("periodic conservation", mass < 1e-12, f"{mass:.2e}"))
    return rows


def main(argv: Sequence[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if args.command == "selftest":
        rows = selftest()
        for name, ok, detail in rows:
            print(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}".rstrip())
        return EXIT_OK if all(ok for _, ok, _ in rows) else EXIT_NUMERICAL
    try:
        preset = None
        if args.command == "combined-run":
            ex = args.example or 4
            preset = {"example": ex, "scheme": "rbm-cu"}
        cfg = _config(args, preset)
        if args.command == "combined-run" and not cfg.combined:
            raise ConfigError("combined-run needs scheme rbm-cu or rbm-aweno")
        logging.getLogger(__name__).info(config_summary(cfg))
        if args.command == "converge":
            labels = ("I^N-I^exact", "I^2N-I^exact") if cfg.spec.has_exact else ("I^N-I^2N", "I^2N-I^4N")
            for t, rep in converge(cfg).items():
                e0, e1 = rep.w11_errors
                print(f"t={t:g}  ||{labels[0]}||={e0:.3e}  ||{labels[1]}||={e1:.3e}  W11 rate={rep.w11_rate:.3f}")
        else:
            written = run_example(cfg, with_error=not args.no_error)
            for t, files in written.items():
                print(f"t={t:g}  " + "  ".join(str(p) for p in files.values()))
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except (NegativeDepthError, CFLViolation, FloatingPointError) as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
