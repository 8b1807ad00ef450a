"""Benchmark runs, convergence studies, error fields and CSV output."""

from __future__ import annotations

import logging
import os
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Mapping

import numpy as np

from .benchmarks import ExampleSpec, get_example, make_initial, representation_for
from .combined import CombinedRun, run_combined
from .grids import Grid1D, build_triple
from .rates import RateReport, interface_point_values, rates_vs_exact, triple_report
from .reconstruction import WenoParams
from .schemes import RBMConfig, SchemeConfig, max_wave_speed
from .swe_model import isolated_shock_antiderivative, isolated_shock_exact
from .time_march import StepPolicy, choose_dt, convergence_policy, march

logger = logging.getLogger(__name__)

SCHEME_NAMES = ("cu", "rbm", "aweno", "rbm-cu", "rbm-aweno")
DT_MODES = ("auto", "adaptive", "fixed", "fixed_pow")
OUT_ROOT_ENV = "SHOCKCONV_OUT"
LOG_FLOOR = -16.0
COMBINED_NU = 0.2
CSV_FMT = "%.16e"


class ConfigError(ValueError):
    """Invalid run configuration (CLI exit code 1)."""


@dataclass(frozen=True)
class RunConfig:
    scheme: str = "cu"
    example: int = 1
    cells: int = 500
    t_final: float | None = None
    dt_mode: str = "auto"
    cfl: float = 0.5
    nu: float | None = None
    dt: float | None = None
    kappa: float | None = None
    g: float = 10.0
    C: float = 2.8
    rbm_cfl: float = 0.9
    mu: float | None = None
    weno_p: int = 2
    weno_eps: float = 1e-12
    out_dir: str = "out"
    reference_multiplier: int = 8

    def __post_init__(self) -> None:
        if self.scheme not in SCHEME_NAMES:
            raise ConfigError(f"scheme must be one of {SCHEME_NAMES}, got {self.scheme!r}")
        if self.example not in range(1, 7):
            raise ConfigError(f"example must be 1..6, got {self.example}")
        if self.cells < 8:
            raise ConfigError("need at least 8 cells")
        if self.t_final is not None and not self.t_final > 0:
            raise ConfigError("t_final must be positive")
        if self.dt_mode not in DT_MODES:
            raise ConfigError(f"dt_mode must be one of {DT_MODES}")
        if self.dt_mode == "fixed" and not (self.dt or 0) > 0:
            raise ConfigError("dt_mode=fixed needs dt > 0")
        if self.dt_mode == "fixed_pow" and not (self.kappa or 0) > 0:
            raise ConfigError("dt_mode=fixed_pow needs kappa > 0")
        if self.dt_mode == "adaptive" and self.combined:
            raise ConfigError("combined schemes march with constant steps")
        if self.mu is not None and not self.mu > 0:
            raise ConfigError("mu must be positive")
        if self.reference_multiplier < 1 or self.reference_multiplier & (self.reference_multiplier - 1):
            raise ConfigError("reference_multiplier must be a power of two")
        try:
            self.scheme_config()
        except ValueError as err:
            raise ConfigError(str(err)) from err

    @property
    def combined(self) -> bool:
        return self.scheme.startswith("rbm-")

    @property
    def spec(self) -> ExampleSpec:
        return get_example(self.example)

    @property
    def snapshot_times(self) -> tuple[float, ...]:
        times = self.spec.snapshot_times
        if self.t_final is None:
            return times
        return tuple(t for t in times if t < self.t_final) + (self.t_final,)

    def scheme_config(self) -> SchemeConfig:
        mu = self.mu if self.mu is not None else (self.spec.mu or 0.2)
        return SchemeConfig(g=self.g, rbm=RBMConfig(self.C, self.rbm_cfl),
                            weno=WenoParams(self.weno_p, self.weno_eps), mu=mu)

    @classmethod
    def from_mapping(cls, values: Mapping[str, object]) -> RunConfig:
        known = {f.name: f for f in fields(cls)}
        kwargs = {}
        for key, raw in values.items():
            key = key.strip()
            if key not in known:
                raise ConfigError(f"unknown config key {key!r}")
            if raw is None or raw == "":
                continue
            kind = known[key].type
            try:
                if "int" in kind:
                    kwargs[key] = int(raw)
                elif "float" in kind:
                    kwargs[key] = float(raw)
                else:
                    kwargs[key] = str(raw)
            except ValueError:
                raise ConfigError(f"bad value {raw!r} for {key}") from None
        return cls(**kwargs)


def read_config_file(path: str | os.PathLike) -> dict[str, str]:
    """Flat ``key = value`` file; ``#`` starts a comment."""
    out = {}
    try:
        text = Path(path).read_text()
    except OSError as err:
        raise ConfigError(f"cannot read config file: {err}") from None
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{n}: expected key = value")
        k, v = line.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def output_dir(cfg: RunConfig) -> Path:
    out = Path(cfg.out_dir)
    root = os.environ.get(OUT_ROOT_ENV)
    if root and not out.is_absolute():
        out = Path(root) / out
    return out


def base_scheme(scheme: str) -> str:
    return "rbm" if scheme.startswith("rbm-") else scheme


def _policy(cfg: RunConfig, grid: Grid1D, a0: float, dx_coarse: float) -> StepPolicy:
    if cfg.dt_mode == "adaptive":
        return StepPolicy("adaptive", cfl=cfg.cfl)
    if cfg.dt_mode == "fixed":
        return StepPolicy("fixed", dt=cfg.dt)
    if cfg.dt_mode == "fixed_pow":
        return StepPolicy("fixed_pow", kappa=cfg.kappa)
    if cfg.combined:
        return StepPolicy("fixed", dt=(cfg.nu or COMBINED_NU) * grid.dx / a0)
    return convergence_policy(cfg.scheme, grid, a0, dx_coarse, nu=cfg.nu or 0.25)


@dataclass
class Solution:
    grid: Grid1D
    snapshots: dict[float, np.ndarray]
    steps: int
    combined: CombinedRun | None = None


def solve(cfg: RunConfig, grid: Grid1D, a0: float | None = None, dx_coarse: float | None = None) -> Solution:
    """Run ``cfg`` on ``grid``; ``a0`` and ``dx_coarse`` tie the step to a grid family."""
    spec = cfg.spec
    sconf = cfg.scheme_config()
    U0 = make_initial(spec.base, grid, representation_for(base_scheme(cfg.scheme)), cfg.g)
    if a0 is None:
        a0 = max_wave_speed(U0, cfg.g)
    policy = _policy(cfg, grid, a0, dx_coarse or grid.dx)
    times = cfg.snapshot_times
    if cfg.combined:
        dt = choose_dt(U0, grid, cfg.g, policy)
        internal = cfg.scheme.split("-", 1)[1]
        run = run_combined(U0, grid, internal, dt, times[-1], times, sconf, spec.bc)
        return Solution(grid, dict(run.exported.snapshots), run.exported.steps, run)
    rec = march(U0, grid, cfg.scheme, policy, times[-1], times, sconf, spec.bc)
    return Solution(grid, dict(rec.snapshots), rec.steps)


def finest_speed(cfg: RunConfig, grid: Grid1D) -> float:
    U = make_initial(cfg.spec.base, grid, representation_for(base_scheme(cfg.scheme)), cfg.g)
    return max_wave_speed(U, cfg.g)


def _time_dir(out: Path, t: float) -> Path:
    d = out / f"t{t:g}"
    d.mkdir(parents=True, exist_ok=True)
    return d


def write_csv(path: Path, columns: Mapping[str, np.ndarray]) -> Path:
    data = np.column_stack([np.asarray(c, dtype=float) for c in columns.values()])
    np.savetxt(path, data, fmt=CSV_FMT, delimiter=",", header=",".join(columns), comments="")
    return path


@dataclass(frozen=True)
class ErrorField:
    x: np.ndarray
    log10_rel_err: np.ndarray


def log10_relative_error(h: np.ndarray, h_ref: np.ndarray, floor: float = LOG_FLOOR) -> np.ndarray:
    h_ref = np.asarray(h_ref, dtype=float)
    if np.any(h_ref == 0):
        raise ValueError("reference depth vanishes; relative error undefined")
    rel = np.abs((np.asarray(h) - h_ref) / h_ref)
    with np.errstate(divide="ignore"):
        return np.maximum(np.log10(rel), floor)


def _interface_depths(cfg: RunConfig, U: np.ndarray, grid: Grid1D) -> np.ndarray:
    sconf = cfg.scheme_config()
    return interface_point_values(U, grid, base_scheme(cfg.scheme), cfg.g, cfg.spec.bc, sconf.weno)[0]


def reference_error_field(cfg: RunConfig, multiplier: int | None = None,
                          solution: Solution | None = None) -> dict[float, ErrorField]:
    """log10 relative depth error at the interfaces against a refined run or the exact solution."""
    mult = cfg.reference_multiplier if multiplier is None else multiplier
    if mult < 1 or mult & (mult - 1):
        raise ConfigError("reference multiplier must be a power of two")
    grid = Grid1D(0.0, 10.0, cfg.cells)
    sol = solution or solve(cfg, grid)
    ref = None
    if not cfg.spec.has_exact and mult > 1:
        rgrid = Grid1D(0.0, 10.0, cfg.cells * mult)
        ref = solve(cfg, rgrid, dx_coarse=grid.dx)
    out = {}
    for t, U in sol.snapshots.items():
        h = _interface_depths(cfg, U, grid)
        if cfg.spec.has_exact:
            h_ref = isolated_shock_exact(grid.interfaces, t, cfg.g)[0]
        elif ref is None:
            h_ref = h
        else:
            h_ref = _interface_depths(cfg, ref.snapshots[t], ref.grid)[::mult]
        out[t] = ErrorField(grid.interfaces, log10_relative_error(h, h_ref))
    return out


def run_example(cfg: RunConfig, with_error: bool = True) -> dict[float, dict[str, Path]]:
    """Snapshots (and error fields) of one run, written under ``out_dir/t<time>/``."""
    out = output_dir(cfg)
    grid = Grid1D(0.0, 10.0, cfg.cells)
    sol = solve(cfg, grid)
    written: dict[float, dict[str, Path]] = {}
    for t, U in sol.snapshots.items():
        d = _time_dir(out, t)
        written[t] = {"solution": write_csv(d / "solution.csv", {"x": grid.centers, "h": U[0], "q": U[1]})}
    if with_error:
        for t, ef in reference_error_field(cfg, solution=sol).items():
            written[t]["error"] = write_csv(_time_dir(out, t) / "error.csv",
                                            {"x": ef.x, "log10_rel_err": ef.log10_rel_err})
    write_plot_script(out)
    logger.info("%s example %d on %d cells: %d steps", cfg.scheme, cfg.example, cfg.cells, sol.steps)
    return written


def converge(cfg: RunConfig, component: int = 0) -> dict[float, RateReport]:
    """Rates from the N / 2N / 4N triple (or the N / 2N pair against the exact solution)."""
    spec = cfg.spec
    sconf = cfg.scheme_config()
    scheme = base_scheme(cfg.scheme)
    triple = build_triple(0.0, 10.0, cfg.cells)
    grids = [triple.coarse, triple.mid] if spec.has_exact else list(triple)
    a0 = finest_speed(cfg, triple.fine)
    sols = [solve(cfg, gr, a0=a0, dx_coarse=triple.coarse.dx) for gr in grids]
    reports = {}
    for t in cfg.snapshot_times:
        fields_t = [s.snapshots[t] for s in sols]
        if spec.has_exact:
            rep = rates_vs_exact(
                fields_t, grids, scheme,
                lambda x: isolated_shock_exact(x, t, cfg.g)[component],
                lambda x: isolated_shock_antiderivative(x, t, component),
                cfg.g, spec.bc, sconf.weno, component)
            sizes = (cfg.cells, 2 * cfg.cells)
        else:
            rep = triple_report(fields_t, grids, scheme, cfg.g, spec.bc, sconf.weno, component)
            sizes = (cfg.cells, 2 * cfg.cells)
        reports[t] = rep
        write_rate_files(_time_dir(output_dir(cfg), t), rep, sizes)
    write_plot_script(output_dir(cfg))
    return reports


def write_rate_files(d: Path, rep: RateReport, sizes: tuple[int, int]) -> None:
    write_csv(d / "rates_pointwise.csv", {"x": rep.x, "r": rep.pointwise, "r_ave": rep.averaged})
    write_csv(d / "rates_integral.csv", {"x": rep.x, "r_int": rep.integral})
    write_csv(d / "w11.csv", {"N": np.array(sizes, dtype=float),
                              "err_L1": np.array(rep.w11_errors),
                              "rate": np.array([np.nan, rep.w11_rate])})


PLOT_SCRIPT = '''"""Plots every CSV written next to this file (needs matplotlib)."""
import csv
import pathlib

import matplotlib.pyplot as plt

here = pathlib.Path(__file__).parent
for path in sorted(here.glob("t*/*.csv")):
    with open(path) as fh:
        rows = list(csv.reader(fh))
    head, body = rows[0], [[float(v) for v in r] for r in rows[1:]]
    if head[0] != "x":
        continue
    fig, ax = plt.subplots()
    for k, name in enumerate(head[1:], 1):
        ax.plot([r[0] for r in body], [r[k] for r in body], label=name)
    ax.set_xlabel("x")
    ax.set_title(f"{path.parent.name}/{path.stem}")
    ax.legend()
    fig.savefig(path.with_suffix(".png"), dpi=120)
    plt.close(fig)
'''


def write_plot_script(out: Path) -> Path:
    out.mkdir(parents=True, exist_ok=True)
    path = out / "plot.py"
    path.write_text(PLOT_SCRIPT)
    return path


def config_summary(cfg: RunConfig) -> str:
    return " ".join(f"{k}={v}" for k, v in asdict(cfg).items() if v is not None)


def with_overrides(cfg: RunConfig, **kw) -> RunConfig:
    try:
        return replace(cfg, **{k: v for k, v in kw.items() if v is not None})
    except TypeError as err:
        raise ConfigError(str(err)) from None
