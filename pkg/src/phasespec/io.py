"""Run configuration, batch scans and dataset serialization.

A configuration is a flat JSON object whose keys mirror
:class:`~phasespec.params.SystemParams` plus grid controls::

    {"name": "demo", "gamma12": 0.5, "omega12": 20, "n_photons": 0.5,
     "m_abs": 0.8660254, "phi_b": 3.14159, "gamma_d": 2,
     "omega_min": -35, "omega_max": 35, "omega_step": 0.2,
     "t_max": 4, "t_step": 0.05,
     "products": ["spectrum", "populations", "holes"]}

``"figure": "fig5"`` seeds every parameter from a reference-figure preset; explicit
keys still override it.  ``kr12`` / ``cos_theta`` give the collective damping
through the pair geometry, but an explicit ``gamma12`` always wins.

Each run writes its datasets plus ``<name>_meta.json``, which holds the fully
resolved configuration and can be passed back to ``simulate --config``.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .dynamics import population_trajectory, steady_state
from .entanglement import concurrence_trajectory, esd_times
from .figures import get_figure
from .geometry import AtomPairGeometry, collective_damping
from .params import SystemParams, bell_collective_state, bell_initial_state, validate_params
from .spectrum import SpectrumGrid, broadband_spectrum, detect_hole, physical_spectrum_grid

PRODUCTS = (
    "spectrum",
    "broadband_spectrum",
    "populations",
    "concurrence",
    "holes",
    "broadband_holes",
    "esd",
    "steady_state",
)
WORKERS_ENV = "PHASESPEC_WORKERS"
_PARAM_KEYS = tuple(f.name for f in dataclasses.fields(SystemParams))
_FMT = "{:.9g}"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    name: str
    params: SystemParams
    products: tuple
    omega_min: float
    omega_max: float
    omega_step: float = 0.2
    t_max: float = 4.0
    t_step: float = 0.05
    esd_t_max: float = 10.0
    esd_step: float = 0.01
    kr12: float | None = None
    cos_theta: float | None = None
    extra: dict = field(default_factory=dict)

    def omega_axis(self) -> np.ndarray:
        n = int(round((self.omega_max - self.omega_min) / self.omega_step))
        return np.round(self.omega_min + self.omega_step * np.arange(n + 1), 10)

    def time_axis(self) -> np.ndarray:
        n = int(round(self.t_max / self.t_step))
        return np.round(self.t_step * np.arange(n + 1), 10)

    def to_dict(self) -> dict:
        out = {"name": self.name}
        out.update(self.params.to_dict())
        out.update(
            products=list(self.products),
            omega_min=self.omega_min,
            omega_max=self.omega_max,
            omega_step=self.omega_step,
            t_max=self.t_max,
            t_step=self.t_step,
            esd_t_max=self.esd_t_max,
            esd_step=self.esd_step,
        )
        if self.kr12 is not None:
            out.update(kr12=self.kr12, cos_theta=self.cos_theta)
        return out


_GRID_KEYS = ("omega_min", "omega_max", "omega_step", "t_max", "t_step", "esd_t_max", "esd_step")
_KNOWN = set(_PARAM_KEYS) | set(_GRID_KEYS) | {"name", "figure", "products", "kr12", "cos_theta"}


def parse_config(raw: dict) -> RunConfig:
    """Resolve a raw mapping into a validated :class:`RunConfig`."""
    if not isinstance(raw, dict):
        raise ConfigError("configuration must be a JSON object")
    if "config" in raw and isinstance(raw["config"], dict):
        raw = raw["config"]  # a metadata sidecar
    unknown = set(raw) - _KNOWN
    if unknown:
        raise ConfigError(f"unknown configuration keys: {', '.join(sorted(unknown))}")

    base = {}
    name = raw.get("name")
    if "figure" in raw:
        try:
            spec = get_figure(raw["figure"])
        except KeyError as exc:
            raise ConfigError(str(exc)) from None
        if not spec.single:
            raise ConfigError(f"{spec.name} has several runs; use the 'figure' command")
        base.update(spec.runs[0].params.to_dict())
        name = name or spec.name
    for key in _PARAM_KEYS:
        if key in raw:
            base[key] = raw[key]
    kr12 = raw.get("kr12")
    cos_theta = raw.get("cos_theta", 0.0 if kr12 is not None else None)
    if kr12 is not None and "gamma12" not in raw and not base.get("dicke", False):
        try:
            geom = AtomPairGeometry(float(kr12), float(cos_theta))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid geometry: {exc}") from None
        base["gamma12"] = collective_damping(geom) * float(base.get("gamma", 1.0))
    try:
        params = validate_params(SystemParams(**base))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid parameters: {exc}") from None

    products = raw.get("products")
    if products is None:
        products = list(get_figure(raw["figure"]).products) if "figure" in raw else []
    if isinstance(products, str):
        products = [products]
    if not products:
        raise ConfigError("nothing to compute: 'products' is empty")
    bad = [p for p in products if p not in PRODUCTS]
    if bad:
        raise ConfigError(f"unknown products {bad}; choose from {', '.join(PRODUCTS)}")

    w12 = abs(params.omega12) / params.gamma
    grid = {
        "omega_min": -w12 - 15.0,
        "omega_max": w12 + 15.0,
        "omega_step": 0.2,
        "t_max": 4.0,
        "t_step": 0.05,
        "esd_t_max": 10.0,
        "esd_step": 0.01,
    }
    for key in _GRID_KEYS:
        if key in raw:
            try:
                grid[key] = float(raw[key])
            except (TypeError, ValueError):
                raise ConfigError(f"{key} must be a number") from None
    if not all(math.isfinite(v) for v in grid.values()):
        raise ConfigError("grid controls must be finite")
    if grid["omega_step"] <= 0 or grid["t_step"] <= 0 or grid["esd_step"] <= 0:
        raise ConfigError("grid steps must be positive")
    if grid["omega_max"] <= grid["omega_min"] or grid["t_max"] <= 0 or grid["esd_t_max"] <= 0:
        raise ConfigError("grid ranges must be non-empty")

    return RunConfig(
        name=str(name or "run"),
        params=params,
        products=tuple(dict.fromkeys(products)),
        kr12=None if kr12 is None else float(kr12),
        cos_theta=None if cos_theta is None else float(cos_theta),
        **grid,
    )


def load_config(path) -> RunConfig:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from None
    return parse_config(raw)


def worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ConfigError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from None


def _chunked_grid(fn, omega, workers):
    if workers == 1 or omega.size < 2 * workers:
        return fn(omega)
    chunks = np.array_split(omega, workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(fn, chunks))
    return np.concatenate(parts, axis=0)


def compute_spectrum(params, rho0, omega, times, kind="physical", workers=1) -> SpectrumGrid:
    if kind == "physical":
        values = _chunked_grid(
            lambda w: physical_spectrum_grid(params, rho0, w, times).values, omega, workers
        )
    elif kind == "broadband":
        values = _chunked_grid(
            lambda w: np.array([broadband_spectrum(params, rho0, w, t) for t in times]).T,
            omega,
            workers,
        )
    else:
        raise ValueError(f"unknown spectrum kind {kind!r}")
    return SpectrumGrid(omega, times, values, params)


def _fmt(x) -> str:
    return _FMT.format(float(x))


def _write_csv(path: Path, header, rows) -> Path:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
    return path


def write_spectrum(path, grid: SpectrumGrid) -> Path:
    rows = (
        (w, t, grid.values[i, k])
        for i, w in enumerate(grid.omega_tilde)
        for k, t in enumerate(grid.time)
    )
    return _write_csv(Path(path), ("omega_tilde", "gamma_t", "S"), rows)


TRAJECTORY_HEADER = ("gamma_t", "rho_ee", "rho_ss", "rho_aa", "rho_u", "rho_v", "concurrence")


def trajectory_rows(params, times):
    x = population_trajectory(params, bell_collective_state(params), times)
    conc = concurrence_trajectory(params, bell_initial_state(params.phi_b), times).concurrence
    gamma_t = np.asarray(times) * params.gamma
    return np.column_stack([gamma_t, x, conc])


def write_trajectory(path, params, times) -> Path:
    return _write_csv(Path(path), TRAJECTORY_HEADER, trajectory_rows(params, times))


def write_holes(path, grid: SpectrumGrid) -> Path:
    w12 = grid.params.omega12 / grid.params.gamma
    rows = []
    for centre in sorted({-w12, w12}):
        for t0, t1 in detect_hole(grid, centre):
            rows.append((centre, t0, t1))
    return _write_csv(Path(path), ("line_center", "t_start", "t_end"), rows)


def _write_json(path: Path, payload) -> Path:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def _round9(x):
    return float(_fmt(x))


def execute(config: RunConfig, out_dir, workers: int | None = None) -> list[Path]:
    """Compute every requested product for one run and write it to ``out_dir``."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    workers = worker_count() if workers is None else workers
    p = config.params
    rho0 = bell_initial_state(p.phi_b)
    prefix = config.name
    written = []
    grids = {}

    def grid(kind):
        if kind not in grids:
            grids[kind] = compute_spectrum(
                p, rho0, config.omega_axis(), config.time_axis(), kind, workers
            )
        return grids[kind]

    for product in config.products:
        if product == "spectrum":
            written.append(write_spectrum(out_dir / f"{prefix}_spectrum.csv", grid("physical")))
        elif product == "broadband_spectrum":
            written.append(write_spectrum(out_dir / f"{prefix}_broadband.csv", grid("broadband")))
        elif product == "holes":
            written.append(write_holes(out_dir / f"{prefix}_holes.csv", grid("physical")))
        elif product == "broadband_holes":
            written.append(write_holes(out_dir / f"{prefix}_broadband_holes.csv", grid("broadband")))
        elif product == "populations":
            written.append(
                write_trajectory(out_dir / f"{prefix}_populations.csv", p, config.time_axis())
            )
        elif product == "concurrence":
            n = int(round(config.esd_t_max / config.esd_step))
            times = np.round(config.esd_step * np.arange(n + 1), 10)
            written.append(write_trajectory(out_dir / f"{prefix}_concurrence.csv", p, times))
        elif product == "esd":
            res = esd_times(p, rho0, config.esd_t_max, step=config.esd_step)
            payload = {
                "death_times": [_round9(t) for t in res.death_times],
                "revival_times": [_round9(t) for t in res.revival_times],
                "steady_value": _round9(res.steady_value),
                "t_max": res.t_max,
            }
            written.append(_write_json(out_dir / f"{prefix}_esd.json", payload))
        elif product == "steady_state":
            state, rho_eg = steady_state(p)
            payload = {
                "rho_ee": _round9(state.rho_ee),
                "rho_ss": _round9(state.rho_ss),
                "rho_aa": _round9(state.rho_aa),
                "rho_gg": _round9(state.rho_gg),
                "rho_u": _round9(state.rho_u),
                "rho_v": _round9(state.rho_v),
                "rho_eg_abs": _round9(abs(rho_eg)),
                "rho_eg_phase": _round9(np.angle(rho_eg)) if abs(rho_eg) > 0 else 0.0,
            }
            written.append(_write_json(out_dir / f"{prefix}_steady.json", payload))

    meta = {
        "config": config.to_dict(),
        "grid": {
            "n_omega": int(config.omega_axis().size),
            "n_time": int(config.time_axis().size),
        },
        "outputs": [path.name for path in written],
        "package_version": __version__,
    }
    written.append(_write_json(out_dir / f"{prefix}_meta.json", meta))
    return written


def run_scan(config_file, out_dir=None, workers: int | None = None) -> list[Path]:
    """Load a configuration file and execute it.

    Outputs go to ``out_dir`` or, by default, next to the configuration file.
    """
    config = load_config(config_file)
    if out_dir is None:
        out_dir = Path(config_file).resolve().parent
    return execute(config, out_dir, workers)


def reproduce_figure(name: str, out_dir, workers: int | None = None) -> list[Path]:
    """Write the datasets behind one reference figure."""
    spec = get_figure(name)
    written = []
    for run in spec.runs:
        raw = {"name": run.label, "products": list(spec.products), **run.params.to_dict()}
        if "concurrence" in spec.products:
            raw["esd_t_max"] = spec.t_max
        else:
            raw["t_max"] = spec.t_max
        written.extend(execute(parse_config(raw), out_dir, workers))
    return written
