"""Parameter sweeps, CSV tables and figure-data bundles."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import dynamics as dyn
from . import leggett_garg as lg
from .family import DEGENERACY_GUARD, FamilyParams, InvalidParametersError

CURVE_POINTS = 512
FIGURE_POINTS = 513  # keeps pi/4 multiples of the figure ranges on the grid
K3MAX_POINTS = 129
MAXIMIZER_GRID = 1024


def fmt(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"refusing to emit non-finite value {x!r}")
    return f"{x:.16e}"


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    min: float
    max: float
    points: int
    fixed: dict = field(default_factory=dict)
    scenarios: tuple = ()

    def __post_init__(self):
        if self.variable not in ("t", "T", "alpha"):
            raise InvalidParametersError(f"cannot sweep {self.variable!r}")
        if not (math.isfinite(self.min) and math.isfinite(self.max)) or not self.min < self.max:
            raise InvalidParametersError(f"sweep range needs min < max, got [{self.min}, {self.max}]")
        if int(self.points) != self.points or self.points < 2:
            raise InvalidParametersError(f"points must be an integer >= 2, got {self.points!r}")

    def grid(self) -> np.ndarray:
        return np.linspace(self.min, self.max, int(self.points))


@dataclass
class CsvTable:
    header: list[str]
    rows: list[tuple[float, ...]]

    def column(self, name: str) -> np.ndarray:
        i = self.header.index(name)
        return np.array([r[i] for r in self.rows], dtype=float)

    def to_csv(self) -> str:
        lines = [",".join(self.header)]
        for row in self.rows:
            if len(row) != len(self.header):
                raise ValueError("ragged CSV row")
            lines.append(",".join(fmt(v) for v in row))
        return "\n".join(lines) + "\n"

    def write(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_csv())


def _map(fn, items, workers: int):
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def cmd_energy(phi: float, alpha: float, t_min: float = 0.0, t_max: float = math.pi, points: int = CURVE_POINTS) -> CsvTable:
    p = FamilyParams(phi, alpha)
    t = SweepSpec("t", t_min, t_max, points).grid()
    return CsvTable(["t", "E"], list(zip(t, dyn.energy(p, t))))


def cmd_tau(phi: float, alpha: float, t_min: float = 0.0, t_max: float = math.pi, points: int = CURVE_POINTS) -> CsvTable:
    p = FamilyParams(phi, alpha)
    t = SweepSpec("t", t_min, t_max, points).grid()
    return CsvTable(["t", "tau"], list(zip(t, dyn.tau(p, t))))


def cmd_k3(
    phi: float,
    alpha: float,
    scenario: lg.ScenarioKind,
    T_min: float = 0.0,
    T_max: float = math.pi,
    points: int = CURVE_POINTS,
) -> CsvTable:
    p = FamilyParams(phi, alpha)
    if T_min < 0 or T_max > math.pi:
        raise InvalidParametersError(f"T range [{T_min}, {T_max}] must lie within [0, pi]")
    T = SweepSpec("T", T_min, T_max, points).grid()
    c = lg.k3_curve(p, T, scenario)
    cols = [c["T"], c["c12"], c["c23"], c["c13"], c["k3"], c["defect"]]
    return CsvTable(["T", "C12", "C23", "C13", "K3", "defect"], list(zip(*cols)))


def admissible(phi: float, alpha: float) -> bool:
    return 1.0 + math.cos(phi) * math.sin(2 * alpha) >= DEGENERACY_GUARD


def alpha_grid(phi: float, alpha_min: float, alpha_max: float, points: int) -> tuple[np.ndarray, np.ndarray]:
    """Uniform alpha grid split into (kept, clipped-by-degeneracy-guard) values."""
    grid = SweepSpec("alpha", alpha_min, alpha_max, points).grid()
    if alpha_min < 0 or alpha_max > math.pi / 2:
        raise InvalidParametersError("alpha range must lie within [0, pi/2]")
    ok = np.array([admissible(phi, a) for a in grid], dtype=bool)
    return grid[ok], grid[~ok]


def cmd_k3max(
    phi: float,
    scenario: lg.ScenarioKind,
    alpha_min: float = 0.0,
    alpha_max: float = math.pi / 4,
    points: int = K3MAX_POINTS,
    workers: int = 1,
) -> CsvTable:
    FamilyParams(phi, 0.0)  # validates phi
    kept, _ = alpha_grid(phi, alpha_min, alpha_max, points)

    def one(alpha):
        r = lg.k3_max_over_T(FamilyParams(phi, alpha), scenario, MAXIMIZER_GRID, 1e-10)
        return (alpha, r.k3_max, r.t_star)

    return CsvTable(["alpha", "K3_max", "T_star"], _map(one, kept, workers))


FIGURE_ALPHAS = ((math.pi / 4, "pi_4"), (math.pi / 8, "pi_8"), (0.0, "0"))
FIGURE_IDS = (1, 2, 4, 5)


def _num(x: float) -> str:
    return repr(float(x))


def _manifest_line(key: str, **fields) -> str:
    parts = [f"{k}:{_num(v) if isinstance(v, float) else v}" for k, v in fields.items()]
    return f"{key}=" + ";".join(parts)


def cmd_figure(fig_id: int, out_dir, workers: int = 1) -> list[Path]:
    """Write one CSV per curve of the figure plus ``fig<N>_manifest.txt``; returns written paths."""
    if fig_id not in FIGURE_IDS:
        raise InvalidParametersError(f"unknown figure {fig_id!r}; available: {FIGURE_IDS}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    manifest = [f"figure={fig_id}"]

    def emit(name: str, table: CsvTable, **params):
        path = out / f"fig{fig_id}_{name}.csv"
        table.write(path)
        written.append(path)
        manifest.append(_manifest_line(f"curve.{name}", file=path.name, **params))

    if fig_id in (1, 2):
        phi = 0.8 if fig_id == 1 else 0.95
        fn, x = (cmd_energy, "E") if fig_id == 1 else (cmd_tau, "tau")
        manifest.append(f"x=t\ny={x}")
        for alpha, tag in FIGURE_ALPHAS:
            emit(f"alpha_{tag}", fn(phi, alpha, 0.0, 2 * math.pi, FIGURE_POINTS), phi=phi, alpha=alpha)
    elif fig_id == 4:
        phi, alpha = 0.9 * math.pi, math.pi / 4
        manifest.append("x=T\ny=K3")
        for s in lg.ScenarioKind:
            emit(s.value, cmd_k3(phi, alpha, s, 0.0, math.pi, FIGURE_POINTS), phi=phi, alpha=alpha, scenario=s.value)
    else:
        phi = 0.9 * math.pi
        kept, clipped = alpha_grid(phi, 0.0, math.pi / 4, K3MAX_POINTS)
        manifest.append("x=alpha\ny=K3_max")
        manifest.append(f"alpha_range={_num(kept[0])},{_num(kept[-1])}")
        manifest.append("alpha_clipped=" + (",".join(_num(a) for a in clipped) if clipped.size else "none"))
        for s in lg.ScenarioKind:
            table = cmd_k3max(phi, s, 0.0, math.pi / 4, K3MAX_POINTS, workers)
            emit(s.value, table, phi=phi, scenario=s.value, T_range="0,pi")
    if fig_id in (4, 5):
        manifest.append(f"ref_line.ttb={_num(lg.TTB)}")
        manifest.append(f"ref_line.algebraic_max={_num(lg.ALGEBRAIC_MAX)}")
        manifest.append(f"time_scale_to_original={_num(lg.PHYSICAL_T_SCALE)}")
    path = out / f"fig{fig_id}_manifest.txt"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(manifest) + "\n")
    written.append(path)
    return written
