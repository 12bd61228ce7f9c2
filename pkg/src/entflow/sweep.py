"""Parameter sweeps over squeezing and coupling, and figure-ready exports.

A sweep evaluates the steady state on a dense (r, j) grid for one transport
direction and records, per point: stability, physicality, the pair
entanglement between the source and the probe nodes, how deep entanglement
reaches into the chain, and the occupation of the deepest entangled node.
Unstable points carry no steady-state quantities (empty CSV cells).

Everything here is deterministic: no randomness, no timestamps, and worker
threads only change wall time, never output bytes.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .errors import EntflowError, MissingDirectionError
from .lyapunov import (
    solve_steady_state_spectral,
    stability_report,
)
from .measures import (
    check_physical,
    log_negativity,
    mean_occupation,
    reduce_two_mode,
)
from .network import (
    Direction,
    NetworkConfig,
    ValidatedNetwork,
    build_dynamical_matrix,
    build_noise_matrix,
    validate_config,
)

# E_N at or below this counts as no entanglement (numerical zero).
ENTANGLEMENT_THRESHOLD = 1e-10

FIGURE_NAMES = ("nonreciprocity", "depth", "occupation", "stability")

_COLUMNS = {
    "nonreciprocity": ("r_over_omega", "j_over_omega", "direction", "log_negativity"),
    "depth": ("r_over_omega", "j_over_omega", "m_max"),
    "occupation": ("r_over_omega", "j_over_omega", "nbar"),
    "stability": ("r_over_omega", "j_over_omega", "stable", "physical", "spectral_abscissa"),
}


@dataclass(frozen=True)
class PointResult:
    """Steady-state summary of one (r, j, direction) operating point.

    Fields after ``spectral_abscissa`` are None when undefined: every
    steady-state quantity for unstable or failed points, the pair
    entanglements when the probe pair does not exist (M < 2), and the
    depth fields for Backward runs (the backward figures never use them)
    or when no node is entangled at all.
    """

    r_over_omega: float
    j_over_omega: float
    direction: Direction
    stable: bool
    physical: bool
    spectral_abscissa: float
    en_forward_pair: float | None = None
    en_backward_pair: float | None = None
    m_max: int | None = None
    nbar_at_mmax: float | None = None
    solver_error: str | None = None


@dataclass(frozen=True)
class SweepGrid:
    """Dense grid of PointResults; results[i][k] is (r_values[i], j_values[k])."""

    r_values: np.ndarray
    j_values: np.ndarray
    base: NetworkConfig
    direction: Direction
    results: tuple


@dataclass(frozen=True)
class FigureTable:
    """Rows ready for CSV export; None cells export as empty fields."""

    name: str
    columns: tuple
    rows: tuple


def max_entangled_node(v: np.ndarray, threshold: float = ENTANGLEMENT_THRESHOLD) -> int:
    """Largest chain index m with E_N between source and node m above
    ``threshold``; 0 when no node is entangled.

    Scans every node rather than assuming entanglement depth is contiguous.
    """
    n_chain = v.shape[0] // 2 - 1
    deepest = 0
    for m in range(1, n_chain + 1):
        record = log_negativity(reduce_two_mode(v, 0, m))
        if record.log_negativity > threshold:
            deepest = m
    return deepest


def run_point(net: ValidatedNetwork) -> PointResult:
    """Solve one operating point and summarize it.

    Unstable dynamics is a finding, not an error: the point comes back with
    stable = False and no steady-state fields.  Solver failures on stable
    points are captured in ``solver_error`` instead of propagating.
    """
    a = build_dynamical_matrix(net)
    report = stability_report(a)
    base = dict(
        r_over_omega=net.r,
        j_over_omega=net.j,
        direction=net.direction,
        stable=report.stable,
        physical=False,
        spectral_abscissa=report.spectral_abscissa,
    )
    if not report.stable:
        return PointResult(**base)

    try:
        v = solve_steady_state_spectral(a, build_noise_matrix(net))
        physical = check_physical(v).physical
        en_fwd = en_bwd = None
        if net.M >= 2:
            en_fwd = log_negativity(reduce_two_mode(v, 0, 2)).log_negativity
            en_bwd = log_negativity(reduce_two_mode(v, 0, net.M - 1)).log_negativity
        m_max = nbar = None
        if net.direction is Direction.FORWARD:
            m_max = max_entangled_node(v)
            nbar = mean_occupation(v, m_max) if m_max >= 1 else None
    except EntflowError as exc:
        return PointResult(**base, solver_error=f"{type(exc).__name__}: {exc}")

    return PointResult(
        **{**base, "physical": physical},
        en_forward_pair=en_fwd,
        en_backward_pair=en_bwd,
        m_max=m_max,
        nbar_at_mmax=nbar,
    )


def sweep_grid(
    base: NetworkConfig,
    r_values,
    j_values,
    direction: Direction | None = None,
    workers: int | None = None,
) -> SweepGrid:
    """Evaluate run_point on the cartesian grid r_values x j_values.

    ``direction`` overrides the base configuration's direction when given.
    ``workers`` > 1 distributes points over threads (the dense solves release
    the GIL); results are identical to the serial order regardless.
    """
    r_values = np.asarray(r_values, dtype=float)
    j_values = np.asarray(j_values, dtype=float)
    if r_values.size == 0 or j_values.size == 0:
        raise ValueError("sweep grids must be nonempty")
    if (r_values < 0).any() or (j_values < 0).any():
        raise ValueError("sweep grid values must be >= 0")
    direction = base.direction if direction is None else direction

    configs = [
        replace(base, r=float(rv), j=float(jv), direction=direction)
        for rv in r_values
        for jv in j_values
    ]

    def solve(cfg: NetworkConfig) -> PointResult:
        return run_point(validate_config(cfg))

    if workers is not None and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            flat = list(pool.map(solve, configs))
    else:
        flat = [solve(cfg) for cfg in configs]

    n_j = j_values.size
    rows = tuple(tuple(flat[i * n_j : (i + 1) * n_j]) for i in range(r_values.size))
    return SweepGrid(
        r_values=r_values,
        j_values=j_values,
        base=base,
        direction=direction,
        results=rows,
    )


def _by_direction(grids) -> dict:
    if isinstance(grids, SweepGrid):
        grids = [grids]
    table: dict = {}
    for grid in grids:
        if grid.direction in table:
            raise ValueError(f"duplicate sweep for direction {grid.direction.value}")
        table[grid.direction] = grid
    return table


def _require(table: dict, direction: Direction, figure: str) -> SweepGrid:
    if direction not in table:
        raise MissingDirectionError(
            f"figure '{figure}' needs a {direction.value} sweep"
        )
    return table[direction]


def _points(grid: SweepGrid):
    for row in grid.results:
        yield from row


def figure_dataset(name: str, grids) -> FigureTable:
    """Flatten sweeps into one of the named figure tables.

    nonreciprocity  needs both directions: (r, j, direction, log_negativity),
                    reporting the source-to-probe pair for each direction
                    (node 2 forward, node M-1 backward);
    depth           forward only: (r, j, m_max);
    occupation      forward only: (r, j, nbar of the deepest entangled node);
    stability       one direction (forward preferred): adds the physicality
                    flag and the spectral abscissa.
    """
    if name not in FIGURE_NAMES:
        raise ValueError(f"unknown figure '{name}', expected one of {FIGURE_NAMES}")
    table = _by_direction(grids)
    rows: list = []

    if name == "nonreciprocity":
        forward = _require(table, Direction.FORWARD, name)
        backward = _require(table, Direction.BACKWARD, name)
        for grid, field in ((forward, "en_forward_pair"), (backward, "en_backward_pair")):
            for pt in _points(grid):
                rows.append(
                    (pt.r_over_omega, pt.j_over_omega, grid.direction.value,
                     getattr(pt, field))
                )
    elif name in ("depth", "occupation"):
        grid = _require(table, Direction.FORWARD, name)
        field = "m_max" if name == "depth" else "nbar_at_mmax"
        for pt in _points(grid):
            rows.append((pt.r_over_omega, pt.j_over_omega, getattr(pt, field)))
    else:
        grid = table.get(Direction.FORWARD) or next(iter(table.values()))
        for pt in _points(grid):
            rows.append(
                (pt.r_over_omega, pt.j_over_omega, pt.stable, pt.physical,
                 pt.spectral_abscissa)
            )

    return FigureTable(name=name, columns=_COLUMNS[name], rows=tuple(rows))


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def export_csv(table: FigureTable, path) -> None:
    """Write the table as UTF-8 CSV with LF line endings and a header row.

    Floats are written with 17 significant digits so values round-trip
    bit-exactly; undefined cells are empty.
    """
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(",".join(table.columns) + "\n")
        for row in table.rows:
            handle.write(",".join(_format_cell(cell) for cell in row) + "\n")
