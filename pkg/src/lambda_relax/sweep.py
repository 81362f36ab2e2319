"""Parameter sweeps over initial state, chirality and spacing.

A sweep evaluates scalar entanglement quantities on an equidistant array
for every grid point and returns rows in a fixed order (initial, then s,
then spacing, then quantity, then indices), so repeated runs and parallel
runs produce byte-identical output files.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .detection import (
    atom_photon_negativity,
    condition_on_polarization,
    one_photon_joint,
    two_photon_state,
)
from .entanglement import (
    BipartitionSpec,
    atom_bipartitions,
    bipartition_label,
    log_negativity,
    pairwise_concurrences,
)
from .liouvillian import Liouvillian
from .serialize import to_json
from .states import (
    MAX_ATOMS,
    DensityMatrix,
    NumericalFailureError,
    Polarization,
    SystemConfig,
    ket_density_matrix,
    restrict_to_ground,
    validate_ket,
)

QUANTITIES = (
    "pairwise_concurrence",
    "bipartition_negativity",
    "atom_photon_negativity",
    "conditioned_concurrence",
    "conditioned_negativity",
    "two_photon_negativity",
    "final_state_dump",
)

CSV_HEADER = "initial,s,k0d,quantity,i,j,value"
ENV_THREADS = "LAMBDA_RELAX_THREADS"
TWO_PHOTON_MAX_ATOMS = 4


class SweepSpecError(ValueError):
    """Invalid sweep specification (usage error)."""


@dataclass(frozen=True)
class SweepSpec:
    """Declarative description of one sweep.

    ``k0d_grid`` is (start, stop, count) in radians; ``initial`` entries may
    have different lengths, each one fixing its own atom number.
    """

    initial: tuple[str, ...]
    s_values: tuple[float, ...]
    k0d_grid: tuple[float, float, int]
    quantities: tuple[str, ...]
    output: str | None = None
    format: str = "csv"

    def __post_init__(self):
        object.__setattr__(self, "initial", tuple(self.initial))
        object.__setattr__(self, "s_values", tuple(float(s) for s in self.s_values))
        start, stop, count = self.k0d_grid
        object.__setattr__(self, "k0d_grid", (float(start), float(stop), int(count)))
        object.__setattr__(self, "quantities", tuple(self.quantities))
        if not self.initial:
            raise SweepSpecError("at least one initial state is required")
        for ket in self.initial:
            if not 1 <= len(ket) <= MAX_ATOMS:
                raise SweepSpecError(f"initial state {ket!r} needs 1..{MAX_ATOMS} atoms")
            try:
                validate_ket(ket, len(ket))
            except ValueError as exc:
                raise SweepSpecError(str(exc)) from exc
        for s in self.s_values:
            if not 0.0 <= s <= 1.0:
                raise SweepSpecError(f"chirality {s} outside [0, 1]")
        if not self.s_values:
            raise SweepSpecError("at least one chirality value is required")
        if self.k0d_grid[2] < 1:
            raise SweepSpecError("grid count must be at least 1")
        if not self.quantities:
            raise SweepSpecError("quantity list must not be empty")
        unknown = set(self.quantities) - set(QUANTITIES)
        if unknown:
            raise SweepSpecError(f"unknown quantities {sorted(unknown)}; known: {QUANTITIES}")
        if "two_photon_negativity" in self.quantities:
            for ket in self.initial:
                if len(ket) > TWO_PHOTON_MAX_ATOMS:
                    raise SweepSpecError(
                        f"two-photon quantities are limited to {TWO_PHOTON_MAX_ATOMS} atoms, "
                        f"got {ket!r}"
                    )
        if self.format not in ("csv", "json"):
            raise SweepSpecError(f"unknown output format {self.format!r}")

    def grid(self) -> np.ndarray:
        start, stop, count = self.k0d_grid
        return np.linspace(start, stop, count)


@dataclass(frozen=True)
class SweepRow:
    initial: str
    s: float
    k0d: float
    quantity: str
    i: str
    j: str
    value: float

    def __post_init__(self):
        if not np.isfinite(self.value):
            raise NumericalFailureError(
                f"non-finite value for {self.quantity} at "
                f"initial={self.initial} s={self.s} k0d={self.k0d}"
            )


def _dump_path(dump_dir: str, initial: str, s: float, k0d: float) -> Path:
    return Path(dump_dir) / f"final_{initial}_s{s:.6g}_k0d{k0d:.6g}.json"


def evaluate_point(initial: str, s: float, k0d: float, quantities: tuple[str, ...],
                   dump_dir: str | None = None) -> list[SweepRow]:
    """All requested rows for one (initial, s, k0d) parameter point."""
    n = len(initial)
    config = SystemConfig.equidistant(n, k0d, s)
    liouv = Liouvillian(config)
    rho0 = ket_density_matrix(initial, config)

    final_ground: DensityMatrix | None = None
    joint = None

    def get_final():
        nonlocal final_ground
        if final_ground is None:
            final_ground = restrict_to_ground(liouv.asymptotic_state(rho0))
        return final_ground

    def get_joint():
        nonlocal joint
        if joint is None:
            joint = one_photon_joint(rho0, liouv)
        return joint

    rows = []
    for quantity in quantities:
        if quantity == "pairwise_concurrence":
            if n >= 2:
                c = pairwise_concurrences(get_final())
                for i in range(1, n + 1):
                    for j in range(i + 1, n + 1):
                        rows.append(SweepRow(initial, s, k0d, quantity,
                                             str(i), str(j), float(c[i - 1, j - 1])))
        elif quantity == "bipartition_negativity":
            if n >= 2:
                state = get_final()
                for side_a, side_b in atom_bipartitions(n):
                    split = BipartitionSpec((2,) * n, tuple(a - 1 for a in side_a))
                    rows.append(SweepRow(initial, s, k0d, quantity,
                                         bipartition_label(side_a), bipartition_label(side_b),
                                         log_negativity(state, split)))
        elif quantity == "atom_photon_negativity":
            for j in range(1, n + 1):
                rows.append(SweepRow(initial, s, k0d, quantity,
                                     str(j), "ph", atom_photon_negativity(get_joint(), j)))
        elif quantity == "conditioned_concurrence":
            if n >= 2:
                cond = condition_on_polarization(get_joint(), Polarization.Plus)
                c = pairwise_concurrences(cond)
                for i in range(1, n + 1):
                    for j in range(i + 1, n + 1):
                        rows.append(SweepRow(initial, s, k0d, quantity,
                                             str(i), str(j), float(c[i - 1, j - 1])))
        elif quantity == "conditioned_negativity":
            if n >= 2:
                cond = condition_on_polarization(get_joint(), Polarization.Plus)
                for side_a, side_b in atom_bipartitions(n):
                    split = BipartitionSpec((2,) * n, tuple(a - 1 for a in side_a))
                    rows.append(SweepRow(initial, s, k0d, quantity,
                                         bipartition_label(side_a), bipartition_label(side_b),
                                         log_negativity(cond, split)))
        elif quantity == "two_photon_negativity":
            state = two_photon_state(rho0, liouv)
            value = log_negativity(state.matrix, BipartitionSpec((4, 4), (0,)))
            rows.append(SweepRow(initial, s, k0d, quantity, "ph1", "ph2", value))
        elif quantity == "final_state_dump":
            state = get_final()
            purity = float(np.real(np.trace(state.matrix @ state.matrix)))
            if dump_dir is not None:
                to_json(state, _dump_path(dump_dir, initial, s, k0d))
            rows.append(SweepRow(initial, s, k0d, quantity, "", "", purity))
        else:  # pragma: no cover - guarded by SweepSpec validation
            raise SweepSpecError(f"unknown quantity {quantity!r}")
    return rows


def _worker(args) -> list[SweepRow]:
    initial, s, k0d, quantities, dump_dir = args
    try:
        return evaluate_point(initial, s, k0d, quantities, dump_dir)
    except NumericalFailureError as exc:
        raise NumericalFailureError(
            f"numerical failure at initial={initial} s={s:.6g} k0d={k0d:.6g}: {exc}"
        ) from exc


def worker_count() -> int:
    raw = os.environ.get(ENV_THREADS, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def run_sweep(spec: SweepSpec, workers: int | None = None) -> list[SweepRow]:
    """Evaluate a sweep; row order is independent of the worker count."""
    if workers is None:
        workers = worker_count()
    dump_dir = None
    if spec.output is not None and "final_state_dump" in spec.quantities:
        dump_dir = str(Path(spec.output).parent)
        Path(dump_dir).mkdir(parents=True, exist_ok=True)
    tasks = [
        (initial, s, k0d, spec.quantities, dump_dir)
        for initial in spec.initial
        for s in spec.s_values
        for k0d in spec.grid()
    ]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_worker, tasks, chunksize=8))
    else:
        chunks = [_worker(t) for t in tasks]
    rows = [row for chunk in chunks for row in chunk]
    if spec.output is not None:
        write_rows(rows, spec.output, spec.format)
    return rows


def format_value(x: float) -> str:
    return f"{x:.12g}"


def rows_to_csv(rows) -> str:
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(
            f"{r.initial},{format_value(r.s)},{format_value(r.k0d)},{r.quantity},"
            f"{r.i},{r.j},{format_value(r.value)}"
        )
    return "\n".join(lines) + "\n"


def rows_to_json(rows) -> str:
    payload = [
        {
            "initial": r.initial,
            "s": r.s,
            "k0d": r.k0d,
            "quantity": r.quantity,
            "i": r.i,
            "j": r.j,
            "value": r.value,
        }
        for r in rows
    ]
    return json.dumps(payload, indent=1) + "\n"


def write_rows(rows, path, fmt: str = "csv") -> None:
    text = rows_to_csv(rows) if fmt == "csv" else rows_to_json(rows)
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(text)


# ---------------------------------------------------------------------------
# presets mirroring the published parameter scans


def _nontrivial_initials(n: int, alphabet=("e", "+")) -> tuple[str, ...]:
    """All {e, +} strings of length n with at least one excited atom."""
    kets = []
    for code in range(2**n):
        ket = "".join(alphabet[0] if code & (1 << (n - 1 - k)) else alphabet[1] for k in range(n))
        if "e" in ket:
            kets.append(ket)
    return tuple(sorted(kets, key=lambda k: (k.count("e"), k)))


def figure_preset(name: str) -> SweepSpec:
    """Sweep specification matching one of the published figure scans."""
    pi = float(np.pi)
    if name == "fig2":
        return SweepSpec(
            initial=("e+", "+e"),
            s_values=(0.0, 0.5, 1.0),
            k0d_grid=(0.0, pi, 201),
            quantities=("pairwise_concurrence",),
        )
    if name == "fig3":
        return SweepSpec(
            initial=("ee+", "e+e", "+ee", "e++", "+e+", "++e"),
            s_values=tuple(np.linspace(0.0, 1.0, 21)),
            k0d_grid=(0.0, pi, 101),
            quantities=("pairwise_concurrence",),
        )
    if name == "fig4":
        return SweepSpec(
            initial=_nontrivial_initials(4),
            s_values=(0.0,),
            k0d_grid=(pi / 4, 3 * pi / 4, 2),
            quantities=("pairwise_concurrence",),
        )
    if name == "fig5":
        return SweepSpec(
            initial=("ee", "eee"),
            s_values=(0.0, 0.5, 1.0),
            k0d_grid=(0.0, pi, 201),
            quantities=("atom_photon_negativity",),
        )
    if name == "fig6":
        return SweepSpec(
            initial=("ee", "eee"),
            s_values=(0.0, 0.5, 1.0),
            k0d_grid=(0.0, pi, 201),
            quantities=("two_photon_negativity",),
        )
    raise SweepSpecError(f"unknown preset {name!r}; known: fig2, fig3, fig4, fig5, fig6")


def preset_with_overrides(name: str, s_values=None, k0d_grid=None,
                          output=None, fmt=None) -> SweepSpec:
    """Preset spec with optional user overrides for s values, grid and output."""
    spec = figure_preset(name)
    updates = {}
    if s_values:
        updates["s_values"] = tuple(s_values)
    if k0d_grid:
        updates["k0d_grid"] = tuple(k0d_grid)
    if output is not None:
        updates["output"] = output
    if fmt is not None:
        updates["format"] = fmt
    return replace(spec, **updates) if updates else spec
