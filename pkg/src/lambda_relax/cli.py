"""Command-line interface.

Subcommands: ``final``, ``conditioned``, ``two-photon`` for single parameter
points, ``sweep`` and ``preset`` for grid scans written to CSV/JSON,
``acceptance`` for the quantitative verification suite and
``dump-reference`` for the closed-form catalog.  Exit codes: 0 success,
1 usage or configuration error, 2 numerical or acceptance failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .acceptance import run_acceptance
from .detection import (
    condition_on_polarization,
    detection_probability,
    one_photon_joint,
    two_photon_state,
)
from .entanglement import BipartitionSpec, concurrence, log_negativity, pairwise_concurrences
from .liouvillian import Liouvillian
from .reference import catalog_summary
from .serialize import to_json
from .states import (
    NumericalFailureError,
    Polarization,
    SystemConfig,
    ket_density_matrix,
    restrict_to_ground,
)
from .sweep import (
    QUANTITIES,
    SweepSpec,
    SweepSpecError,
    preset_with_overrides,
    rows_to_csv,
    rows_to_json,
    run_sweep,
)

USAGE_ERROR = 1
NUMERICAL_ERROR = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def _parse_grid(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise SweepSpecError(f"grid must be start:stop:count, got {text!r}")
    return (float(parts[0]), float(parts[1]), int(parts[2]))


def _point_setup(args):
    initial = args.init
    config = SystemConfig.equidistant(len(initial), args.k0d, args.s)
    liouv = Liouvillian(config)
    return initial, liouv, ket_density_matrix(initial, config)


def _cmd_final(args) -> int:
    initial, liouv, rho0 = _point_setup(args)
    state = restrict_to_ground(liouv.asymptotic_state(rho0))
    n = len(initial)
    print(f"final ground state of {initial!r} at s={args.s:g}, k0d={args.k0d:g}")
    if n >= 2:
        c = pairwise_concurrences(state)
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                print(f"  C_{i}{j} = {c[i - 1, j - 1]:.10f}")
    if args.out:
        to_json(state, args.out)
        print(f"  state written to {args.out}")
    return 0


def _cmd_conditioned(args) -> int:
    initial, liouv, rho0 = _point_setup(args)
    joint = one_photon_joint(rho0, liouv)
    sigma = Polarization.Plus if args.sigma == "+" else Polarization.Minus
    prob = detection_probability(joint, sigma)
    state = condition_on_polarization(joint, sigma)
    n = len(initial)
    print(f"state of {initial!r} conditioned on a {args.sigma} photon "
          f"(probability {prob:.6f}) at s={args.s:g}, k0d={args.k0d:g}")
    if n == 2:
        print(f"  C_12 = {concurrence(state):.10f}")
    if n >= 2:
        split = BipartitionSpec((2,) * n, (0,))
        print(f"  E_1|rest = {log_negativity(state, split):.10f}")
    if args.out:
        to_json(state, args.out)
        print(f"  state written to {args.out}")
    return 0


def _cmd_two_photon(args) -> int:
    initial, liouv, rho0 = _point_setup(args)
    state = two_photon_state(rho0, liouv)
    value = log_negativity(state.matrix, BipartitionSpec((4, 4), (0,)))
    print(f"two-photon state from {initial!r} at s={args.s:g}, k0d={args.k0d:g}")
    print(f"  E_ph|ph = {value:.10f}")
    if args.out:
        to_json(state, args.out)
        print(f"  state written to {args.out}")
    return 0


def _load_config(path: str) -> dict:
    with open(path, "rb") as fh:
        return tomllib.load(fh)


def _spec_from_args(args) -> SweepSpec:
    payload: dict = {}
    if args.config:
        payload.update(_load_config(args.config))
    if args.init:
        payload["initial"] = args.init
    if args.s is not None and len(args.s) > 0:
        payload["s_values"] = args.s
    if args.grid:
        payload["k0d_grid"] = _parse_grid(args.grid)
    if args.quantity:
        payload["quantities"] = args.quantity
    if args.out:
        payload["output"] = args.out
    if args.format:
        payload["format"] = args.format
    grid = payload.get("k0d_grid")
    if isinstance(grid, dict):
        payload["k0d_grid"] = (grid["start"], grid["stop"], grid["count"])
    try:
        return SweepSpec(
            initial=tuple(payload.get("initial", ())),
            s_values=tuple(payload.get("s_values", ())),
            k0d_grid=tuple(payload.get("k0d_grid", (0.0, float(np.pi), 201))),
            quantities=tuple(payload.get("quantities", ())),
            output=payload.get("output"),
            format=payload.get("format", "csv"),
        )
    except (KeyError, TypeError) as exc:
        raise SweepSpecError(f"invalid sweep configuration: {exc}") from exc


def _emit_rows(rows, spec: SweepSpec) -> None:
    if spec.output is None:
        text = rows_to_csv(rows) if spec.format == "csv" else rows_to_json(rows)
        sys.stdout.write(text)
    else:
        print(f"{len(rows)} rows written to {spec.output}")


def _cmd_sweep(args) -> int:
    spec = _spec_from_args(args)
    rows = run_sweep(spec)
    _emit_rows(rows, spec)
    return 0


def _cmd_preset(args) -> int:
    grid = _parse_grid(args.grid) if args.grid else None
    spec = preset_with_overrides(args.name, s_values=args.s, k0d_grid=grid,
                                 output=args.out, fmt=args.format)
    rows = run_sweep(spec)
    _emit_rows(rows, spec)
    return 0


def _cmd_acceptance(args) -> int:
    report = run_acceptance(echo=print)
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        with open(args.out, "w") as fh:
            json.dump(report, fh, indent=1)
        print(f"report written to {args.out}")
    print(f"acceptance {'PASSED' if report['passed'] else 'FAILED'} "
          f"in {report['runtime_seconds']:.1f}s")
    return 0 if report["passed"] else NUMERICAL_ERROR


def _cmd_dump_reference(args) -> int:
    entries = catalog_summary(args.k0d)
    text = json.dumps(entries, indent=1)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
        print(f"{len(entries)} reference cases written to {args.out}")
    else:
        print(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="lambda-relax",
        description="Collective relaxation of lambda-type atom arrays in a chiral waveguide",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_point_args(p):
        p.add_argument("--init", required=True, help="initial basis string over {+,-,e}")
        p.add_argument("--s", type=float, required=True, help="chirality parameter in [0,1]")
        p.add_argument("--k0d", type=float, required=True, help="phase spacing k0*d in radians")
        p.add_argument("--out", help="write the state as JSON to this path")

    p_final = sub.add_parser("final", help="asymptotic ground state of one configuration")
    add_point_args(p_final)
    p_final.set_defaults(func=_cmd_final)

    p_cond = sub.add_parser("conditioned", help="atomic state conditioned on a detected photon")
    add_point_args(p_cond)
    p_cond.add_argument("--sigma", choices=("+", "-"), default="+", help="detected polarization")
    p_cond.set_defaults(func=_cmd_conditioned)

    p_two = sub.add_parser("two-photon", help="two-photon state and its negativity")
    add_point_args(p_two)
    p_two.set_defaults(func=_cmd_two_photon)

    p_sweep = sub.add_parser("sweep", help="run a parameter sweep")
    p_sweep.add_argument("--config", help="TOML file mirroring the sweep specification")
    p_sweep.add_argument("--init", action="append", default=[], help="initial state (repeatable)")
    p_sweep.add_argument("--s", action="append", type=float, default=[],
                         help="chirality value (repeatable)")
    p_sweep.add_argument("--grid", help="k0d grid as start:stop:count")
    p_sweep.add_argument("--quantity", action="append", default=[],
                         help=f"quantity (repeatable), one of {', '.join(QUANTITIES)}")
    p_sweep.add_argument("--out", help="output file; stdout when omitted")
    p_sweep.add_argument("--format", choices=("csv", "json"), default=None)
    p_sweep.set_defaults(func=_cmd_sweep)

    p_preset = sub.add_parser("preset", help="run a published-figure parameter scan")
    p_preset.add_argument("name", help="fig2, fig3, fig4, fig5 or fig6")
    p_preset.add_argument("--s", action="append", type=float, default=[],
                          help="override chirality values (repeatable)")
    p_preset.add_argument("--grid", help="override k0d grid as start:stop:count")
    p_preset.add_argument("--out", help="output file; stdout when omitted")
    p_preset.add_argument("--format", choices=("csv", "json"), default=None)
    p_preset.set_defaults(func=_cmd_preset)

    p_acc = sub.add_parser("acceptance", help="run the acceptance suite")
    p_acc.add_argument("--out", help="write the JSON report to this path")
    p_acc.set_defaults(func=_cmd_acceptance)

    p_dump = sub.add_parser("dump-reference", help="dump the closed-form catalog as JSON")
    p_dump.add_argument("--k0d", type=float, default=float(np.pi / 2),
                        help="spacing at which matrices are evaluated")
    p_dump.add_argument("--out", help="output file; stdout when omitted")
    p_dump.set_defaults(func=_cmd_dump_reference)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (SweepSpecError, ValueError, KeyError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except NumericalFailureError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return NUMERICAL_ERROR


if __name__ == "__main__":
    sys.exit(main())
