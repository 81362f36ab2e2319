import json
import os
import subprocess
import sys

import numpy as np
import pytest

from lambda_relax.cli import main
from lambda_relax.sweep import (
    SweepSpec,
    SweepSpecError,
    figure_preset,
    preset_with_overrides,
    rows_to_csv,
    run_sweep,
)

SMALL_GRID = (0.0, float(np.pi), 5)


def small_spec(**overrides):
    base = dict(
        initial=("e+", "+e"),
        s_values=(0.0, 1.0),
        k0d_grid=SMALL_GRID,
        quantities=("pairwise_concurrence",),
    )
    base.update(overrides)
    return SweepSpec(**base)


class TestSweepSpec:
    def test_empty_quantities_rejected(self):
        with pytest.raises(SweepSpecError):
            small_spec(quantities=())

    def test_unknown_quantity_rejected(self):
        with pytest.raises(SweepSpecError):
            small_spec(quantities=("entropy",))

    def test_invalid_initial_rejected(self):
        with pytest.raises(SweepSpecError):
            small_spec(initial=("qq",))

    def test_two_photon_atom_limit(self):
        with pytest.raises(SweepSpecError):
            small_spec(initial=("eeeee",), quantities=("two_photon_negativity",))

    def test_grid_count_positive(self):
        with pytest.raises(SweepSpecError):
            small_spec(k0d_grid=(0.0, 1.0, 0))

    def test_mixed_lengths_allowed(self):
        spec = small_spec(initial=("ee", "eee"))
        assert spec.initial == ("ee", "eee")


class TestRunSweep:
    def test_deterministic_row_order(self):
        spec = small_spec()
        rows1 = run_sweep(spec)
        rows2 = run_sweep(spec)
        assert rows1 == rows2
        # ordered by initial, then s, then spacing
        keys = [(r.initial, r.s, r.k0d) for r in rows1]
        expected = [
            (i, s, k)
            for i in spec.initial
            for s in spec.s_values
            for k in spec.grid()
        ]
        assert keys == expected

    def test_worker_count_does_not_change_bytes(self):
        spec = small_spec()
        serial = rows_to_csv(run_sweep(spec, workers=1))
        parallel = rows_to_csv(run_sweep(spec, workers=3))
        assert serial == parallel

    def test_chiral_single_excitation_values(self):
        rows = run_sweep(small_spec())
        for row in rows:
            if row.s == 0.0 and row.initial == "e+":
                assert row.value == pytest.approx(0.5, abs=1e-9)
            if row.s == 0.0 and row.initial == "+e":
                assert row.value == pytest.approx(0.0, abs=1e-9)

    def test_values_within_bounds(self):
        spec = small_spec(
            initial=("ee",),
            quantities=("pairwise_concurrence", "bipartition_negativity",
                        "conditioned_concurrence", "two_photon_negativity"),
        )
        for row in run_sweep(spec):
            assert row.value >= 0.0
            if "concurrence" in row.quantity:
                assert row.value <= 1.0

    def test_final_state_dump_sidecars(self, tmp_path):
        out = tmp_path / "sweep.csv"
        spec = small_spec(
            initial=("e+",),
            s_values=(0.0,),
            k0d_grid=(0.5, 0.5, 1),
            quantities=("final_state_dump",),
            output=str(out),
        )
        rows = run_sweep(spec)
        assert out.exists()
        sidecar = tmp_path / "final_e+_s0_k0d0.5.json"
        assert sidecar.exists()
        payload = json.loads(sidecar.read_text())
        assert payload["space"] == "ground"
        # purity of the rank-3 chiral final state: 1/16+1/16+1/4+2*(1/16) = 1/2
        assert rows[0].value == pytest.approx(0.5, abs=1e-9)


class TestPresets:
    def test_fig2_matches_published_axes(self):
        spec = figure_preset("fig2")
        assert spec.initial == ("e+", "+e")
        assert spec.s_values == (0.0, 0.5, 1.0)
        assert spec.k0d_grid[2] == 201
        assert spec.quantities == ("pairwise_concurrence",)

    def test_fig4_two_spacings_chiral_only(self):
        spec = figure_preset("fig4")
        assert spec.s_values == (0.0,)
        assert spec.k0d_grid[2] == 2
        assert len(spec.initial) == 15
        assert all(len(k) == 4 and "e" in k for k in spec.initial)

    def test_fig6_quantity(self):
        assert figure_preset("fig6").quantities == ("two_photon_negativity",)

    def test_unknown_preset(self):
        with pytest.raises(SweepSpecError):
            figure_preset("fig9")

    def test_fig2_chiral_series_is_constant_half(self):
        spec = preset_with_overrides("fig2", k0d_grid=SMALL_GRID)
        rows = [r for r in run_sweep(spec) if r.initial == "e+" and r.s == 0.0]
        assert len(rows) == SMALL_GRID[2]
        assert all(abs(r.value - 0.5) < 1e-9 for r in rows)


class TestCli:
    def test_final_subcommand(self, tmp_path, capsys):
        out = tmp_path / "state.json"
        code = main(["final", "--init", "e+", "--s", "0", "--k0d", "0.7",
                     "--out", str(out)])
        assert code == 0
        captured = capsys.readouterr().out
        assert "C_12 = 0.5000000000" in captured
        assert json.loads(out.read_text())["space"] == "ground"

    def test_conditioned_subcommand(self, capsys):
        code = main(["conditioned", "--init", "ee", "--s", "0", "--k0d", "0.7"])
        assert code == 0
        assert "C_12 = 0.2500000000" in capsys.readouterr().out

    def test_two_photon_subcommand(self, capsys):
        code = main(["two-photon", "--init", "ee", "--s", "0", "--k0d", "0.7"])
        assert code == 0
        assert "E_ph|ph = 0.0000000000" in capsys.readouterr().out

    def test_conditioned_on_minus_photon(self, capsys):
        code = main(["conditioned", "--init", "ee", "--s", "0", "--k0d", "0.7",
                     "--sigma", "-"])
        assert code == 0
        out = capsys.readouterr().out
        # mirror of the +-conditioned state: same concurrence
        assert "C_12 = 0.2500000000" in out
        assert "probability 0.5" in out

    def test_sweep_to_stdout(self, capsys):
        code = main(["sweep", "--init", "e+", "--s", "0", "--grid", "0:1:2",
                     "--quantity", "pairwise_concurrence"])
        assert code == 0
        out = capsys.readouterr().out
        assert out.startswith("initial,s,k0d,quantity,i,j,value\n")
        assert len(out.strip().splitlines()) == 3

    def test_sweep_with_config_and_override(self, tmp_path, capsys):
        config = tmp_path / "sweep.toml"
        config.write_text(
            'initial = ["e+"]\n'
            's_values = [0.0]\n'
            'quantities = ["pairwise_concurrence"]\n'
            "[k0d_grid]\nstart = 0.0\nstop = 3.14159\ncount = 3\n"
        )
        out = tmp_path / "rows.csv"
        code = main(["sweep", "--config", str(config), "--s", "1.0",
                     "--out", str(out)])
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "initial,s,k0d,quantity,i,j,value"
        assert len(lines) == 4  # header + 3 grid points
        assert all(line.split(",")[1] == "1" for line in lines[1:])  # override applied

    def test_sweep_usage_error_exit_code(self):
        code = main(["sweep", "--init", "e+", "--s", "0.5", "--grid", "0:1:3"])
        assert code == 1  # no quantities

    def test_preset_writes_csv(self, tmp_path):
        out = tmp_path / "fig2.csv"
        code = main(["preset", "fig2", "--grid", "0:3.14159:3", "--s", "0.0",
                     "--out", str(out)])
        assert code == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 1 + 2 * 1 * 3

    def test_unknown_preset_exit_code(self):
        assert main(["preset", "fig9"]) == 1

    def test_dump_reference(self, tmp_path):
        out = tmp_path / "catalog.json"
        assert main(["dump-reference", "--k0d", "1.0", "--out", str(out)]) == 0
        entries = json.loads(out.read_text())
        assert len(entries) == 5

    def test_usage_error_from_argparse(self):
        assert main(["final", "--init", "e+"]) == 1  # missing --s/--k0d

    def test_invalid_ket_is_usage_error(self):
        assert main(["final", "--init", "zz", "--s", "0", "--k0d", "1"]) == 1

    def test_installed_entry_point(self):
        env = dict(os.environ, LAMBDA_RELAX_THREADS="2")
        proc = subprocess.run(
            [sys.executable, "-m", "lambda_relax.cli", "final", "--init", "e+",
             "--s", "0", "--k0d", "0.7"],
            capture_output=True, text=True, env=env,
        )
        assert proc.returncode == 0
        assert "C_12" in proc.stdout


class TestAcceptanceRunner:
    def test_report_shape_on_single_criterion(self, capsys):
        from lambda_relax.acceptance import run_acceptance

        report = run_acceptance(idents=["single_atom_unpolarized"], echo=print)
        assert report["passed"] is True
        (entry,) = report["criteria"]
        assert entry["id"] == "single_atom_unpolarized"
        assert all(
            {"name", "measured", "expected", "tolerance", "passed"} <= set(c)
            for c in entry["checks"]
        )
        assert "PASS single_atom_unpolarized" in capsys.readouterr().out
