"""Acceptance suite: quantitative exit criteria for the whole pipeline.

Each criterion bundles closely related checks with their tolerances and
reports measured against expected values; the suite is deterministic
(fixed seeds, fixed grids) and runs in well under the ten-minute budget.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import quad_vec

from .detection import (
    atom_photon_negativity,
    condition_on_polarization,
    one_photon_joint,
    one_photon_time_resolved,
    two_photon_state,
)
from .entanglement import (
    BipartitionSpec,
    atom_bipartitions,
    concurrence,
    log_negativity,
    pairwise_concurrences,
    ppt_check,
)
from .liouvillian import Liouvillian
from .reference import (
    VERIFIED_BELL_SIGN,
    chiral_ee_plus_conditioned,
    exact_conditioned_concurrence,
    exact_conditioned_state,
    exact_final_state,
)
from .states import (
    DensityMatrix,
    Polarization,
    SystemConfig,
    hermitize,
    ket_density_matrix,
    restrict_to_ground,
)

PI = float(np.pi)
GRID25 = np.linspace(0.0, PI, 25)
GRID13 = np.linspace(0.0, PI, 13)
S_VALUES = (0.0, 0.5, 1.0)


def _liouvillian(n: int, s: float, k0d: float) -> Liouvillian:
    return Liouvillian(SystemConfig.equidistant(n, k0d, s))


def _final_ground(initial: str, s: float, k0d: float) -> DensityMatrix:
    liouv = _liouvillian(len(initial), s, k0d)
    rho = ket_density_matrix(initial, liouv.config)
    return restrict_to_ground(liouv.asymptotic_state(rho))


def _joint(initial: str, s: float, k0d: float):
    liouv = _liouvillian(len(initial), s, k0d)
    return one_photon_joint(ket_density_matrix(initial, liouv.config), liouv), liouv


def _pair_concurrence(initial: str, s: float, k0d: float) -> float:
    return float(pairwise_concurrences(_final_ground(initial, s, k0d))[0, 1])


def check_close(name: str, measured: float, expected: float, tolerance: float) -> dict:
    measured = float(measured)
    return {
        "name": name,
        "measured": measured,
        "expected": float(expected),
        "tolerance": float(tolerance),
        "passed": bool(abs(measured - expected) <= tolerance),
    }


def check_greater(name: str, measured: float, threshold: float) -> dict:
    measured = float(measured)
    return {
        "name": name,
        "measured": measured,
        "expected": f"> {threshold:g}",
        "tolerance": float(threshold),
        "passed": bool(measured > threshold),
    }


# ---------------------------------------------------------------------------
# criteria


def single_atom_unpolarized() -> list[dict]:
    target = np.diag([0.5, 0.5, 0.0])
    checks = []
    for s in S_VALUES:
        liouv = _liouvillian(1, s, 0.0)
        out = liouv.asymptotic_state(ket_density_matrix("e", liouv.config))
        dev = float(np.max(np.abs(out.matrix - target)))
        checks.append(check_close(f"|deviation from diag(1/2,1/2,0)| at s={s:g}", dev, 0.0, 1e-10))
    return checks


def two_atom_chiral_single_excitation() -> list[dict]:
    dev_e_plus = max(abs(_pair_concurrence("e+", 0.0, k) - 0.5) for k in GRID25)
    dev_plus_e = max(_pair_concurrence("+e", 0.0, k) for k in GRID25)
    return [
        check_close("max |C12(e+) - 1/2| over 25 spacings", dev_e_plus, 0.0, 1e-9),
        check_close("max C12(+e) over 25 spacings", dev_plus_e, 0.0, 1e-9),
    ]


def two_atom_achiral_single_excitation() -> list[dict]:
    c_e_plus = np.array([_pair_concurrence("e+", 1.0, k) for k in GRID25])
    c_plus_e = np.array([_pair_concurrence("+e", 1.0, k) for k in GRID25])
    return [
        check_close("max |C12(e+) - C12(+e)|", float(np.max(np.abs(c_e_plus - c_plus_e))), 0.0, 1e-9),
        check_close("C12 at k0d=0", _pair_concurrence("e+", 1.0, 0.0), 1.0 / 3.0, 1e-6),
        check_close("C12 at k0d=pi", _pair_concurrence("e+", 1.0, PI), 1.0 / 3.0, 1e-6),
        check_close("C12 at k0d=pi/2", _pair_concurrence("e+", 1.0, PI / 2), 0.0, 1e-9),
    ]


def two_atom_all_excited_final_states() -> list[dict]:
    checks = []
    for s, case in ((1.0, "achiral_ee"), (0.0, "chiral_ee")):
        dev = 0.0
        worst_c = 0.0
        worst_eig = 0.0
        for k in GRID25:
            state = _final_ground("ee", s, k)
            dev = max(dev, float(np.max(np.abs(state.matrix - exact_final_state(case, k).matrix))))
            worst_c = max(worst_c, concurrence(state))
            ok, min_eig = ppt_check(state, BipartitionSpec((2, 2), (0,)))
            worst_eig = min(worst_eig, min_eig)
        checks.append(check_close(f"max matrix deviation, {case}", dev, 0.0, 1e-9))
        checks.append(check_close(f"max C12, {case}", worst_c, 0.0, 1e-9))
        checks.append(check_greater(f"min partial-transpose eigenvalue, {case}", worst_eig, -1e-10))
    return checks


def conditioned_two_atom_states() -> list[dict]:
    checks = []
    sample = np.linspace(0.0, PI, 7)
    dev_catalog = 0.0
    dev_flipped = 0.0
    for k in sample:
        joint, _ = _joint("ee", 0.0, k)
        cond = condition_on_polarization(joint, Polarization.Plus).matrix
        dev_catalog = max(dev_catalog, float(np.max(np.abs(cond - chiral_ee_plus_conditioned(k)))))
        flipped = chiral_ee_plus_conditioned(k, bell_sign=-VERIFIED_BELL_SIGN["chiral_ee_plus"])
        dev_flipped = max(dev_flipped, float(np.max(np.abs(cond - flipped))))
    checks.append(check_close("max matrix deviation, chiral conditioned state", dev_catalog, 0.0, 1e-9))
    sign = VERIFIED_BELL_SIGN["chiral_ee_plus"]
    checks.append(
        {
            "name": "entangled-branch sign resolved numerically",
            "measured": f"sign {sign:+d} matches (dev {dev_catalog:.2e}), "
                        f"opposite sign deviates by {dev_flipped:.2e}",
            "expected": f"catalog sign {sign:+d}",
            "tolerance": 0.0,
            "passed": bool(dev_catalog < 1e-9 < dev_flipped),
        }
    )

    joint, _ = _joint("ee", 0.0, 1.05)
    cond = condition_on_polarization(joint, Polarization.Plus)
    e_exact = float(np.log2(1.0 + (np.sqrt(29.0) - 5.0) / 8.0))
    e_meas = log_negativity(cond, BipartitionSpec((2, 2), (0,)))
    checks.append(check_close("conditioned concurrence, chiral", concurrence(cond), 0.25, 1e-9))
    checks.append(check_close("conditioned negativity, chiral", e_meas, e_exact, 1e-9))
    checks.append(check_close("rounded chiral negativity", round(e_meas, 3), 0.068, 0.0))

    dev_formula = 0.0
    for k in GRID25:
        joint, _ = _joint("ee", 1.0, k)
        cond = condition_on_polarization(joint, Polarization.Plus)
        dev_formula = max(dev_formula, abs(concurrence(cond) - exact_conditioned_concurrence(k)))
        dev_state = float(
            np.max(np.abs(cond.matrix - exact_conditioned_state("achiral_ee_plus", k).matrix))
        )
        dev_formula = max(dev_formula, dev_state)
    checks.append(check_close("max deviation from cos^2/(4-cos^2) and state, achiral", dev_formula, 0.0, 1e-9))

    joint, _ = _joint("ee", 1.0, 0.0)
    cond = condition_on_polarization(joint, Polarization.Plus)
    checks.append(check_close("achiral conditioned concurrence at Bragg", concurrence(cond), 1.0 / 3.0, 1e-9))
    e_bragg = log_negativity(cond, BipartitionSpec((2, 2), (0,)))
    e_bragg_exact = float(np.log2(1.0 + (np.sqrt(5.0) - 2.0) / 3.0))
    checks.append(check_close("achiral conditioned negativity at Bragg", e_bragg, e_bragg_exact, 1e-9))
    checks.append(check_close("rounded achiral negativity at Bragg", round(e_bragg, 2), 0.11, 0.0))
    return checks


def three_atom_chiral_distance_independence() -> list[dict]:
    initials = ("ee+", "e+e", "+ee", "e++", "+e+", "++e")
    spread = 0.0
    overall_max = 0.0
    for initial in initials:
        mats = [pairwise_concurrences(_final_ground(initial, 0.0, k)) for k in GRID25]
        base = mats[0]
        spread = max(spread, max(float(np.max(np.abs(m - base))) for m in mats[1:]))
        overall_max = max(overall_max, float(base.max()))
    return [
        check_close("max spread of C_ij across the spacing grid", spread, 0.0, 1e-8),
        check_close("max pairwise concurrence over configurations", overall_max, 0.5, 1e-6),
    ]


def all_excited_separability() -> list[dict]:
    worst_c = 0.0
    worst_eig = 0.0
    for initial in ("eee", "eeee"):
        n = len(initial)
        for s in S_VALUES:
            for k in (0.0, PI / 2, 2.2, PI):
                state = _final_ground(initial, s, k)
                worst_c = max(worst_c, float(pairwise_concurrences(state).max()))
                for side_a, _side_b in atom_bipartitions(n):
                    split = BipartitionSpec((2,) * n, tuple(a - 1 for a in side_a))
                    _ok, min_eig = ppt_check(state, split)
                    worst_eig = min(worst_eig, min_eig)
    return [
        check_close("max pairwise concurrence, N=3,4 all-excited", worst_c, 0.0, 1e-9),
        check_greater("min partial-transpose eigenvalue over all bipartitions", worst_eig, -1e-10),
    ]


def four_atom_chiral_chain() -> list[dict]:
    checks = []
    for k in (0.9, 2.1):
        c = pairwise_concurrences(_final_ground("e+++", 0.0, k))
        checks.append(check_close(f"C12 at k0d={k:g}", float(c[0, 1]), 0.5, 1e-6))
        strictly = bool(c[0, 1] > c[0, 2] > c[0, 3] > 0.0)
        checks.append(
            {
                "name": f"row-1 concurrences strictly decreasing at k0d={k:g}",
                "measured": f"C12={c[0, 1]:.6f} C13={c[0, 2]:.6f} C14={c[0, 3]:.6f}",
                "expected": "C12 > C13 > C14 > 0",
                "tolerance": 0.0,
                "passed": strictly,
            }
        )
    return checks


def three_atom_conditioned_structure() -> list[dict]:
    worst_c = 0.0
    min_best_split = np.inf
    # spacings away from the narrow dips near k0d = pi/3, 2pi/3 where the
    # conditioned three-atom negativities nearly close
    for s in S_VALUES:
        for k in (0.4, PI / 2, 2.9):
            joint, _ = _joint("eee", s, k)
            cond = condition_on_polarization(joint, Polarization.Plus)
            worst_c = max(worst_c, float(pairwise_concurrences(cond).max()))
            e_1_23 = log_negativity(cond, BipartitionSpec((2, 2, 2), (0,)))
            e_2_13 = log_negativity(cond, BipartitionSpec((2, 2, 2), (1,)))
            min_best_split = min(min_best_split, max(e_1_23, e_2_13))
    return [
        check_close("max pairwise concurrence after + detection", worst_c, 0.0, 1e-9),
        check_greater("min over parameters of max(E_1|23, E_2|13)", float(min_best_split), 1e-3),
    ]


def _two_photon_negativity(initial: str, s: float, k0d: float) -> float:
    liouv = _liouvillian(len(initial), s, k0d)
    state = two_photon_state(ket_density_matrix(initial, liouv.config), liouv)
    return log_negativity(state.matrix, BipartitionSpec((4, 4), (0,)))


def photon_photon_negativity() -> list[dict]:
    chiral_max = max(
        _two_photon_negativity(init, 0.0, k) for init in ("ee", "eee") for k in GRID13
    )
    bragg_max = max(
        _two_photon_negativity(init, 1.0, k) for init in ("ee", "eee") for k in (0.0, PI)
    )
    anti_bragg = _two_photon_negativity("ee", 1.0, PI / 2)
    margin = np.inf
    for s in (0.5, 1.0):
        for k in (PI / 4, PI / 2, 3 * PI / 4):
            e2 = _two_photon_negativity("ee", s, k)
            e3 = _two_photon_negativity("eee", s, k)
            margin = min(margin, e2 - e3)
    return [
        check_close("max E_ph|ph at s=0 over the grid", chiral_max, 0.0, 1e-9),
        check_close("max E_ph|ph at s=1, Bragg spacings", bragg_max, 0.0, 1e-9),
        check_greater("E_ph|ph at s=1, anti-Bragg", anti_bragg, 1e-3),
        check_greater("min E_ph|ph(N=2) - E_ph|ph(N=3) where entangled", float(margin), 0.0),
    ]


def atom_photon_entanglement() -> list[dict]:
    min_e = np.inf
    min_gap = np.inf
    for s in S_VALUES:
        for k in GRID13:
            joint2, _ = _joint("ee", s, k)
            joint3, _ = _joint("eee", s, k)
            e2 = [atom_photon_negativity(joint2, j) for j in (1, 2)]
            e3 = [atom_photon_negativity(joint3, j) for j in (1, 2, 3)]
            min_e = min(min_e, min(e2), min(e3))
            min_gap = min(min_gap, min(e2) - max(e3))
    return [
        check_greater("min E_ph|j over the (s, k0d) grid, N=2,3", float(min_e), 1e-3),
        check_greater("min pointwise E_ph|j(N=2) - E_ph|j(N=3)", float(min_gap), 0.0),
    ]


def _random_density(rng: np.random.Generator, dim: int) -> np.ndarray:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def _haar_qubit_unitary(rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def property_suites() -> list[dict]:
    checks = []

    # three-way backend agreement for the asymptotic map (generic points;
    # the dense route is undefined at s=0 where the generator is defective)
    dev = 0.0
    for n, s, k in ((1, 0.5, 0.9), (2, 0.5, 0.9), (2, 1.0, PI / 2), (3, 0.7, 1.3)):
        liouv = _liouvillian(n, s, k)
        rho = ket_density_matrix("e" * n, liouv.config).matrix
        a = liouv.asymptotic_map(rho, "cascade")
        b = liouv.asymptotic_map(rho, "spectral")
        c = liouv.asymptotic_map(rho, "integrate")
        dev = max(dev, float(np.max(np.abs(a - b))), float(np.max(np.abs(a - c))))
    checks.append(check_close("three-backend asymptotic-map agreement (N<=3)", dev, 0.0, 1e-7))

    # Drazin defining identity on random operators
    rng = np.random.default_rng(7)
    dev = 0.0
    for n, s, k in ((2, 0.5, 0.9), (3, 0.3, 2.1)):
        liouv = _liouvillian(n, s, k)
        x = hermitize(_random_density(rng, liouv.dim))
        y = liouv.drazin_apply(x)
        residual = liouv.apply(y) + liouv.asymptotic_map(x) - x
        dev = max(dev, float(np.max(np.abs(residual))))
        dev = max(dev, float(np.max(np.abs(liouv.asymptotic_map(y)))))
    checks.append(check_close("Drazin identity residual L[Y] + P0[X] - X", dev, 0.0, 1e-8))

    # quadrature identity for time-resolved detection; the emission record
    # decays at least like exp(-t) at these points, so t <= 80 captures the
    # integral far below the tolerance
    dev = 0.0
    for n, s, k in ((1, 0.0, 0.0), (2, 0.5, 0.9)):
        liouv = _liouvillian(n, s, k)
        rho = ket_density_matrix("e" * n, liouv.config)
        joint = one_photon_joint(rho, liouv)
        integral, _err = quad_vec(
            lambda t: one_photon_time_resolved(rho, liouv, t, method="spectral"),
            0.0,
            80.0,
            epsabs=1e-12,
            epsrel=1e-12,
        )
        dev = max(dev, float(np.max(np.abs(integral - n * joint.matrix))))
    checks.append(check_close("time-resolved quadrature vs averaged state", dev, 0.0, 1e-6))

    # global qubit-rotation covariance in the achiral case
    rng = np.random.default_rng(11)
    liouv = _liouvillian(2, 1.0, 1.1)
    rho = ket_density_matrix("ee", liouv.config).matrix
    mixed = _random_density(rng, liouv.dim)
    dev = 0.0
    for _ in range(20):
        u = _haar_qubit_unitary(rng)
        g3 = np.eye(3, dtype=complex)
        g3[:2, :2] = u
        g = np.kron(g3, g3)
        for x in (rho, mixed):
            lhs = liouv.asymptotic_map(g @ x @ g.conj().T)
            rhs = g @ liouv.asymptotic_map(x) @ g.conj().T
            dev = max(dev, float(np.max(np.abs(lhs - rhs))))
    checks.append(check_close("achiral global-rotation covariance (20 rotations)", dev, 0.0, 1e-8))

    # mirror symmetry: reversing the array while swapping ground labels
    dev = 0.0
    for s in S_VALUES:
        for k in (0.4, 1.1, 2.0, 2.9):
            dev = max(dev, abs(_pair_concurrence("e-", s, k) - _pair_concurrence("+e", s, k)))
            dev = max(dev, abs(_pair_concurrence("-e", s, k) - _pair_concurrence("e+", s, k)))
    checks.append(check_close("mirror-image concurrence equalities", dev, 0.0, 1e-9))

    # Peres-Horodecki equivalence on random two-qubit states
    rng = np.random.default_rng(2024)
    split = BipartitionSpec((2, 2), (0,))
    disagreements = 0
    for _ in range(500):
        rho = hermitize(_random_density(rng, 4))
        has_c = concurrence(rho) > 0.0
        has_e = log_negativity(rho, split) > 0.0
        ppt, _ = ppt_check(rho, split)
        if not (has_c == has_e == (not ppt)):
            disagreements += 1
    checks.append(check_close("Peres-Horodecki disagreements among 500 states", disagreements, 0, 0))
    return checks


@dataclass(frozen=True)
class Criterion:
    ident: str
    description: str
    run: Callable[[], list[dict]]


CRITERIA = (
    Criterion("single_atom_unpolarized",
              "single excited atom relaxes to the unpolarized qubit state",
              single_atom_unpolarized),
    Criterion("two_atom_chiral_single_excitation",
              "ideally chiral pair: C12 = 1/2 from e+, product state from +e",
              two_atom_chiral_single_excitation),
    Criterion("two_atom_achiral_single_excitation",
              "achiral pair: identical curves, 1/3 at Bragg, 0 at anti-Bragg",
              two_atom_achiral_single_excitation),
    Criterion("two_atom_all_excited_final_states",
              "both atoms excited: closed-form final states, separable",
              two_atom_all_excited_final_states),
    Criterion("conditioned_two_atom_states",
              "+-photon conditioning: closed-form states and entanglement values",
              conditioned_two_atom_states),
    Criterion("three_atom_chiral_distance_independence",
              "chiral triple: spacing-independent concurrences, max 1/2",
              three_atom_chiral_distance_independence),
    Criterion("all_excited_separability",
              "all-excited N=3,4: zero concurrences and PPT bipartitions",
              all_excited_separability),
    Criterion("four_atom_chiral_chain",
              "chiral e+++: C12 = 1/2 and strictly decreasing first row",
              four_atom_chiral_chain),
    Criterion("three_atom_conditioned_structure",
              "conditioned triple: no pairwise entanglement, entangled splits",
              three_atom_conditioned_structure),
    Criterion("photon_photon_negativity",
              "two-photon entanglement: zero chiral/Bragg, maximal anti-Bragg",
              photon_photon_negativity),
    Criterion("atom_photon_entanglement",
              "atom-photon negativity positive everywhere, monogamy with N",
              atom_photon_entanglement),
    Criterion("property_suites",
              "backend agreement, Drazin identity, quadrature, symmetries, PPT",
              property_suites),
)


def run_criterion(criterion: Criterion) -> dict:
    start = time.perf_counter()
    checks = criterion.run()
    elapsed = time.perf_counter() - start
    return {
        "id": criterion.ident,
        "description": criterion.description,
        "passed": all(c["passed"] for c in checks),
        "seconds": round(elapsed, 3),
        "checks": checks,
    }


def run_acceptance(idents=None, echo=None) -> dict:
    """Run all (or selected) criteria; returns the machine-readable report."""
    selected = CRITERIA if idents is None else [c for c in CRITERIA if c.ident in set(idents)]
    start = time.perf_counter()
    results = []
    for criterion in selected:
        record = run_criterion(criterion)
        results.append(record)
        if echo is not None:
            status = "PASS" if record["passed"] else "FAIL"
            echo(f"{status} {record['id']}: {record['description']} ({record['seconds']:.1f}s)")
            if not record["passed"]:
                for c in record["checks"]:
                    if not c["passed"]:
                        echo(f"     failed: {c['name']} measured={c['measured']} "
                             f"expected={c['expected']} tolerance={c['tolerance']}")
    report = {
        "passed": all(r["passed"] for r in results),
        "runtime_seconds": round(time.perf_counter() - start, 3),
        "criteria": results,
    }
    return report
