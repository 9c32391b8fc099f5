import math
from itertools import combinations

import numpy as np
import pytest

from cubesim.cubes import basis_cube, dephase, quantum_to_cube
from cubesim.experiments import (
    cube_tradeoff_bound,
    region_scan,
    region_scan_csv,
    run_cube_ifm,
    run_quantum_presets,
    sample_clicks,
    sorkin_term,
)
from cubesim.multiport import apply_transform, assemble_multiport, t3_matrix
from cubesim.quantum import DensityMatrix
from cubesim.results import IFMResult, results_to_csv
from cubesim.tensor import hermitian_complete

SQRT3 = math.sqrt(3.0)


# --- independent oracles ------------------------------------------------------
# Closed form for the cube pipeline: the multiport sends the injected path
# cube to a cube with zero population in path 1 and 1/(N-1) elsewhere.  A
# not-found measurement erases all coherences, leaving the uniform mixture
# over paths 2..N, and the second multiport pass returns each of those path
# cubes to port 1 with amplitude-coordinate 1/(N-1), so
# P_inconclusive = sum_{n>=2} (1/(N-1)) * (1/(N-1)) = 1/(N-1).

def pipeline_oracle(n):
    return 0.0, 1.0 / (n - 1), 1.0 - 1.0 / (n - 1)


def sorkin_oracle(cube, transform, port):
    """Subset enumeration written from scratch on raw tensors."""
    n = cube.n_paths
    basis = transform.basis

    def truncated(subset):
        keep = np.zeros(n, dtype=bool)
        keep[[p - 1 for p in subset]] = True
        mask = keep[:, None, None] & keep[None, :, None] & keep[None, None, :]
        return np.where(mask, cube.entries, 0.0)

    def intensity(subset):
        coords = np.einsum("djkl,jkl->d", basis.cubes.conj(), truncated(subset))
        return float((transform.matrix @ coords)[port - 1].real)

    total = intensity((1, 2, 3))
    for pair in combinations((1, 2, 3), 2):
        total -= intensity(pair)
    for single in combinations((1, 2, 3), 1):
        total += intensity(single)
    return total


def interferometer_cube():
    return hermitian_complete(
        {(2, 2, 2): 0.5, (3, 3, 3): 0.5, (1, 2, 3): 1.0 / (2.0 * SQRT3)},
        3,
        is_state=True,
    )


# --- cube pipeline --------------------------------------------------------------

def test_three_path_run_is_perfect_and_saturating():
    result = run_cube_ifm(3)
    assert result.p_trigger == pytest.approx(0.0, abs=1e-14)
    assert result.p_inconclusive == pytest.approx(0.5, abs=1e-14)
    assert result.p_success == pytest.approx(0.5, abs=1e-14)
    assert result.bound_value == pytest.approx(0.5, abs=1e-14)
    assert result.model == "cube"
    assert result.is_perfect()


@pytest.mark.parametrize("n", [4, 7, 11])
def test_general_run_matches_closed_form_oracle(n):
    expected = pipeline_oracle(n)
    result = run_cube_ifm(n)
    assert result.p_trigger == pytest.approx(expected[0], abs=1e-12)
    assert result.p_inconclusive == pytest.approx(expected[1], abs=1e-12)
    assert result.p_success == pytest.approx(expected[2], abs=1e-12)
    assert result.p_inconclusive == pytest.approx(result.bound_value, abs=1e-12)


def test_no_bomb_output_is_the_injected_cube():
    # the single-port readout rests on this; check it directly
    t = assemble_multiport(5)
    inside = apply_transform(t, basis_cube(5, 1))
    back = apply_transform(t, inside)
    np.testing.assert_allclose(back.entries, basis_cube(5, 1).entries, atol=1e-12)


def test_pure_to_mixed_signature():
    from cubesim.cubes import luders_update_cube

    t = assemble_multiport(3)
    inside = apply_transform(t, basis_cube(3, 1))
    assert inside.purity() == pytest.approx(1.0, abs=1e-14)
    updated = luders_update_cube(inside, 1, found=False)
    assert updated.purity() == pytest.approx(0.5, abs=1e-14)


# --- trade-off bound -------------------------------------------------------------

def test_bound_values():
    assert cube_tradeoff_bound(0.0, 3) == pytest.approx(0.5)
    assert cube_tradeoff_bound(0.0, 2) == pytest.approx(1.0)
    assert cube_tradeoff_bound(1.0, 7) == 0.0


def test_bound_argument_validation():
    with pytest.raises(ValueError, match=r"\[0, 1\]"):
        cube_tradeoff_bound(1.5, 3)
    with pytest.raises(ValueError, match="at least 2"):
        cube_tradeoff_bound(0.5, 1)


# --- region scan ------------------------------------------------------------------

def test_scan_two_path_row_is_the_quantum_curve():
    rows = region_scan([2], 11)
    for _, p, bound in rows:
        assert bound == pytest.approx((1.0 - p) ** 2, abs=1e-15)


def test_scan_intercepts():
    rows = region_scan([2, 3, 4, 5], 3)
    intercepts = {n: bound for n, p, bound in rows if p == 0.0}
    assert intercepts == pytest.approx({2: 1.0, 3: 0.5, 4: 1.0 / 3.0, 5: 0.25})


def test_scan_regions_nested_and_monotone():
    rows = region_scan([2, 3, 4, 10], 101)
    assert len(rows) == 404
    by_n = {}
    for n, p, bound in rows:
        by_n.setdefault(n, []).append(bound)
    for n, bounds in by_n.items():
        assert all(a >= b - 1e-15 for a, b in zip(bounds, bounds[1:]))
    for a, b in ((2, 3), (3, 4), (4, 10)):
        assert all(
            x >= y - 1e-15 for x, y in zip(by_n[a], by_n[b])
        )


def test_scan_grid_validation():
    with pytest.raises(ValueError, match="grid_points"):
        region_scan([3], 1)


def test_scan_csv_shape():
    text = region_scan_csv(region_scan([2, 3], 5))
    lines = text.strip().split("\n")
    assert lines[0] == "n_paths,p_trigger,bound"
    assert len(lines) == 11
    assert lines[1] == "2,0.0,1.0"


# --- third-order interference -------------------------------------------------------

def test_sorkin_vanishes_without_any_coherence():
    cube = quantum_to_cube(DensityMatrix(3, np.diag([0.2, 0.3, 0.5]).astype(complex)))
    assert sorkin_term(cube, t3_matrix(), 1) == pytest.approx(0.0, abs=1e-14)


def test_sorkin_vanishes_for_dephased_quantum_cubes(rng):
    t3 = t3_matrix()
    for _ in range(50):
        weights = rng.dirichlet(np.ones(3))
        cube = dephase(
            quantum_to_cube(DensityMatrix(3, np.diag(weights.astype(complex))))
        )
        term = sorkin_term(cube, t3, port=int(rng.integers(1, 4)))
        assert abs(term) < 1e-12
        assert term == pytest.approx(sorkin_oracle(cube, t3, 1), abs=1e-12)


def test_sorkin_of_interferometer_cube_matches_oracle():
    cube = interferometer_cube()
    t3 = t3_matrix()
    oracle_value = sorkin_oracle(cube, t3, 1)
    assert oracle_value == pytest.approx(0.5, abs=1e-14)
    assert sorkin_term(cube, t3, 1) == pytest.approx(oracle_value, abs=1e-14)


def test_sorkin_intensities_behind_the_oracle():
    # the subset intensities themselves, frozen from the oracle run:
    # I_123 = 1, I_23 = 1/2, I_12 = I_13 = I_2 = I_3 = 1/4, I_1 = 0
    cube = interferometer_cube()
    t3 = t3_matrix()
    basis = t3.basis

    def intensity(subset):
        keep = np.zeros(3, dtype=bool)
        keep[[p - 1 for p in subset]] = True
        mask = keep[:, None, None] & keep[None, :, None] & keep[None, None, :]
        coords = np.einsum(
            "djkl,jkl->d", basis.cubes.conj(), np.where(mask, cube.entries, 0.0)
        )
        return float((t3.matrix @ coords)[0].real)

    assert intensity((1, 2, 3)) == pytest.approx(1.0, abs=1e-14)
    assert intensity((2, 3)) == pytest.approx(0.5, abs=1e-14)
    assert intensity((1, 2)) == pytest.approx(0.25, abs=1e-14)
    assert intensity((1, 3)) == pytest.approx(0.25, abs=1e-14)
    assert intensity((1,)) == pytest.approx(0.0, abs=1e-14)
    assert intensity((2,)) == pytest.approx(0.25, abs=1e-14)
    assert intensity((3,)) == pytest.approx(0.25, abs=1e-14)


def test_sorkin_argument_validation():
    cube = interferometer_cube()
    with pytest.raises(ValueError, match="port"):
        sorkin_term(cube, t3_matrix(), 4)
    four_path = hermitian_complete(
        {(j, j, j): 0.25 for j in range(1, 5)}, 4, is_state=True
    )
    with pytest.raises(ValueError, match="3-path"):
        sorkin_term(four_path, t3_matrix(), 1)


def test_sorkin_rejects_two_path_coherence():
    cube = quantum_to_cube(DensityMatrix.from_state_vector([1.0, 1.0, 0.0]))
    with pytest.raises(ValueError, match="dephase"):
        sorkin_term(cube, t3_matrix(), 1)


# --- quantum presets ------------------------------------------------------------------

def test_preset_list_shape_and_labels():
    presets = run_quantum_presets()
    assert [r.label for r in presets] == ["elitzur_vaidman"] + [
        f"fourier_{n}" for n in range(2, 9)
    ]
    assert all(r.model == "quantum" for r in presets)


def test_preset_bomb_tester_values():
    ev = run_quantum_presets()[0]
    assert ev.p_trigger == pytest.approx(0.5, abs=1e-12)
    assert ev.p_inconclusive == pytest.approx(0.25, abs=1e-12)
    assert ev.p_success == pytest.approx(0.25, abs=1e-12)


def test_preset_fourier_values():
    for r in run_quantum_presets():
        if not r.label.startswith("fourier"):
            continue
        n = r.n_paths
        assert r.p_trigger == pytest.approx(1.0 / n, abs=1e-12)
        assert r.p_inconclusive == pytest.approx((1.0 - 1.0 / n) ** 2, abs=1e-12)


def test_presets_never_perfect():
    for r in run_quantum_presets():
        assert not r.is_perfect()


def test_cube_runs_are_perfect():
    for n in range(3, 9):
        assert run_cube_ifm(n).is_perfect()


# --- result records ----------------------------------------------------------------------

def test_result_validation():
    with pytest.raises(ValueError, match="model"):
        IFMResult("classical", 3, 0.0, 0.5, 0.5, 0.5)
    with pytest.raises(ValueError, match="sum to"):
        IFMResult("cube", 3, 0.0, 0.5, 0.2, 0.5)
    with pytest.raises(ValueError, match="outside"):
        IFMResult("cube", 3, -0.5, 1.0, 0.5, 0.0)
    with pytest.raises(ValueError, match="lower bound"):
        IFMResult("cube", 3, 0.0, 0.2, 0.8, 0.5)


def test_result_json_keys():
    payload = run_cube_ifm(3).to_json_dict()
    assert payload["bound"] == pytest.approx(0.5)
    assert set(payload) == {
        "model",
        "n_paths",
        "p_trigger",
        "p_inconclusive",
        "p_success",
        "bound",
        "label",
        "support_sensitive",
    }


def test_results_csv():
    text = results_to_csv([run_cube_ifm(3)])
    lines = text.strip().split("\n")
    assert lines[0] == "model,n_paths,p_trigger,p_inconclusive,p_success,bound"
    assert lines[1].startswith("cube,3,0.0,0.5,0.5,0.5")


# --- click sampler -------------------------------------------------------------------------

def test_click_sampler_deterministic():
    result = run_cube_ifm(3)
    a = sample_clicks(result, shots=1000, seed=5)
    b = sample_clicks(result, shots=1000, seed=5)
    assert a == b
    assert a["trigger"] + a["inconclusive"] + a["success"] == 1000
    assert a["trigger"] == 0  # perfect run never detonates


def test_click_sampler_validation():
    with pytest.raises(ValueError, match="shots"):
        sample_clicks(run_cube_ifm(3), shots=0, seed=1)
