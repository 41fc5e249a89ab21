import numpy as np
import pytest

from conftest import make_group
from src.core.errors import NotComposableError
from src.core.models import GroupClass
from src.services.analytic.analytic_builder import (
    QUARTER, construct, construct_planar, construct_zd, planar_parameter_table, recipe_to_json, toric_alternative,
)
from src.services.lattice.lattice_codes import build_preset, build_zd
from src.services.oracle.exact_oracle import code_projector_overlap, code_state, expectation, fidelity, ground_state
from src.services.rbm.rbm_state import amplitude, full_state, to_computational_basis


def rbm_state(rbm):
    return to_computational_basis(full_state(rbm), rbm.basis)


def test_shor_parameters(shor):
    rbm, recipe = construct(shor)
    assert recipe.group_class is GroupClass.X_Z
    assert np.allclose(rbm.a, QUARTER * np.array([1, 2, 1, 1, 2, 1, 1, 2, 1]))
    assert rbm.m == 6
    assert rbm.hidden_labels == ('T_1', 'T_2', 'T_4', 'T_5', 'T_7', 'T_8')
    assert np.allclose(rbm.b, -2 * QUARTER)
    assert all(np.count_nonzero(row) == 2 for row in rbm.W)
    assert np.allclose(rbm.W[rbm.W != 0], QUARTER)


def test_shor_state_is_a_code_state(shor):
    rbm, _ = construct(shor)
    assert code_projector_overlap(shor, rbm_state(rbm)) == pytest.approx(1)


def test_toric_2x2_from_every_generator(toric22):
    rbm, _ = construct(toric22.geometric_group())
    assert np.allclose(rbm.a, 2 * QUARTER)
    assert np.allclose(rbm.b, -4 * QUARTER)
    state = rbm_state(rbm)
    assert code_projector_overlap(toric22.geometric_group(), state) == pytest.approx(1)


def test_signed_plaquette():
    g = make_group(['-Z0 Z1', 'X0 X1'], 2)
    rbm, _ = construct(g)
    state = rbm_state(rbm)
    assert fidelity(state, code_state(g)) == pytest.approx(1)


def test_pure_x_group_has_no_hidden_units():
    rbm, recipe = construct(make_group(['X0', 'X1'], 2))
    assert recipe.group_class is GroupClass.S_X
    assert rbm.m == 0
    assert np.allclose(rbm.a, 0)


def test_mixed_group_requires_variational_route():
    with pytest.raises(NotComposableError, match='requires variational route'):
        construct(make_group(['Z0 X1', 'X0 Z1'], 2))


def test_signed_x_generator_not_composable():
    with pytest.raises(NotComposableError):
        construct(make_group(['-X0 X1', 'Z0 Z1'], 2))


def test_overlapping_y_generators():
    g = make_group(['Y0 Y1', 'Y1 Y2', 'Y2 Y3', 'Z0 Z1 Z2 Z3'], 4)
    rbm, recipe = construct(g)
    assert recipe.group_class is GroupClass.Y_Z
    assert recipe.y_cover == (0, 1, 2, 3)
    assert np.allclose(rbm.a, 0)
    state = rbm_state(rbm)
    for p in g.generators:
        assert expectation(p, state) == pytest.approx(1)
    assert fidelity(state, ground_state(g)) == pytest.approx(1)


def test_x_and_y_build_in_the_y_basis():
    g = make_group(['X0 X1', 'Y0 Y1'], 2)
    rbm, recipe = construct(g)
    assert rbm.basis == 'y'
    assert recipe.group_class is GroupClass.X_Y
    state = rbm_state(rbm)
    assert code_projector_overlap(g, state) == pytest.approx(1)
    assert fidelity(state, code_state(g)) == pytest.approx(1)


def test_single_qutrit_plaquette_zeroes():
    g = make_group(['Z0 Z1'], 2, 3)
    rbm, _ = construct(g)
    assert rbm.m == 2
    assert abs(amplitude(rbm, [1, 0])) < 1e-12
    assert abs(amplitude(rbm, [1, 2])) > 1e-3
    assert abs(amplitude(rbm, [1, 2])) == pytest.approx(abs(amplitude(rbm, [0, 0])))


@pytest.mark.parametrize('d', [3, 5])
def test_zd_construction(d):
    code = build_zd(2, 2, d)
    rbm = construct_zd(code)
    plaquettes = [label for label in code.geometric_group().labels if label.startswith('B_')]
    assert rbm.m == (d - 1) * len(plaquettes)
    state = full_state(rbm)
    for p in code.geometric_group().generators:
        assert expectation(p, state) == pytest.approx(1)


def test_zd_qubit_case_matches_toric(toric22):
    rbm = construct_zd(build_zd(2, 2, 2))
    reference, _ = construct(toric22.geometric_group())
    assert fidelity(full_state(rbm), full_state(reference)) == pytest.approx(1)


def test_planar_rough_table():
    code = build_preset('planar-rough 4x4')
    rbm = construct_planar(code)
    assert np.allclose(rbm.a, 2 * QUARTER)
    expected = {'B': -4 * QUARTER, 'E': -2 * QUARTER, 'F': -3 * QUARTER}
    for label, b in zip(rbm.hidden_labels, rbm.b):
        assert b == pytest.approx(expected[label[0]])


def test_planar_mixed_visible_biases():
    code = build_preset('planar-mixed 4x4')
    rbm = construct_planar(code)
    for (i, j), a in zip(code.coordinates, rbm.a):
        assert a == pytest.approx(QUARTER if i == 0 or j == 0 else 2 * QUARTER)


def test_smooth_defect_boundary_edges():
    code = build_preset('defect-smooth')
    a, _ = planar_parameter_table(code)
    assert np.sum(np.isclose(a, QUARTER)) == 8
    assert np.sum(np.isclose(a, 2 * QUARTER)) == code.n - 8


def test_rough_defect_truncated_plaquettes():
    code = build_preset('defect-rough')
    rbm = construct_planar(code)
    assert np.sum(np.isclose(rbm.b, -3 * QUARTER)) == 8


def test_small_planar_patch_is_a_code_state():
    code = build_preset('planar-mixed 2x2')
    rbm = construct_planar(code)
    assert code_projector_overlap(code.geometric_group(), full_state(rbm)) == pytest.approx(1)


def test_toric_alternative_only_fixes_plaquettes(toric22):
    state = full_state(toric_alternative(toric22))
    group = toric22.geometric_group()
    for p, label in zip(group.generators, group.labels):
        if label.startswith('B_'):
            assert expectation(p, state) == pytest.approx(1)
    assert code_projector_overlap(group, state) < 1 - 1e-6


def test_recipe_json(shor):
    rbm, recipe = construct(shor)
    data = recipe_to_json(recipe, rbm)
    assert data['class'] == 'X⊔Z'
    assert data['a'][1] == 'I*pi/2'
    assert data['b'][0] == '-I*pi/2'
    assert data['W'][0] == {'0': 'I*pi/4', '1': 'I*pi/4'}
    x_block = data['contributions'][2]
    assert x_block['generator'] == 'T_3'
    assert x_block['hidden_units'] == []


def test_toric_3x3_is_a_code_state():
    group = build_preset('toric 3x3').geometric_group()
    rbm, _ = construct(group)
    assert rbm.m == 9
    assert np.allclose(rbm.a, 2 * QUARTER)
    assert np.allclose(rbm.b, -4 * QUARTER)
    state = full_state(rbm, workers=2)
    assert code_projector_overlap(group, state) == pytest.approx(1, abs=1e-10)
    for p in group.generators:
        assert expectation(p, state) == pytest.approx(1)


def test_planar_smooth_table():
    code = build_preset('planar-smooth 4x4')
    rbm = construct_planar(code)
    assert rbm.m == 16
    assert all(label.startswith('B_') for label in rbm.hidden_labels)
    assert np.allclose(rbm.b, -4 * QUARTER)
    assert np.allclose(rbm.W[rbm.W != 0], QUARTER)
    for (i, j), a in zip(code.coordinates, rbm.a):
        assert a == pytest.approx(QUARTER if i in (0, 8) or j in (0, 8) else 2 * QUARTER)


@pytest.mark.parametrize('preset', ['planar-smooth 2x2', 'planar-rough 3x3', 'planar-mixed 3x3', 'defect-rough'])
def test_planar_network_lies_in_code_space(preset):
    code = build_preset(preset)
    rbm = construct_planar(code)
    assert code_projector_overlap(code.geometric_group(), full_state(rbm, workers=2)) == pytest.approx(1, abs=1e-10)


def test_shor_state_support(shor):
    # six Z pairs leave each block of three at 000 or 111
    rbm, _ = construct(shor)
    amps = np.abs(full_state(rbm).amplitudes)
    nonzero = amps[amps > 1e-9 * amps.max()]
    assert nonzero.size == 8
    assert np.flatnonzero(amps > 1e-9 * amps.max()).tolist() == sorted(
        sum(bit << (8 - q) for block, bit in zip(range(3), bits) for q in range(3 * block, 3 * block + 3))
        for bits in np.ndindex(2, 2, 2)
    )
    assert np.allclose(nonzero, nonzero[0])
