import json

import numpy as np
import pytest

from src.core.errors import DimensionMismatchError, EnumerationCapError, FormatError
from src.core.models import DenseState, PauliString, RbmState
from src.services.analytic.analytic_builder import construct_planar
from src.services.lattice.lattice_codes import build_preset, string_path
from src.services.oracle.exact_oracle import apply_pauli, expectation, fidelity
from src.services.rbm.rbm_state import (
    Y_BASIS, amplitude, amplitudes, append_hidden, apply_string_x, apply_string_z, compose, from_json, full_state,
    load, log_amplitudes, save, to_computational_basis, to_json,
)
from src.utils.helpers import all_indices, apply_local, visible_values


def random_rbm(rng, n, m, d=2, scale=0.3):
    def c(*shape):
        return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
    return RbmState(c(n), c(m), c(m, n), d)


def test_uniform_network_has_flat_amplitudes():
    state = full_state(RbmState.uniform(3))
    assert np.allclose(state.amplitudes, 1)


@pytest.mark.parametrize('n, m, d, block_digits, workers', [
    (6, 4, 2, 0, 1),
    (6, 4, 2, 2, 3),
    (4, 3, 3, 2, 2),
    (5, 2, 2, None, 1),
    (3, 2, 4, 1, 3),
    (4, 3, 4, 2, 2),
])
def test_gray_walk_matches_direct_evaluation(rng, n, m, d, block_digits, workers):
    s = random_rbm(rng, n, m, d)
    gray = full_state(s, workers=workers, block_digits=block_digits)
    naive = full_state(s, method='naive')
    assert np.allclose(gray.amplitudes, naive.amplitudes, rtol=1e-10, atol=1e-12)


def test_log_amplitudes_agree(rng):
    s = random_rbm(rng, 4, 3)
    configs = visible_values(all_indices(4, 2), 2)
    assert np.allclose(np.exp(log_amplitudes(s, configs)), amplitudes(s, configs))


def test_log_amplitudes_survive_large_parameters():
    s = RbmState(np.zeros(2), np.array([800.0]), np.zeros((1, 2)))
    logs = log_amplitudes(s, np.array([[1, 1]]))
    assert np.isfinite(logs).all()
    assert logs[0].real == pytest.approx(800.0)


def test_enumeration_cap():
    with pytest.raises(EnumerationCapError) as info:
        full_state(RbmState.uniform(4), cap=10)
    assert info.value.required == 16


def test_configuration_length_checked():
    with pytest.raises(DimensionMismatchError):
        amplitude(RbmState.uniform(3), [1, 1])


def test_append_hidden_labels():
    s = append_hidden(RbmState.uniform(2), 0.5, [1, 0], 'extra')
    assert s.m == 1
    assert s.hidden_labels == ('extra',)


def test_compose_multiplies_parts(rng):
    p1 = random_rbm(rng, 2, 1)
    p2 = random_rbm(rng, 3, 2)
    composed = compose([(p1, [0, 2]), (p2, [1, 2, 3])], 4)
    assert composed.m == 3
    v = np.array([1, -1, -1, 1])
    expected = amplitude(p1, v[[0, 2]]) * amplitude(p2, v[[1, 2, 3]])
    assert amplitude(composed, v) == pytest.approx(expected)


def test_compose_rejects_repeated_embedding(rng):
    with pytest.raises(ValueError):
        compose([(random_rbm(rng, 2, 1), [0, 0])])


def test_z_string_multiplies_by_twice_the_spin(rng):
    s = random_rbm(rng, 3, 2)
    t = apply_string_z(s, [1])
    assert t.m == 3
    for v in ([1, 1, -1], [1, -1, -1]):
        assert amplitude(t, v) == pytest.approx(2 * v[1] * amplitude(s, v))


def test_x_string_flips_path_spins(rng):
    s = random_rbm(rng, 3, 2)
    t = apply_string_x(s, [0, 2])
    v = np.array([1, -1, 1])
    flipped = np.array([-1, -1, -1])
    assert amplitude(t, v) == pytest.approx(amplitude(s, flipped))


def test_x_string_twice_is_identity(rng):
    s = random_rbm(rng, 3, 2)
    back = apply_string_x(apply_string_x(s, [0, 1]), [0, 1])
    assert np.array_equal(back.a, s.a)
    assert np.array_equal(back.W, s.W)


def test_string_path_out_of_range():
    with pytest.raises(IndexError):
        apply_string_z(RbmState.uniform(2), [2])


def test_json_file_preserves_parameters(tmp_path, rng):
    s = append_hidden(random_rbm(rng, 3, 1), 0.1j, [1, 0, 0], 'z')
    path = save(str(tmp_path / 'net.json'), s)
    again = load(path)
    assert np.array_equal(again.a, s.a)
    assert np.array_equal(again.W, s.W)
    assert again.hidden_labels == s.hidden_labels


def test_json_version_checked():
    data = to_json(RbmState.uniform(2))
    data['version'] = 'other'
    with pytest.raises(FormatError, match='version'):
        from_json(data)


def test_json_row_length_checked(tmp_path):
    data = to_json(RbmState(np.zeros(2), np.zeros(1), np.zeros((1, 2))))
    data['W'][0].pop()
    path = tmp_path / 'bad.json'
    path.write_text(json.dumps(data))
    with pytest.raises(FormatError) as info:
        load(str(path))
    assert info.value.location.endswith('.W[0]')


def test_y_basis_eigenstate_back_in_z():
    state = to_computational_basis(DenseState(1, 2, [1, 0]), 'y')
    assert np.allclose(state.amplitudes, np.array([1, 1j]) / np.sqrt(2))


def test_y_basis_round_trip(rng):
    amps = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    in_y = DenseState(3, 2, apply_local(amps, 3, 2, Y_BASIS))
    assert np.allclose(to_computational_basis(in_y, 'y').amplitudes, amps)


def test_zero_hidden_unit_doubles_every_amplitude(rng):
    s = random_rbm(rng, 3, 2)
    t = append_hidden(s, 0, np.zeros(3))
    configs = visible_values(all_indices(3, 2), 2)
    assert np.allclose(amplitudes(t, configs), 2 * amplitudes(s, configs))
    assert fidelity(full_state(t), full_state(s)) == pytest.approx(1)


def flipped_generators(code, state):
    group = code.geometric_group()
    return sorted(label for p, label in zip(group.generators, group.labels)
                  if expectation(p, state).real == pytest.approx(-1))


def test_z_string_ending_on_rough_boundary_flips_one_star():
    code = build_preset('planar-rough 3x3')
    rbm = construct_planar(code)
    edge = code.edge_index[(2, 5)]
    excited = full_state(apply_string_z(rbm, [edge]))
    assert flipped_generators(code, excited) == ['A_{24}']
    z = PauliString.from_sites(code.n, 2, z={edge: 1})
    assert fidelity(excited, apply_pauli(z, full_state(rbm))) == pytest.approx(1)


def test_x_string_ending_on_smooth_boundary_flips_one_plaquette():
    code = build_preset('planar-smooth 2x2')
    rbm = construct_planar(code)
    path = string_path(code, 'x', (1, 1), 'boundary')
    excited = full_state(apply_string_x(rbm, path))
    assert flipped_generators(code, excited) == ['B_{11}']
    x = PauliString.from_sites(code.n, 2, x={j: 1 for j in path})
    assert fidelity(excited, apply_pauli(x, full_state(rbm))) == pytest.approx(1)


def test_z_string_between_vertices_matches_the_operator():
    code = build_preset('planar-smooth 2x2')
    rbm = construct_planar(code)
    path = string_path(code, 'z', (0, 0), (2, 2))
    excited = full_state(apply_string_z(rbm, path))
    assert flipped_generators(code, excited) == ['A_{22}', 'C_{00}']
    z = PauliString.from_sites(code.n, 2, z={j: 1 for j in path})
    assert fidelity(excited, apply_pauli(z, full_state(rbm))) == pytest.approx(1)
