import math

import numpy as np
import pytest

from src.core.errors import FormatError
from src.core.models import PauliString
from src.services.pauli.pauli_core import multiply
from src.utils.helpers import (
    all_indices, apply_local, digits_to_index, gray_changes, gray_digits, parse_json, pi_multiple,
)
from src.utils.translations import pauli_from_text, pauli_to_text


@pytest.mark.parametrize('n, d', [(3, 2), (2, 3), (3, 4)])
def test_gray_walk_visits_every_configuration_once(n, d):
    digits = gray_digits(0, n, d)
    seen = {digits_to_index(digits, d)}
    for change in gray_changes(n, d):
        assert digits[change.position] == change.old
        assert abs(change.new - change.old) == 1
        digits[change.position] = change.new
        seen.add(digits_to_index(digits, d))
    assert len(seen) == d ** n


def test_gray_segments_join_up():
    n, d = 3, 3
    for start, stop in [(0, 9), (9, 20), (20, 27)]:
        digits = gray_digits(start, n, d)
        for change in gray_changes(n, d, start, stop):
            digits[change.position] = change.new
        assert digits == gray_digits(stop - 1, n, d)


def test_all_indices_order():
    idx = all_indices(2, 3)
    assert idx.shape == (9, 2)
    assert list(idx[5]) == [1, 2]


def test_apply_local_identity_and_flip():
    amps = np.arange(4, dtype=np.complex128)
    assert np.allclose(apply_local(amps, 2, 2, np.eye(2)), amps)
    flip = np.array([[0, 1], [1, 0]])
    assert np.allclose(apply_local(amps, 2, 2, flip), amps[::-1])


@pytest.mark.parametrize('value, text', [
    (0.25j * math.pi, 'I*pi/4'),
    (-0.5j * math.pi, '-I*pi/2'),
    (-0.75j * math.pi, '-3*I*pi/4'),
    (0, '0'),
])
def test_pi_multiple(value, text):
    assert pi_multiple(value) == text


def test_pi_multiple_falls_back_to_repr():
    assert pi_multiple(0.3) == repr(complex(0.3))


def test_parse_json_location():
    with pytest.raises(FormatError) as info:
        parse_json('{"n": 2,\n "d": }', 'bad.json')
    assert info.value.location.startswith('bad.json:2:')


def test_pauli_text_round_trip_with_sign():
    p = pauli_from_text('-X0 Y1 Z2', 3)
    assert p.x == (1, 1, 0)
    assert p.z == (0, 1, 1)
    assert pauli_to_text(p) == '-X0 Y1 Z2'


def test_pauli_text_qudit_exponents():
    p = pauli_from_text('X0 Z1^2', 2, 3)
    assert p == PauliString(2, 3, (1, 0), (0, 2))
    assert pauli_to_text(p) == 'X0 Z1^2'


def test_pauli_text_sigma_style_uses_coordinates():
    p = pauli_from_text('X0 X1', 2)
    assert pauli_to_text(p, 'sigma', [(0, 1), (1, 0)]) == 'σ_x^{01}σ_x^{10}'


def test_pauli_text_rejects_bad_tokens():
    with pytest.raises(FormatError):
        pauli_from_text('Q0', 1)
    with pytest.raises(FormatError):
        pauli_from_text('Y0', 1, 3)


def test_y_after_z_on_one_site_keeps_the_phase():
    z, y = pauli_from_text('Z0', 1), pauli_from_text('Y0', 1)
    assert pauli_from_text('Z0 Y0', 1) == multiply(z, y)
    assert pauli_from_text('Z0 Y0', 1) == PauliString(1, 2, (1,), (0,), 3)
    assert pauli_from_text('Y0 Y0', 1) == PauliString.identity(1)
    assert pauli_from_text('Y0^2', 1) == PauliString.identity(1)
