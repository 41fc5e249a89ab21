import numpy as np
import pytest

from conftest import make_group
from src.core.errors import DimensionMismatchError, FormatError, InvalidGroupError, RankUndefinedError
from src.core.models import GroupClass, PauliKind, PauliString, StabilizerGroup
from src.services.pauli.pauli_core import (
    apply_to_basis, classify, commutation_exponent, commutes, count_incidence, diagonal_constraints, group_from_json,
    group_to_json, group_to_y_basis, independent_rank, independent_subset, kind_of, lexicographic_solution,
    multiply, power, row_reduce, sign_exponent, symplectic_matrix, to_y_basis, validate_group,
)

X = PauliString(1, 2, (1,), (0,))
Z = PauliString(1, 2, (0,), (1,))
Y = PauliString(1, 2, (1,), (1,), 1)


def test_multiply_tracks_phase():
    xz = multiply(X, Z)
    assert (xz.x, xz.z, xz.phase) == ((1,), (1,), 0)
    zx = multiply(Z, X)
    assert (zx.x, zx.z, zx.phase) == ((1,), (1,), 2)


def test_y_squares_to_identity():
    yy = multiply(Y, Y)
    assert yy == PauliString.identity(1, 2)


def test_commutation_exponent():
    assert commutation_exponent(X, Z) == 1
    assert commutes(X, X)
    two_x = PauliString(2, 2, (1, 1), (0, 0))
    two_z = PauliString(2, 2, (0, 0), (1, 1))
    assert commutes(two_x, two_z)


def test_qudit_power_cycles():
    x3 = PauliString(1, 3, (1,), (0,))
    assert power(x3, 3) == PauliString.identity(1, 3)
    assert power(x3, 2).x == (2,)


def test_mismatched_sizes_rejected():
    with pytest.raises(DimensionMismatchError):
        multiply(X, PauliString.identity(2, 2))


@pytest.mark.parametrize('p, v, v_new, lam', [
    (Z, [-1], [-1], -1),
    (Z, [1], [1], 1),
    (X, [1], [-1], 1),
    (Y, [1], [-1], 1j),
    (Y, [-1], [1], -1j),
])
def test_apply_to_basis_qubit(p, v, v_new, lam):
    out, value = apply_to_basis(p, v)
    assert list(out) == v_new
    assert value == pytest.approx(lam)


def test_apply_to_basis_qutrit():
    z = PauliString(1, 3, (0,), (1,))
    out, value = apply_to_basis(z, [1])
    assert list(out) == [1]
    assert value == pytest.approx(np.exp(2j * np.pi / 3))
    x = PauliString(1, 3, (1,), (0,))
    out, value = apply_to_basis(x, [2])
    assert list(out) == [0]
    assert value == pytest.approx(1)


def test_kind_of():
    assert kind_of(PauliString.identity(2)) is PauliKind.I
    assert kind_of(PauliString(2, 2, (1, 1), (0, 0))) is PauliKind.X
    assert kind_of(PauliString(2, 2, (1, 0), (1, 0), 1)) is PauliKind.Y
    assert kind_of(PauliString(2, 2, (1, 0), (0, 1))) is PauliKind.MIXED
    # no Y for qudits: X Z on one site is mixed
    assert kind_of(PauliString(1, 3, (1,), (1,))) is PauliKind.MIXED


def test_classify():
    assert classify(StabilizerGroup(2, 2, ())) is GroupClass.S_X
    assert classify(make_group(['Z0 Z1', 'X0 X1'], 2)) is GroupClass.X_Z
    assert classify(make_group(['Y0 Y1', 'Z0 Z1'], 2)) is GroupClass.Y_Z
    assert classify(make_group(['Y0 Y1', 'X0 X1'], 2)) is GroupClass.X_Y
    assert classify(make_group(['Y0 Y1', 'X0 X1', 'Z0 Z1'], 2)) is GroupClass.MIXED
    assert classify(make_group(['Z0 X1'], 2)) is GroupClass.MIXED


def test_shor_rank(shor):
    assert independent_rank(shor) == 8
    assert shor.k == 1
    validate_group(shor)


def test_validate_rejects_anticommuting():
    with pytest.raises(InvalidGroupError, match='do not commute'):
        validate_group(make_group(['X0', 'Z0'], 1))


def test_validate_rejects_dependent():
    with pytest.raises(InvalidGroupError, match='product of earlier'):
        validate_group(make_group(['Z0 Z1', 'Z1 Z2', 'Z0 Z2'], 3))


def test_independent_subset_keeps_order():
    generators = make_group(['Z0 Z1', 'Z0 Z1', 'Z1 Z2', 'Z0 Z2'], 3).generators
    assert independent_subset(generators, 3, 2) == [0, 2]


def test_rank_undefined_for_composite_d():
    with pytest.raises(RankUndefinedError):
        row_reduce(np.array([[2, 0]]), 4)


def test_unit_pivot_over_composite_d():
    reduced, pivots = row_reduce(np.array([[3, 2], [2, 0]]), 4)
    assert pivots == [0]


def test_symplectic_matrix_rows(ghz):
    M = symplectic_matrix(ghz.generators, ghz.n)
    assert M.shape == (3, 6)
    assert list(M[2]) == [1, 1, 1, 0, 0, 0]


def test_diagonal_constraints_ghz(ghz):
    A, r = diagonal_constraints(ghz)
    assert A.shape == (2, 3)
    k = lexicographic_solution(A, r, 2)
    assert list(k) == [0, 0, 0]


def test_diagonal_constraints_signed():
    g = make_group(['-Z0'], 1)
    A, r = diagonal_constraints(g)
    assert list(lexicographic_solution(A, r, 2)) == [1]


def test_sign_exponent():
    assert sign_exponent(Y) == 0
    assert sign_exponent(PauliString(1, 2, (0,), (1,), 2)) == 2


def test_to_y_basis_cycles_paulis():
    assert to_y_basis(X) == Y
    y_image = to_y_basis(Y)
    assert (y_image.x, y_image.z, sign_exponent(y_image)) == ((0,), (1,), 0)
    z_image = to_y_basis(Z)
    assert (z_image.x, z_image.z, z_image.phase) == ((1,), (0,), 0)


def test_group_to_y_basis_classes():
    g = make_group(['X0 X1', 'Y0 Y1'], 2)
    assert classify(group_to_y_basis(g)) is GroupClass.Y_Z


def test_group_json_keeps_labels(shor):
    data = group_to_json(shor)
    assert data['generators'][2]['label'] == 'T_3'
    again = group_from_json(data)
    assert again.labels == shor.labels
    assert again.generators == shor.generators


def test_group_json_reports_location():
    with pytest.raises(FormatError) as info:
        group_from_json({'n': 2, 'd': 2, 'generators': [{'x': [1], 'z': [0, 0]}]}, 'g.json')
    assert info.value.location == 'g.json.generators[0].x'


def test_count_incidence_on_shor(shor):
    assert count_incidence(shor, PauliKind.Z).tolist() == [1, 2, 1, 1, 2, 1, 1, 2, 1]
    assert count_incidence(shor, 'X').tolist() == [1] * 3 + [2] * 3 + [1] * 3
    assert not count_incidence(shor, PauliKind.Y).any()


@pytest.mark.parametrize('texts', [
    ['Z0 Z1', 'X0 X1'],
    ['Y0 Y1', 'Y1 Y2', 'Z0 Z1 Z2'],
    ['Y0 Y1', 'X0 X1'],
    ['Z0 X1', 'X0 Z1'],
])
def test_classify_ignores_generator_order(texts):
    n = 3
    forward = classify(make_group(texts, n))
    assert classify(make_group(texts[::-1], n)) is forward
    assert classify(make_group(texts[1:] + texts[:1], n)) is forward
