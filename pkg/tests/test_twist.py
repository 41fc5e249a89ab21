import pytest

from src.core.errors import LatticeSpecError
from src.core.models import GroupClass, LatticeSpec, PauliKind, WallSpec
from src.services.lattice.lattice_codes import build_preset
from src.services.lattice.twist import TwistLayout, build_twist, wall_subsystem
from src.services.pauli.pauli_core import classify, kind_of


@pytest.fixture(scope='module')
def twist():
    return build_preset('twist')


def test_twist_counts(twist):
    assert twist.n == 17
    assert twist.group.m == 16
    assert twist.group.k == 1
    assert classify(twist.group) is GroupClass.MIXED


def test_wall_and_twist_are_the_only_mixed_generators(twist):
    for p, tag in zip(twist.group.generators, twist.tags):
        if tag in ('wall', 'twist'):
            assert kind_of(p) is PauliKind.MIXED
        else:
            assert kind_of(p) in (PauliKind.X, PauliKind.Z)


def test_twist_operator_has_one_sigma_y(twist):
    q = twist.generator('Q')
    assert q.weight == 5
    assert sum(1 for i in q.support if q.x[i] and q.z[i]) == 1


def test_wall_labels(twist):
    labels = twist.group.labels
    assert 'W_{1}' in labels
    assert sum(label.startswith('W_') for label in labels) == 4


def test_wall_subsystem(twist):
    spins = wall_subsystem(twist)
    assert len(spins) == 13
    assert spins == sorted(spins)


def test_staircase_reaches_the_boundary():
    layout = TwistLayout(LatticeSpec('planar', 3, 3, wall=WallSpec((2, 2))))
    faces, cut = layout.staircase()
    assert faces[-1][0] == 0 or faces[-1][1] == 0
    assert len(cut) == len(faces) + 1


def test_twist_endpoint_on_boundary_rejected():
    with pytest.raises(LatticeSpecError, match='touches the boundary'):
        build_twist(LatticeSpec('planar', 3, 3, wall=WallSpec((0, 1))))


def test_wall_path_must_match():
    with pytest.raises(LatticeSpecError, match='does not run'):
        build_twist(LatticeSpec('planar', 3, 3, wall=WallSpec((2, 2), path=((0, 0),))))
