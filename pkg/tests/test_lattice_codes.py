import pytest

from src.core.errors import LatticeSpecError
from src.core.models import Boundary, DefectSpec, GroupClass, LatticeSpec, PauliKind
from src.services.lattice.lattice_codes import (
    build, build_planar, build_preset, build_toric, build_zd, coordinate_label, geometry_to_json,
    lattice_spec_from_json, lattice_spec_to_json, preset_spec, string_path,
)
from src.services.pauli.pauli_core import classify, commutes, independent_rank, kind_of


def test_toric_counts(toric22):
    assert toric22.n == 8
    assert toric22.group.m == 6
    assert len(toric22.redundant) == 2
    assert toric22.group.k == 2
    assert classify(toric22.group) is GroupClass.X_Z


def test_toric_geometric_group_has_every_face_and_vertex(toric22):
    labels = toric22.geometric_group().labels
    assert sum(label.startswith('A_') for label in labels) == 4
    assert sum(label.startswith('B_') for label in labels) == 4
    assert independent_rank(toric22.geometric_group()) == 6


def test_toric_3x3():
    code = build_toric(3, 3)
    assert code.n == 18
    assert code.group.k == 2


def test_toric_too_small():
    with pytest.raises(LatticeSpecError):
        build_toric(1, 3)


def test_planar_smooth_has_no_logical_qubit():
    code = build_preset('planar-smooth 4x4')
    assert code.n == 40
    assert code.group.m == 40
    assert len(code.redundant) == 1
    assert code.group.k == 0


def test_planar_rough_weights():
    code = build_preset('planar-rough 4x4')
    assert code.n == 24
    labels = code.geometric_group().labels
    assert sum(label.startswith('E_') for label in labels) == 4
    assert sum(label.startswith('F_') for label in labels) == 8
    assert sum(label.startswith('B_') for label in labels) == 4
    assert sum(label.startswith('A_') for label in labels) == 9


def test_planar_mixed_corner_rules():
    code = build_preset('planar-mixed 4x4')
    labels = code.geometric_group().labels
    # the smooth/smooth corner keeps a weight-2 star; rough sides own their lines
    assert coordinate_label('C', (0, 0)) in labels
    assert all(c[0] != 8 and c[1] != 8 for c in code.coordinates)


def test_generators_commute_on_every_preset():
    for preset in ('planar-mixed 3x3', 'defect-smooth', 'defect-rough', 'zd 2x2 3'):
        code = build_preset(preset)
        group = code.geometric_group()
        for i, p in enumerate(group.generators):
            for q in group.generators[i + 1:]:
                assert commutes(p, q), preset


def test_smooth_defect_removes_interior():
    code = build_preset('defect-smooth 4x4')
    assert code.n == 28
    assert len(code.crossed) == 4
    faces = [label for label in code.geometric_group().labels if label.startswith('B_')]
    assert len(faces) == 12


def test_rough_defect_truncates_neighbours():
    code = build_preset('defect-rough 4x4')
    assert code.n == 20
    labels = code.geometric_group().labels
    assert sum(label.startswith('F_') for label in labels) == 8


def test_defect_must_stay_inside():
    spec = LatticeSpec('planar', 4, 4, defects=(DefectSpec('smooth', (1, 1, 1, 1)),))
    with pytest.raises(LatticeSpecError, match='strictly inside'):
        build(spec)


def test_defect_region_must_be_odd():
    with pytest.raises(LatticeSpecError):
        DefectSpec('smooth', (2, 3, 5, 5))


def test_boundary_tags_checked():
    with pytest.raises(LatticeSpecError):
        Boundary('smooth', 'jagged', 'smooth', 'smooth')


def test_zd_qutrit():
    code = build_zd(2, 2, 3)
    assert code.group.d == 3
    assert code.n == 8
    assert all(kind_of(p) in (PauliKind.X, PauliKind.Z) for p in code.group.generators)
    # plaquette exponents are +-1 around every face
    for label, face in code.signs.items():
        assert sorted(face.values()) == [-1, -1, 1, 1]


def test_presets():
    assert preset_spec('shor') == 'shor'
    assert preset_spec('toric 3x2').rows == 3
    assert preset_spec('zd 2x2 5').d == 5
    with pytest.raises(LatticeSpecError, match='unknown preset'):
        preset_spec('hexagonal')
    with pytest.raises(LatticeSpecError):
        preset_spec('toric big')


def test_spec_json_keeps_fields():
    spec = preset_spec('defect-rough 4x4')
    again = lattice_spec_from_json(lattice_spec_to_json(spec))
    assert again == spec


def test_geometry_json(toric22):
    data = geometry_to_json(toric22)
    assert len(data['coordinates']) == 8
    assert sum(not g['independent'] for g in data['generators']) == 2
    assert data['generators'][0]['operator'].startswith('σ_x^{')


def test_z_string_path_between_vertices():
    code = build_planar(LatticeSpec('planar', 3, 3))
    path = string_path(code, 'z', (0, 0), (0, 4))
    index = code.edge_index
    assert sorted(path) == sorted([index[(0, 1)], index[(0, 3)]])


def test_x_string_to_boundary():
    code = build_preset('planar-smooth 3x3')
    path = string_path(code, 'x', (1, 1), 'boundary')
    assert len(path) == 1


def test_string_path_unknown_site():
    with pytest.raises(LatticeSpecError):
        string_path(build_toric(2, 2), 'z', (0, 0), (9, 9))


def operator_sites(code, label):
    group = code.geometric_group()
    p = group.generators[group.labels.index(label)]
    return kind_of(p), {code.coordinates[i] for i in p.support}


@pytest.mark.parametrize('preset, label, kind, sites', [
    ('planar-smooth 4x4', 'A_{44}', PauliKind.X, {(3, 4), (5, 4), (4, 3), (4, 5)}),
    ('planar-smooth 4x4', 'C_{08}', PauliKind.X, {(0, 7), (1, 8)}),
    ('planar-smooth 4x4', 'D_{04}', PauliKind.X, {(1, 4), (0, 3), (0, 5)}),
    ('planar-rough 4x4', 'E_{17}', PauliKind.Z, {(2, 7), (1, 6)}),
    ('planar-rough 4x4', 'F_{57}', PauliKind.Z, {(4, 7), (6, 7), (5, 6)}),
    ('defect-smooth', 'D_{24}', PauliKind.X, {(1, 4), (2, 3), (2, 5)}),
    ('defect-smooth', 'D_{42}', PauliKind.X, {(3, 2), (5, 2), (4, 1)}),
    ('defect-rough', 'F_{31}', PauliKind.Z, {(2, 1), (4, 1), (3, 0)}),
])
def test_named_boundary_operators(preset, label, kind, sites):
    assert operator_sites(build_preset(preset), label) == (kind, sites)


def test_smooth_defect_corners_carry_no_star():
    code = build_preset('defect-smooth')
    labels = code.geometric_group().labels
    for corner in ((2, 2), (2, 6), (6, 2), (6, 6)):
        inner = f"{corner[0]}{corner[1]}"
        assert not any(label.endswith(f"_{{{inner}}}") for label in labels), corner
