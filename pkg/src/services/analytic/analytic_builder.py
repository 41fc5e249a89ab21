"""
analytic_builder.py - Closed-form RBM parameters for composable stabilizer groups

Qubit rules (spins v = +-1):
  Z-type generator of weight l: one hidden unit, b = -l*i*pi/4, W = i*pi/4
      on its support, a += i*pi/4 on its support.
  X-type generator: nothing.
  Y-type generator: a -= i*pi/4 once per spin covered by any Y generator,
      then handled as X-type.
  X and Y together: rewrite in the sigma_y eigenbasis (X -> Y, Y -> Z) and
      build there; the result carries basis='y'.

Qudit rule (d > 2, digits k = 0..d-1): every Z-type generator with centred
exponents c gets d-1 hidden units, b_l = i*pi*l/d - i*pi/2, W = i*pi*c/d,
and a += i*pi*(d-1)*c/d.
"""
import logging
import math
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from src.core.errors import ConsistencyError, InvalidGroupError, LatticeSpecError, NotComposableError
from src.core.models import (
    AnalyticRecipe, GroupClass, HiddenContribution, LatticeCode, PauliKind, RbmState, StabilizerGroup,
)
from src.services.lattice.lattice_codes import PLAQUETTE_LABELS, SquareGeometry, coordinate_label
from src.services.pauli.pauli_core import classify, count_incidence, group_to_y_basis, kind_of, sign_exponent
from src.utils.helpers import pi_multiple
from src.utils.translations import pauli_to_text

logger = logging.getLogger(__name__)

QUARTER = 0.25j * math.pi


def _centred(e: int, d: int) -> int:
    """Representative of e mod d in (-d/2, d/2]."""
    e %= d
    return e - d if e > d // 2 else e


def _check_sign(g: StabilizerGroup, j: int, kind: PauliKind) -> int:
    """Sign exponent of generator j; only Z-type generators may carry a sign."""
    p = g.generators[j]
    e = sign_exponent(p)
    if e % 2:
        raise InvalidGroupError(f"generator {g.labels[j]} has phase eta^{e} and no +1 eigenvalue")
    if e and kind is not PauliKind.Z:
        raise NotComposableError(
            f"{kind.value}-type generator {g.labels[j]} carries sign eta^{e}; "
            "the analytic construction requires variational route"
        )
    return e


def _qubit_parameters(g: StabilizerGroup) -> Tuple[np.ndarray, List[complex], List[np.ndarray],
                                                      List[str], List[HiddenContribution], Tuple[int, ...]]:
    n = g.n
    a = np.zeros(n, dtype=np.complex128)
    b, rows, labels, contributions = [], [], [], []
    y_cover = set()
    for j, p in enumerate(g.generators):
        kind = kind_of(p)
        sign = _check_sign(g, j, kind)
        if kind is PauliKind.Z:
            support = p.support
            row = np.zeros(n, dtype=np.complex128)
            row[list(support)] = QUARTER
            # sign -1 moves the zero of cosh to the even-parity configurations
            b.append(-len(support) * QUARTER + (0.5j * math.pi if sign else 0))
            rows.append(row)
            labels.append(g.labels[j])
            a[list(support)] += QUARTER
            contributions.append(HiddenContribution(j, g.labels[j], 'Z', support, (len(b) - 1,)))
        else:
            if kind is PauliKind.Y:
                y_cover.update(p.support)
            contributions.append(HiddenContribution(j, g.labels[j], kind.value, p.support))
    for i in y_cover:
        a[i] -= QUARTER
    return a, b, rows, labels, contributions, tuple(sorted(y_cover))


def _qudit_parameters(g: StabilizerGroup) -> Tuple[np.ndarray, List[complex], List[np.ndarray],
                                                      List[str], List[HiddenContribution]]:
    """Parameters in digit labels (visible values 0..d-1), any d >= 2."""
    n, d = g.n, g.d
    a = np.zeros(n, dtype=np.complex128)
    b, rows, labels, contributions = [], [], [], []
    for j, p in enumerate(g.generators):
        kind = kind_of(p)
        if kind not in (PauliKind.Z, PauliKind.X, PauliKind.I):
            raise NotComposableError(f"generator {g.labels[j]} mixes X and Z on one qudit; requires variational route")
        if kind is not PauliKind.Z:
            if p.phase % (2 * d):
                raise NotComposableError(
                    f"X-type generator {g.labels[j]} carries phase eta^{p.phase}; requires variational route"
                )
            contributions.append(HiddenContribution(j, g.labels[j], kind.value, p.support))
            continue
        if p.phase % 2:
            raise InvalidGroupError(f"generator {g.labels[j]} has phase eta^{p.phase} and no +1 eigenvalue")
        shift = p.phase // 2
        c = np.array([_centred(z, d) for z in p.z], dtype=np.float64)
        first = len(b)
        for l in range(1, d):
            b.append(1j * math.pi * (l + shift) / d - 0.5j * math.pi)
            rows.append(1j * math.pi * c / d)
            labels.append(f"{g.labels[j]}^{l}")
        a += 1j * math.pi * (d - 1) * c / d
        contributions.append(HiddenContribution(j, g.labels[j], 'Z', p.support, tuple(range(first, len(b)))))
    return a, b, rows, labels, contributions


def _network(n: int, d: int, a: np.ndarray, b: List[complex], rows: List[np.ndarray],
             labels: List[str], basis: str = 'z') -> RbmState:
    W = np.vstack(rows) if rows else np.zeros((0, n), dtype=np.complex128)
    return RbmState(a, np.array(b, dtype=np.complex128), W, d, tuple(labels), basis)


def construct(g: StabilizerGroup) -> Tuple[RbmState, AnalyticRecipe]:
    """
    Exact RBM for a composable group.

    Returns:
        The network and a recipe recording which generator produced which
        hidden units. For X and Y together the network is in the sigma_y
        eigenbasis (rbm.basis == 'y').

    Raises:
        NotComposableError: the group class is MIXED, or an X/Y-type
            generator carries a sign.
    """
    group_class = classify(g)
    if not group_class.composable:
        raise NotComposableError(f"group of class {group_class.value} requires variational route")

    if g.d > 2:
        a, b, rows, labels, contributions = _qudit_parameters(g)
        rbm = _network(g.n, g.d, a, b, rows, labels)
        recipe = AnalyticRecipe(g, group_class, 'z', tuple(contributions),
                                tuple(int(c) for c in count_incidence(g, PauliKind.Z)), ())
        logger.info("constructed %s qudit RBM: n=%d, hidden=%d", group_class.value, rbm.n, rbm.m)
        return rbm, recipe

    basis, working = 'z', g
    if group_class is GroupClass.X_Y:
        basis, working = 'y', group_to_y_basis(g)
    a, b, rows, labels, contributions, y_cover = _qubit_parameters(working)
    rbm = _network(g.n, 2, a, b, rows, labels, basis)
    recipe = AnalyticRecipe(g, group_class, basis, tuple(contributions),
                            tuple(int(c) for c in count_incidence(working, PauliKind.Z)), y_cover)
    logger.info("constructed %s RBM (%s basis): n=%d, hidden=%d", group_class.value, basis, rbm.n, rbm.m)
    return rbm, recipe


def planar_parameter_table(code: LatticeCode) -> Tuple[np.ndarray, Dict[str, complex]]:
    """
    Expected visible biases and hidden biases read off the lattice alone:
    a_e = i*pi/4 per face bordering e, b_f = -i*pi/4 per edge of f.
    """
    if code.spec.d != 2 or code.spec.wall is not None:
        raise LatticeSpecError("parameter tables exist for qubit square lattices")
    geometry = SquareGeometry(code.spec)
    index = code.edge_index
    labels = set(code.geometric_group().labels)
    a = np.zeros(code.n, dtype=np.complex128)
    b: Dict[str, complex] = {}
    for face in sorted(geometry.faces):
        edges = geometry.boundary_of(face)
        for e in edges:
            a[index[e]] += QUARTER
        label = coordinate_label(PLAQUETTE_LABELS[len(edges)], face)
        if label not in labels:
            raise ConsistencyError(f"plaquette {face} has no generator labelled {label}")
        b[label] = -len(edges) * QUARTER
    return a, b


def construct_planar(code: LatticeCode) -> RbmState:
    """
    Construct from every generator the geometry defines (dependent ones
    included, one hidden unit per plaquette) and check the result against
    planar_parameter_table.
    """
    group = code.geometric_group()
    if classify(group) not in (GroupClass.X_Z, GroupClass.S_X, GroupClass.S_Z):
        raise NotComposableError(f"planar construction expects stars and plaquettes, got {classify(group).value}")
    rbm, _ = construct(group)
    a, b = planar_parameter_table(code)
    if not np.array_equal(rbm.a, a):
        raise ConsistencyError("visible biases differ from the lattice parameter table")
    for label, value in zip(rbm.hidden_labels, rbm.b):
        if b.get(label) != value:
            raise ConsistencyError(f"hidden bias of {label} is {value}, table says {b.get(label)}")
    if len(b) != rbm.m:
        raise ConsistencyError(f"{rbm.m} hidden units for {len(b)} plaquettes")
    return rbm


def to_spin_form(rbm: RbmState) -> RbmState:
    """Rewrite a qubit network over digits k in {0, 1} as one over spins v = 1 - 2k."""
    if rbm.d != 2:
        raise ValueError("spin form is defined for d=2")
    b = rbm.b + rbm.W.sum(axis=1) / 2
    return RbmState(-rbm.a / 2, b, -rbm.W / 2, 2, rbm.hidden_labels, rbm.basis)


def construct_zd(code: LatticeCode) -> RbmState:
    """
    d-1 hidden units per plaquette of a D(Z_d) torus. For d=2 the digit
    parameters are converted to spin form.
    """
    if code.spec.d < 2:
        raise LatticeSpecError(f"local dimension must be >= 2, got {code.spec.d}")
    g = code.geometric_group()
    if g.d > 2:
        rbm, _ = construct(g)
        return rbm
    a, b, rows, labels, _ = _qudit_parameters(g)
    return to_spin_form(_network(g.n, 2, a, b, rows, labels))


def toric_alternative(code: LatticeCode) -> RbmState:
    """a = i*pi/4 on every edge with the plaquette units of construct()."""
    rbm = construct_planar(code) if code.spec.kind == 'planar' else construct(code.geometric_group())[0]
    return RbmState(np.full(rbm.n, QUARTER), rbm.b, rbm.W, rbm.d, rbm.hidden_labels, rbm.basis)


def recipe_to_json(recipe: AnalyticRecipe, rbm: Optional[RbmState] = None) -> Dict[str, Any]:
    g = recipe.source_group
    data: Dict[str, Any] = {
        'class': recipe.group_class.value,
        'basis': recipe.basis,
        'contributions': [
            {
                'generator': c.label,
                'operator': pauli_to_text(g.generators[c.generator_index]),
                'kind': c.kind,
                'support': list(c.support),
                'hidden_units': list(c.hidden_indices),
            }
            for c in recipe.contributions
        ],
        'z_incidence': list(recipe.z_incidence),
        'y_cover': list(recipe.y_cover),
    }
    if rbm is not None:
        data['a'] = [pi_multiple(v) for v in rbm.a]
        data['b'] = [pi_multiple(v) for v in rbm.b]
        data['W'] = [{str(i): pi_multiple(v) for i, v in enumerate(row) if v != 0} for row in rbm.W]
    return data
