"""
exact_oracle.py - Dense state vectors as ground truth

Generators are applied as tensor operations on a (d,)*n array; projectors
are never materialised. DenseState ordering is row-major with qudit 0
most significant.
"""
import logging
import struct
from dataclasses import dataclass
from itertools import combinations
from typing import List, Optional, Sequence

import numpy as np
from scipy.sparse.linalg import LinearOperator, eigsh

from src.core.config import Config
from src.core.errors import ConsistencyError, DimensionMismatchError, FormatError, SubsystemError
from src.core.models import DenseState, PauliString, StabilizerGroup
from src.services.pauli.pauli_core import (
    commutes, diagonal_constraints, eta, independent_subset, is_prime, lexicographic_solution,
)
from src.services.rbm.rbm_state import check_cap
from src.utils.helpers import digits_to_index

logger = logging.getLogger(__name__)


def _check_shapes(s: DenseState, n: int, d: int) -> None:
    if s.n != n or s.d != d:
        raise DimensionMismatchError(f"state on (n={s.n}, d={s.d}) does not match (n={n}, d={d})")


def _nonzero_norm(s: DenseState) -> float:
    norm = s.norm()
    if norm == 0:
        raise ValueError("zero-norm state")
    return norm


def _axis_shape(n: int, j: int, d: int):
    shape = [1] * n
    shape[j] = d
    return tuple(shape)


def apply_pauli_tensor(p: PauliString, tensor: np.ndarray) -> np.ndarray:
    n, d = p.n, p.d
    out = tensor
    for j in p.z_support:
        phases = np.array([eta(d, 2 * p.z[j] * k) for k in range(d)], dtype=np.complex128)
        out = out * phases.reshape(_axis_shape(n, j, d))
    for j in p.x_support:
        out = np.roll(out, p.x[j], axis=j)
    if p.phase:
        out = out * eta(d, p.phase)
    return out


def apply_pauli(p: PauliString, s: DenseState) -> DenseState:
    """P|s> with P = eta^phase X^x Z^z."""
    _check_shapes(s, p.n, p.d)
    return DenseState(s.n, s.d, apply_pauli_tensor(p, s.tensor()).reshape(-1))


def _project_tensor(generators: Sequence[PauliString], tensor: np.ndarray, d: int) -> np.ndarray:
    for p in generators:
        term = tensor
        total = tensor.copy()
        for _ in range(1, d):
            term = apply_pauli_tensor(p, term)
            total = total + term
        tensor = total / d
    return tensor


def project(g: StabilizerGroup, s: DenseState) -> DenseState:
    """P_C|s> with P_C = prod_j (1/d) sum_h T_j^h."""
    _check_shapes(s, g.n, g.d)
    return DenseState(s.n, s.d, _project_tensor(g.generators, s.tensor(), g.d).reshape(-1))


def basis_state(n: int, d: int, digits: Sequence[int]) -> DenseState:
    amps = np.zeros(d ** n, dtype=np.complex128)
    amps[digits_to_index(digits, d)] = 1.0
    return DenseState(n, d, amps)


def _reference_digits(g: StabilizerGroup, cap: Optional[int]) -> List[int]:
    if is_prime(g.d):
        A, r = diagonal_constraints(g)
        k = lexicographic_solution(A, r, g.d)
        if k is None:
            raise ConsistencyError("no basis state has a nonzero projection onto the code space")
        return [int(v) for v in k]
    # composite d: scan in index order
    for index in range(g.d ** g.n):
        digits = [(index // g.d ** (g.n - 1 - j)) % g.d for j in range(g.n)]
        if project(g, basis_state(g.n, g.d, digits)).norm() > Config.ZERO_TOL:
            return digits
    raise ConsistencyError("no basis state has a nonzero projection onto the code space")


def code_state(g: StabilizerGroup, cap: Optional[int] = None) -> DenseState:
    """
    P_C|r>, normalised, where |r> is the first basis state in index order
    whose projection is nonzero.
    """
    check_cap(g.n, g.d, cap)
    digits = _reference_digits(g, cap)
    projected = project(g, basis_state(g.n, g.d, digits))
    norm = projected.norm()
    if norm <= Config.ZERO_TOL:
        raise ConsistencyError(f"reference state {digits} projected to zero")
    return DenseState(g.n, g.d, projected.amplitudes / norm)


def code_projector_overlap(g: StabilizerGroup, s: DenseState) -> float:
    """<s|P_C|s>/<s|s>; 1 iff s lies in the code space."""
    _check_shapes(s, g.n, g.d)
    norm = _nonzero_norm(s)
    projected = project(g, s)
    return float(np.real(np.vdot(s.amplitudes, projected.amplitudes)) / norm ** 2)


def expectation(p: PauliString, s: DenseState) -> complex:
    norm = _nonzero_norm(s)
    return complex(np.vdot(s.amplitudes, apply_pauli(p, s).amplitudes) / norm ** 2)


def fidelity(s1: DenseState, s2: DenseState) -> float:
    """|<s1|s2>|^2 / (<s1|s1><s2|s2>)."""
    _check_shapes(s2, s1.n, s1.d)
    n1, n2 = _nonzero_norm(s1), _nonzero_norm(s2)
    overlap = np.vdot(s1.amplitudes, s2.amplitudes)
    return float(min(1.0, abs(overlap) ** 2 / (n1 ** 2 * n2 ** 2)))


def distance(s1: DenseState, s2: DenseState) -> float:
    """arccos sqrt(F), in [0, pi/2]."""
    return float(np.arccos(np.sqrt(fidelity(s1, s2))))


def align_phase(s: DenseState) -> DenseState:
    """Rotate the global phase so the largest-modulus amplitude is real positive."""
    k = int(np.argmax(np.abs(s.amplitudes)))
    value = s.amplitudes[k]
    if value == 0:
        raise ValueError("zero-norm state")
    return DenseState(s.n, s.d, s.amplitudes * (abs(value) / value))


def ground_state(g: StabilizerGroup, cap: Optional[int] = None) -> DenseState:
    """
    Lowest eigenvector of H = -sum_j sum_{h=1}^{d-1} T_j^h, found without
    the projector machinery (dense eigh for tiny systems, eigsh otherwise).
    """
    total = check_cap(g.n, g.d, cap)
    shape = (g.d,) * g.n

    def matvec(v: np.ndarray) -> np.ndarray:
        tensor = np.asarray(v, dtype=np.complex128).reshape(shape)
        out = np.zeros(shape, dtype=np.complex128)
        for p in g.generators:
            term = tensor
            for _ in range(1, g.d):
                term = apply_pauli_tensor(p, term)
                out -= term
        return out.reshape(-1)

    if total <= 256:
        H = np.column_stack([matvec(column) for column in np.eye(total, dtype=np.complex128)])
        _, vectors = np.linalg.eigh(H)
        vector = vectors[:, 0]
    else:
        operator = LinearOperator((total, total), matvec=matvec, dtype=np.complex128)
        rng = np.random.default_rng(0)
        v0 = rng.standard_normal(total) + 1j * rng.standard_normal(total)
        _, vectors = eigsh(operator, k=1, which='SA', v0=v0)
        vector = vectors[:, 0]
    return DenseState(g.n, g.d, vector / np.linalg.norm(vector))


def restrict(p: PauliString, spins: Sequence[int]) -> PauliString:
    """
    p on the listed spins only: unchanged if its support lies inside,
    otherwise its X part (a sigma_y counts as X; Z factors and phase dropped).
    """
    spins = list(spins)
    position = {q: i for i, q in enumerate(spins)}
    if set(p.support) <= set(spins):
        return PauliString(len(spins), p.d, tuple(p.x[q] for q in spins), tuple(p.z[q] for q in spins), p.phase)
    x = {position[q]: p.x[q] for q in p.x_support if q in position}
    return PauliString.from_sites(len(spins), p.d, x=x)


@dataclass(frozen=True, eq=False)
class SubsystemState:
    """Code state of restricted stabilizers; `degenerate` when they leave freedom."""
    state: DenseState
    group: StabilizerGroup
    spins: tuple
    rank: int
    dimension_exponent: int

    @property
    def degenerate(self) -> bool:
        return self.dimension_exponent > 0


def subsystem_state(g: StabilizerGroup, spins: Sequence[int], stabs: Optional[Sequence[int]] = None,
                    require_independent: bool = False, cap: Optional[int] = None) -> SubsystemState:
    """
    Restrict generators to `spins` and return the joint +1 state there.

    Args:
        g: the full group.
        spins: global qudit indices of the subsystem, in subsystem order.
        stabs: generator indices to restrict; defaults to every generator
            touching the subsystem.
        require_independent: raise when the restrictions are dependent.
    """
    spins = [int(q) for q in spins]
    if len(set(spins)) != len(spins) or any(q < 0 or q >= g.n for q in spins):
        raise SubsystemError(f"subsystem spins {spins} must be distinct indices below {g.n}")
    if stabs is None:
        stabs = [j for j, p in enumerate(g.generators) if set(p.support) & set(spins)]
    restricted, labels = [], []
    for j in stabs:
        p = restrict(g.generators[j], spins)
        if p.support:
            restricted.append(p)
            labels.append(g.labels[j])
    for (p, lp), (q, lq) in combinations(zip(restricted, labels), 2):
        if not commutes(p, q):
            raise SubsystemError(f"subsystem not closed: restrictions of {lp} and {lq} do not commute")
    kept = independent_subset(restricted, len(spins), g.d)
    rank = len(kept)
    if require_independent and rank < len(restricted):
        raise SubsystemError(f"restricted rank {rank} is below the {len(restricted)} stabilizers requested", rank)
    group = StabilizerGroup(len(spins), g.d, tuple(restricted[j] for j in kept), tuple(labels[j] for j in kept))
    exponent = len(spins) - rank
    if exponent > 0:
        logger.warning("subsystem of %d spins has restricted rank %d: dimension %d^%d",
                       len(spins), rank, g.d, exponent)
    return SubsystemState(code_state(group, cap), group, tuple(spins), rank, exponent)


def write_dense(path: str, s: DenseState) -> str:
    """'STRB', u32 n, u32 d, u32 reserved, then little-endian (re, im) float64 pairs."""
    with open(path, 'wb') as f:
        f.write(struct.pack('<4sIII', Config.DENSE_MAGIC, s.n, s.d, 0))
        f.write(s.amplitudes.astype('<c16').tobytes())
    return path


def read_dense(path: str) -> DenseState:
    with open(path, 'rb') as f:
        header = f.read(16)
        if len(header) != 16:
            raise FormatError("truncated header", path)
        magic, n, d, _ = struct.unpack('<4sIII', header)
        if magic != Config.DENSE_MAGIC:
            raise FormatError(f"bad magic {magic!r}", path)
        payload = f.read()
    if len(payload) != 16 * d ** n:
        raise FormatError(f"expected {d ** n} amplitudes, found {len(payload) // 16}", path)
    return DenseState(n, d, np.frombuffer(payload, dtype='<c16').astype(np.complex128))
