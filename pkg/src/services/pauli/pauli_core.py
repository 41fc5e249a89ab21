"""
pauli_core.py - Generalized Pauli algebra over Z_d in symplectic form

A PauliString is eta^phase * X^x Z^z with eta = exp(i*pi/d) and
omega = eta^2, so Z X = omega X Z. Everything here is integer arithmetic;
complex numbers only appear when a phase is handed back to the caller.
"""
import cmath
import logging
import math
from itertools import combinations
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.core.errors import (
    ConsistencyError, DimensionMismatchError, FormatError, InvalidGroupError, RankUndefinedError,
)
from src.core.models import GroupClass, PauliKind, PauliString, StabilizerGroup
from src.utils.helpers import basis_indices, indices_to_spins

logger = logging.getLogger(__name__)


def _check_compatible(p: PauliString, q: PauliString) -> None:
    if p.n != q.n or p.d != q.d:
        raise DimensionMismatchError(
            f"cannot combine a Pauli on (n={p.n}, d={p.d}) with one on (n={q.n}, d={q.d})"
        )


def eta(d: int, exponent: int) -> complex:
    """exp(i*pi*exponent/d), exact for the d=2 quarter turns."""
    exponent %= 2 * d
    if d == 2:
        return (1, 1j, -1, -1j)[exponent]
    return cmath.exp(1j * math.pi * exponent / d)


def commutation_exponent(p: PauliString, q: PauliString) -> int:
    """c with q.p = omega^c p.q, i.e. <p.x, q.z> - <p.z, q.x> mod d."""
    _check_compatible(p, q)
    value = sum(a * b for a, b in zip(p.x, q.z)) - sum(a * b for a, b in zip(p.z, q.x))
    return value % p.d


def commutes(p: PauliString, q: PauliString) -> bool:
    return commutation_exponent(p, q) == 0


def multiply(p: PauliString, q: PauliString) -> PauliString:
    """Operator product p.q with exact phase."""
    _check_compatible(p, q)
    cross = sum(a * b for a, b in zip(p.z, q.x))
    return PauliString(
        p.n, p.d,
        tuple(a + b for a, b in zip(p.x, q.x)),
        tuple(a + b for a, b in zip(p.z, q.z)),
        p.phase + q.phase + 2 * cross,
    )


def power(p: PauliString, h: int) -> PauliString:
    if h < 0:
        raise ValueError(f"power must be non-negative, got {h}")
    result = PauliString.identity(p.n, p.d)
    for _ in range(h):
        result = multiply(result, p)
    return result


def basis_action_exponent(p: PauliString, k: Sequence[int]) -> Tuple[Tuple[int, ...], int]:
    """For basis digits k: p|k> = eta^e |k'>; returns (k', e)."""
    if len(k) != p.n:
        raise DimensionMismatchError(f"configuration has length {len(k)}, expected {p.n}")
    e = p.phase + 2 * sum(z * int(kj) for z, kj in zip(p.z, k))
    k_new = tuple((int(kj) + x) % p.d for kj, x in zip(k, p.x))
    return k_new, e % (2 * p.d)


def apply_to_basis(p: PauliString, v: Sequence[int]) -> Tuple[np.ndarray, complex]:
    """
    Act with p on a basis configuration.

    Args:
        p: the Pauli string.
        v: spins (+-1) for d=2, digits 0..d-1 otherwise.

    Returns:
        (v', lam) with p|v> = lam |v'>, v' in the same convention as v.
    """
    k = basis_indices(v, p.d)
    if np.any(k < 0) or np.any(k >= p.d):
        raise ValueError(f"configuration entries out of range for d={p.d}: {list(v)}")
    k_new, e = basis_action_exponent(p, k)
    out = indices_to_spins(k_new) if p.d == 2 else np.array(k_new, dtype=np.int64)
    return out, eta(p.d, e)


def kind_of(p: PauliString) -> PauliKind:
    """Which single-qudit Paulis the string uses; Y only exists for d=2."""
    kinds = set()
    for x, z in zip(p.x, p.z):
        if x and z:
            kinds.add(PauliKind.Y if p.d == 2 else PauliKind.MIXED)
        elif x:
            kinds.add(PauliKind.X)
        elif z:
            kinds.add(PauliKind.Z)
    if not kinds:
        return PauliKind.I
    if len(kinds) > 1:
        return PauliKind.MIXED
    return kinds.pop()


_CLASS_BY_KINDS = {
    frozenset(): GroupClass.S_X,
    frozenset({PauliKind.X}): GroupClass.S_X,
    frozenset({PauliKind.Y}): GroupClass.S_Y,
    frozenset({PauliKind.Z}): GroupClass.S_Z,
    frozenset({PauliKind.X, PauliKind.Z}): GroupClass.X_Z,
    frozenset({PauliKind.Y, PauliKind.Z}): GroupClass.Y_Z,
    frozenset({PauliKind.X, PauliKind.Y}): GroupClass.X_Y,
}


def classify(g: StabilizerGroup) -> GroupClass:
    kinds = frozenset(kind_of(p) for p in g.generators) - {PauliKind.I}
    return _CLASS_BY_KINDS.get(kinds, GroupClass.MIXED)


def symplectic_matrix(generators: Sequence[PauliString], n: int) -> np.ndarray:
    """(m, 2n) integer matrix with rows [x | z]."""
    if not generators:
        return np.zeros((0, 2 * n), dtype=np.int64)
    return np.array([list(p.x) + list(p.z) for p in generators], dtype=np.int64)


def is_prime(d: int) -> bool:
    if d < 2:
        return False
    return all(d % f for f in range(2, int(math.isqrt(d)) + 1))


def _unit_pivot(column: np.ndarray, start: int, d: int) -> Optional[int]:
    """Row index >= start whose entry is invertible mod d; raises on a non-unit-only column."""
    nonzero = False
    for r in range(start, column.shape[0]):
        e = int(column[r]) % d
        if e == 0:
            continue
        nonzero = True
        if math.gcd(e, d) == 1:
            return r
    if nonzero:
        raise RankUndefinedError(f"rank undefined over Z_{d}, d composite")
    return None


def row_reduce(matrix: np.ndarray, d: int, columns: Optional[Sequence[int]] = None) -> Tuple[np.ndarray, List[int]]:
    """
    Reduced row echelon form mod d, pivoting over `columns` in order.

    Returns:
        (reduced matrix, pivot column list).
    """
    M = np.array(matrix, dtype=np.int64) % d
    rows = M.shape[0]
    pivots = []
    r = 0
    for c in (range(M.shape[1]) if columns is None else columns):
        if r >= rows:
            break
        pr = _unit_pivot(M[:, c], r, d)
        if pr is None:
            continue
        if pr != r:
            M[[r, pr]] = M[[pr, r]]
        M[r] = (M[r] * pow(int(M[r, c]), -1, d)) % d
        for rr in range(rows):
            if rr != r and M[rr, c]:
                M[rr] = (M[rr] - M[rr, c] * M[r]) % d
        pivots.append(c)
        r += 1
    return M, pivots


def matrix_rank(matrix: np.ndarray, d: int) -> int:
    if matrix.shape[0] == 0:
        return 0
    return len(row_reduce(matrix, d)[1])


def independent_rank(g: StabilizerGroup) -> int:
    return matrix_rank(symplectic_matrix(g.generators, g.n), g.d)


def independent_subset(generators: Sequence[PauliString], n: int, d: int) -> List[int]:
    """Greedy, order-preserving: indices of generators not generated by earlier ones."""
    kept = []
    basis = np.zeros((0, 2 * n), dtype=np.int64)
    rank = 0
    for j, p in enumerate(generators):
        trial = np.vstack([basis, symplectic_matrix([p], n)])
        trial_rank = matrix_rank(trial, d)
        if trial_rank > rank:
            kept.append(j)
            basis = trial
            rank = trial_rank
    return kept


def validate_group(g: StabilizerGroup) -> None:
    """Raise InvalidGroupError unless generators commute pairwise and are independent."""
    for i, j in combinations(range(g.m), 2):
        if not commutes(g.generators[i], g.generators[j]):
            raise InvalidGroupError(
                f"generators {g.labels[i]} and {g.labels[j]} do not commute "
                f"(omega exponent {commutation_exponent(g.generators[i], g.generators[j])})"
            )
    kept = independent_subset(g.generators, g.n, g.d)
    if len(kept) != g.m:
        dependent = next(j for j in range(g.m) if j not in kept)
        raise InvalidGroupError(f"generator {g.labels[dependent]} is a product of earlier generators")


def count_incidence(g: StabilizerGroup, type_filter: Union[PauliKind, str]) -> np.ndarray:
    """Per-qudit count of generators of the given kind acting on it."""
    kind = PauliKind(type_filter) if isinstance(type_filter, str) else type_filter
    counts = np.zeros(g.n, dtype=np.int64)
    for p in g.generators:
        if kind_of(p) is kind:
            for i in p.support:
                counts[i] += 1
    return counts


def diagonal_constraints(g: StabilizerGroup) -> Tuple[np.ndarray, np.ndarray]:
    """
    Linear system A k = r (mod d) satisfied exactly by the basis states
    with nonzero code-space projection. Needs prime d.
    """
    d, n, m = g.d, g.n, g.m
    if not is_prime(d):
        raise RankUndefinedError(f"rank undefined over Z_{d}, d composite")
    if m == 0:
        return np.zeros((0, n), dtype=np.int64), np.zeros(0, dtype=np.int64)
    xs = np.array([p.x for p in g.generators], dtype=np.int64)
    augmented = np.hstack([xs, np.eye(m, dtype=np.int64)])
    reduced, pivots = row_reduce(augmented, d, columns=range(n))
    rows, rhs = [], []
    for row in reduced[len(pivots):]:
        element = PauliString.identity(n, d)
        for j, c in enumerate(row[n:]):
            if c:
                element = multiply(element, power(g.generators[j], int(c)))
        if any(element.x):
            raise ConsistencyError("kernel combination left an X part")
        if element.phase % 2:
            raise ConsistencyError(
                "the group contains a diagonal element with no +1 eigenvalue; it stabilizes nothing"
            )
        rows.append(element.z)
        rhs.append((-(element.phase // 2)) % d)
    return np.array(rows, dtype=np.int64).reshape(-1, n), np.array(rhs, dtype=np.int64)


def is_consistent(A: np.ndarray, r: np.ndarray, d: int) -> bool:
    if A.shape[0] == 0:
        return True
    reduced, _ = row_reduce(np.hstack([A, r.reshape(-1, 1)]), d)
    for row in reduced:
        if not row[:-1].any() and row[-1]:
            return False
    return True


def lexicographic_solution(A: np.ndarray, r: np.ndarray, d: int) -> Optional[np.ndarray]:
    """Smallest digit vector in basis-index order solving A k = r (mod d), or None."""
    n = A.shape[1]
    if not is_consistent(A, r, d):
        return None
    k = np.zeros(n, dtype=np.int64)
    A_rest, r_rest = A.copy(), r.copy()
    for j in range(n):
        for value in range(d):
            r_try = (r_rest - A_rest[:, 0] * value) % d
            if is_consistent(A_rest[:, 1:], r_try, d):
                k[j] = value
                A_rest, r_rest = A_rest[:, 1:], r_try
                break
        else:
            raise ConsistencyError("consistent system lost its solution during back-substitution")
    return k


# sigma_x -> sigma_y, sigma_y -> sigma_z, sigma_z -> sigma_x, as (x, z, eta-exponent) per site
_Y_BASIS_SITE = {(1, 0): (1, 1, 1), (1, 1): (0, 1, -1), (0, 1): (1, 0, 0), (0, 0): (0, 0, 0)}


def to_y_basis(p: PauliString) -> PauliString:
    """The matrix of p in the sigma_y eigenbasis {(1, i)/sqrt2, (1, -i)/sqrt2}."""
    if p.d != 2:
        raise DimensionMismatchError("the sigma_y basis change is defined for d=2 only")
    xs, zs, phase = [], [], p.phase
    for x, z in zip(p.x, p.z):
        nx, nz, e = _Y_BASIS_SITE[(x, z)]
        xs.append(nx)
        zs.append(nz)
        phase += e
    return PauliString(p.n, 2, tuple(xs), tuple(zs), phase)


def group_to_y_basis(g: StabilizerGroup) -> StabilizerGroup:
    return StabilizerGroup(g.n, g.d, tuple(to_y_basis(p) for p in g.generators), g.labels)


def sign_exponent(p: PauliString) -> int:
    """
    Phase of p relative to the plain product of its single-qudit Paulis
    (sigma_y counted as i*X*Z for d=2); 0 means sign +1, d means -1.
    """
    natural = sum(1 for x, z in zip(p.x, p.z) if x and z) if p.d == 2 else 0
    return (p.phase - natural) % (2 * p.d)


def group_to_json(g: StabilizerGroup) -> Dict[str, Any]:
    return {
        'n': g.n,
        'd': g.d,
        'generators': [p.to_dict(label) for p, label in zip(g.generators, g.labels)],
    }


def _int_list(value: Any, length: int, location: str) -> Tuple[int, ...]:
    if not isinstance(value, list) or len(value) != length:
        raise FormatError(f"expected a list of {length} integers", location)
    if not all(isinstance(e, int) and not isinstance(e, bool) for e in value):
        raise FormatError("exponents must be integers", location)
    return tuple(value)


def group_from_json(data: Any, source: str = 'group') -> StabilizerGroup:
    if not isinstance(data, dict):
        raise FormatError("stabilizer group must be a JSON object", source)
    for key in ('n', 'd', 'generators'):
        if key not in data:
            raise FormatError(f"missing field {key!r}", source)
    n, d = data['n'], data['d']
    if not isinstance(n, int) or not isinstance(d, int) or n < 1 or d < 2:
        raise FormatError("n must be >= 1 and d >= 2", source)
    if not isinstance(data['generators'], list):
        raise FormatError("generators must be a list", f"{source}.generators")
    generators, labels = [], []
    for j, entry in enumerate(data['generators']):
        where = f"{source}.generators[{j}]"
        if not isinstance(entry, dict):
            raise FormatError("generator must be an object", where)
        x = _int_list(entry.get('x'), n, f"{where}.x")
        z = _int_list(entry.get('z'), n, f"{where}.z")
        phase = entry.get('phase', 0)
        if not isinstance(phase, int):
            raise FormatError("phase must be an integer", f"{where}.phase")
        generators.append(PauliString(n, d, x, z, phase))
        labels.append(str(entry.get('label', f"T_{j + 1}")))
    return StabilizerGroup(n, d, tuple(generators), tuple(labels))
