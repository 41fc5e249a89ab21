"""
rbm_state.py - RBM amplitudes, enumeration, composition and string operators
"""
import logging
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.core.config import Config, enumeration_cap
from src.core.errors import DimensionMismatchError, EnumerationCapError, FormatError
from src.core.extensions import resolve_workers, worker_pool
from src.core.models import DenseState, RbmState
from src.utils.helpers import (
    all_indices, apply_local, complex_from_json, complex_to_json, digits_to_index, gray_changes, gray_digits,
    read_json, visible_values, write_json,
)

logger = logging.getLogger(__name__)

# inner blocks are evaluated vectorised; the outer digits walk a Gray code
DEFAULT_BLOCK = 4096


def complex_cosh(z: np.ndarray) -> np.ndarray:
    """cosh(x + iy) = cosh(x)cos(y) + i sinh(x)sin(y)."""
    z = np.asarray(z, dtype=np.complex128)
    x, y = z.real, z.imag
    return np.cosh(x) * np.cos(y) + 1j * np.sinh(x) * np.sin(y)


def log_2cosh(z: np.ndarray) -> np.ndarray:
    """log(2 cosh z) without overflow, using cosh(z) = cosh(-z)."""
    z = np.asarray(z, dtype=np.complex128)
    w = np.where(z.real < 0, -z, z)
    return w + np.log1p(np.exp(-2 * w))


def _check_configs(s: RbmState, configs: np.ndarray) -> np.ndarray:
    configs = np.asarray(configs)
    if configs.ndim == 1:
        configs = configs.reshape(1, -1)
    if configs.shape[1] != s.n:
        raise DimensionMismatchError(f"configuration has length {configs.shape[1]}, the RBM has n={s.n}")
    return configs


def amplitude(s: RbmState, v: Sequence[int]) -> complex:
    """Unnormalised Psi(v) = exp(a.v) prod_j 2cosh(b_j + W_j.v)."""
    return complex(amplitudes(s, np.asarray(v).reshape(1, -1))[0])


def amplitudes(s: RbmState, configs: np.ndarray) -> np.ndarray:
    """Naive evaluation of many configurations, one per row."""
    configs = _check_configs(s, configs).astype(np.complex128)
    theta = hidden_activations(s, configs)
    return np.exp(configs @ s.a) * np.prod(2 * complex_cosh(theta), axis=1)


def log_amplitudes(s: RbmState, configs: np.ndarray) -> np.ndarray:
    configs = _check_configs(s, configs).astype(np.complex128)
    theta = hidden_activations(s, configs)
    return configs @ s.a + np.sum(log_2cosh(theta), axis=1)


def hidden_activations(s: RbmState, configs: np.ndarray) -> np.ndarray:
    """theta_j(v) = b_j + sum_i W_ji v_i for every row of `configs`."""
    configs = _check_configs(s, configs).astype(np.complex128)
    return configs @ s.W.T + s.b


def check_cap(n: int, d: int, cap: Optional[int] = None) -> int:
    total = d ** n
    cap = enumeration_cap() if cap is None else cap
    if total > cap:
        raise EnumerationCapError(total, cap)
    return total


def full_state(s: RbmState, method: str = 'gray', cap: Optional[int] = None,
               workers: Optional[int] = None, block_digits: Optional[int] = None) -> DenseState:
    """
    Every amplitude in basis-index order.

    The 'gray' method walks the leading digits in reflected Gray-code order,
    updating the hidden pre-activations and the visible sum by one column
    per step, and evaluates the trailing `block_digits` digits as a
    vectorised block. Segments of the Gray walk run on separate workers,
    each seeded from its own first configuration.
    """
    n, d = s.n, s.d
    total = check_cap(n, d, cap)
    if method == 'naive':
        return DenseState(n, d, amplitudes(s, visible_values(all_indices(n, d), d)))
    if method != 'gray':
        raise ValueError(f"method must be 'gray' or 'naive', got {method!r}")

    if block_digits is None:
        block_digits = 0
        while block_digits < n and d ** (block_digits + 1) <= DEFAULT_BLOCK:
            block_digits += 1
    inner = min(max(block_digits, 0), n)
    outer = n - inner
    block = d ** inner

    inner_v = visible_values(all_indices(inner, d), d).astype(np.complex128)
    theta_inner = inner_v @ s.W[:, outer:].T
    visible_inner = inner_v @ s.a[outer:]
    W_outer, a_outer = s.W[:, :outer], s.a[:outer]
    values = visible_values(np.arange(d), d)
    out = np.empty(total, dtype=np.complex128)

    def write(index: int, theta: np.ndarray, visible: complex) -> None:
        out[index * block:(index + 1) * block] = (
            np.exp(visible + visible_inner) * np.prod(2 * complex_cosh(theta + theta_inner), axis=1)
        )

    def run(start: int, stop: int) -> None:
        digits = gray_digits(start, outer, d)
        v = values[digits].astype(np.complex128) if outer else np.zeros(0, dtype=np.complex128)
        theta = s.b + W_outer @ v
        visible = complex(a_outer @ v)
        index = digits_to_index(digits, d)
        write(index, theta, visible)
        for change in gray_changes(outer, d, start, stop):
            delta = values[change.new] - values[change.old]
            theta = theta + W_outer[:, change.position] * delta
            visible += a_outer[change.position] * delta
            index += (change.new - change.old) * d ** (outer - 1 - change.position)
            write(index, theta, visible)

    steps = d ** outer
    chunks = min(resolve_workers(workers), steps)
    bounds = [steps * c // chunks for c in range(chunks + 1)]
    if chunks == 1:
        run(0, steps)
    else:
        with worker_pool(chunks) as pool:
            for future in [pool.submit(run, lo, hi) for lo, hi in zip(bounds, bounds[1:])]:
                future.result()
    return DenseState(n, d, out)


# rows are <b_v| for the sigma_y eigenbasis b_0 = (1, i)/sqrt2, b_1 = (1, -i)/sqrt2
Y_BASIS = np.array([[1, -1j], [1, 1j]], dtype=np.complex128) / np.sqrt(2)


def to_computational_basis(state: DenseState, basis: str) -> DenseState:
    """Undo the sigma_y basis change of a y-basis network's enumerated state."""
    if basis == 'z':
        return state
    if basis != 'y' or state.d != 2:
        raise DimensionMismatchError(f"cannot leave basis {basis!r} for d={state.d}")
    return DenseState(state.n, 2, apply_local(state.amplitudes, state.n, 2, Y_BASIS.conj().T))


def append_hidden(s: RbmState, b: complex, weights: np.ndarray, label: Optional[str] = None) -> RbmState:
    weights = np.asarray(weights, dtype=np.complex128).reshape(1, s.n)
    labels = s.hidden_labels
    if labels or label is not None:
        labels = (labels or tuple(f"h_{j}" for j in range(s.m))) + (label or f"h_{s.m}",)
    return RbmState(s.a, np.append(s.b, b), np.vstack([s.W, weights]), s.d, labels, s.basis)


def compose(parts: Sequence[Tuple[RbmState, Sequence[int]]], n: Optional[int] = None) -> RbmState:
    """
    Product of part wavefunctions on a global visible set.

    Args:
        parts: (rbm, embedding) pairs; embedding[i] is the global index of
            the part's visible unit i. Parts may share visible units.
        n: global visible count (defaults to the largest index + 1).
    """
    if not parts:
        raise ValueError("compose needs at least one part")
    d, basis = parts[0][0].d, parts[0][0].basis
    embeddings = []
    for s, embedding in parts:
        embedding = [int(i) for i in embedding]
        if s.d != d or s.basis != basis:
            raise DimensionMismatchError("composed parts must share d and basis")
        if len(embedding) != s.n:
            raise DimensionMismatchError(f"embedding of length {len(embedding)} for a part with n={s.n}")
        if len(set(embedding)) != len(embedding):
            raise ValueError(f"embedding {embedding} repeats a visible unit")
        embeddings.append(embedding)
    n = n if n is not None else max(max(e) for e in embeddings if e) + 1
    a = np.zeros(n, dtype=np.complex128)
    b, rows, labels = [], [], []
    for (s, _), embedding in zip(parts, embeddings):
        if any(i < 0 or i >= n for i in embedding):
            raise IndexError(f"embedding {embedding} has an index outside 0..{n - 1}")
        np.add.at(a, embedding, s.a)
        W = np.zeros((s.m, n), dtype=np.complex128)
        W[:, embedding] = s.W
        rows.append(W)
        b.append(s.b)
        labels.extend(s.hidden_labels or [f"h_{len(labels) + j}" for j in range(s.m)])
    return RbmState(a, np.concatenate(b), np.vstack(rows), d, tuple(labels), basis)


def _check_path(s: RbmState, path: Sequence[int]) -> List[int]:
    if s.d != 2:
        raise DimensionMismatchError("string operators are defined for qubits (d=2)")
    path = [int(j) for j in path]
    for j in path:
        if j < 0 or j >= s.n:
            raise IndexError(f"qudit {j} out of range for n={s.n}")
    return path


def apply_string_z(s: RbmState, path: Sequence[int]) -> RbmState:
    """One hidden unit per path qubit with b = -i*pi/2, W = i*pi/2; 2cosh gives 2*v_j."""
    path = _check_path(s, path)
    for j in path:
        row = np.zeros(s.n, dtype=np.complex128)
        row[j] = 0.5j * np.pi
        s = append_hidden(s, -0.5j * np.pi, row, f"S^z_{j}")
    return s


def apply_string_x(s: RbmState, path: Sequence[int]) -> RbmState:
    """Negate every parameter touching the path qubits: Psi'(v) = Psi(v with v_j flipped)."""
    path = _check_path(s, path)
    if not path:
        return s
    a, W = s.a.copy(), s.W.copy()
    for j in path:
        a[j] = -a[j]
        W[:, j] = -W[:, j]
    return RbmState(a, s.b, W, s.d, s.hidden_labels, s.basis)


def to_json(s: RbmState) -> Dict[str, Any]:
    return {
        'version': Config.RBM_FORMAT,
        'n': s.n,
        'm': s.m,
        'd': s.d,
        'basis': s.basis,
        'a': [complex_to_json(v) for v in s.a],
        'b': [complex_to_json(v) for v in s.b],
        'W': [[complex_to_json(v) for v in row] for row in s.W],
        'hidden_labels': list(s.hidden_labels),
    }


def from_json(data: Any, source: str = 'rbm') -> RbmState:
    if not isinstance(data, dict):
        raise FormatError("RBM must be a JSON object", source)
    if data.get('version') != Config.RBM_FORMAT:
        raise FormatError(f"version must be {Config.RBM_FORMAT!r}, got {data.get('version')!r}", f"{source}.version")
    for key in ('n', 'm', 'd', 'a', 'b', 'W'):
        if key not in data:
            raise FormatError(f"missing field {key!r}", source)
    n, m, d = data['n'], data['m'], data['d']
    if not all(isinstance(v, int) and not isinstance(v, bool) for v in (n, m, d)) or n < 0 or m < 0 or d < 2:
        raise FormatError("n, m must be non-negative integers and d >= 2", source)
    if not isinstance(data['a'], list) or len(data['a']) != n:
        raise FormatError(f"a must hold {n} entries", f"{source}.a")
    if not isinstance(data['b'], list) or len(data['b']) != m:
        raise FormatError(f"b must hold {m} entries", f"{source}.b")
    if not isinstance(data['W'], list) or len(data['W']) != m:
        raise FormatError(f"W must hold {m} rows", f"{source}.W")
    a = [complex_from_json(v, f"{source}.a[{i}]") for i, v in enumerate(data['a'])]
    b = [complex_from_json(v, f"{source}.b[{j}]") for j, v in enumerate(data['b'])]
    W = []
    for j, row in enumerate(data['W']):
        if not isinstance(row, list) or len(row) != n:
            raise FormatError(f"row must hold {n} entries", f"{source}.W[{j}]")
        W.append([complex_from_json(v, f"{source}.W[{j}][{i}]") for i, v in enumerate(row)])
    labels = tuple(str(label) for label in data.get('hidden_labels', []))
    if labels and len(labels) != m:
        raise FormatError(f"hidden_labels must hold {m} entries", f"{source}.hidden_labels")
    basis = data.get('basis', 'z')
    if basis not in ('z', 'y'):
        raise FormatError("basis must be 'z' or 'y'", f"{source}.basis")
    return RbmState(np.array(a, dtype=np.complex128), np.array(b, dtype=np.complex128),
                    np.array(W, dtype=np.complex128).reshape(m, n), d, labels, basis)


def save(path: str, s: RbmState) -> str:
    return write_json(path, to_json(s))


def load(path: str) -> RbmState:
    return from_json(read_json(path), source=path)
