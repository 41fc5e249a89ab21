import hashlib
import json
import math
import os
from dataclasses import dataclass
from typing import Any, Iterator, List, Optional, Sequence

import numpy as np
import sympy

from src.core.errors import FormatError


@dataclass
class DigitChange:
    """One step of a d-ary reflected Gray code: `position` went from `old` to `new`."""
    position: int
    old: int
    new: int


def gray_digits(rank: int, n: int, d: int) -> List[int]:
    """Configuration at `rank` of the reflected d-ary Gray code (digit 0 most significant)."""
    digits = []
    prefix = 0
    for j in range(n):
        place = d ** (n - 1 - j)
        r = (rank // place) % d
        digits.append(r if prefix % 2 == 0 else d - 1 - r)
        prefix = prefix * d + r
    return digits


def gray_changes(n: int, d: int, start: int = 0, stop: Optional[int] = None) -> Iterator[DigitChange]:
    """
    Iterate the single-digit changes taking rank `start` to rank `stop - 1`.

    Each step changes one digit by +-1; the least significant digit moves
    fastest.
    """
    stop = d ** n if stop is None else stop
    digits = gray_digits(start, n, d)
    direction = []
    for j in range(n):
        prefix = start // d ** (n - j)
        direction.append(1 if prefix % 2 == 0 else -1)
    for _ in range(start + 1, stop):
        j = n - 1
        while True:
            nxt = digits[j] + direction[j]
            if 0 <= nxt < d:
                break
            direction[j] = -direction[j]
            j -= 1
        old = digits[j]
        digits[j] = nxt
        yield DigitChange(position=j, old=old, new=nxt)


def digits_to_index(digits: Sequence[int], d: int) -> int:
    index = 0
    for k in digits:
        index = index * d + int(k)
    return index


def spins_to_indices(v) -> np.ndarray:
    """+1 -> 0, -1 -> 1."""
    return ((1 - np.asarray(v, dtype=np.int64)) // 2).astype(np.int64)


def indices_to_spins(k) -> np.ndarray:
    """0 -> +1, 1 -> -1."""
    return (1 - 2 * np.asarray(k, dtype=np.int64)).astype(np.int64)


def visible_values(k, d: int) -> np.ndarray:
    """Basis indices to the visible values an RBM sees (spins for d=2)."""
    return indices_to_spins(k) if d == 2 else np.asarray(k, dtype=np.int64)


def basis_indices(v, d: int) -> np.ndarray:
    return spins_to_indices(v) if d == 2 else np.asarray(v, dtype=np.int64) % d


def all_indices(n: int, d: int) -> np.ndarray:
    """Every configuration as a (d^n, n) digit array in basis-index order."""
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.indices((d,) * n).reshape(n, -1).T
    return np.ascontiguousarray(grids, dtype=np.int64)


def apply_local(amplitudes: np.ndarray, n: int, d: int, matrix: np.ndarray) -> np.ndarray:
    """Apply the same d x d matrix to every qudit of a row-major state vector."""
    tensor = np.asarray(amplitudes, dtype=np.complex128).reshape((d,) * n)
    for j in range(n):
        tensor = np.moveaxis(np.tensordot(matrix, tensor, axes=([1], [j])), 0, j)
    return tensor.reshape(-1)


def complex_to_json(value: complex) -> List[float]:
    value = complex(value)
    return [value.real, value.imag]


def complex_from_json(pair: Any, location: str) -> complex:
    if (not isinstance(pair, (list, tuple)) or len(pair) != 2
            or not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in pair)):
        raise FormatError("expected a [re, im] pair of numbers", location)
    return complex(float(pair[0]), float(pair[1]))


def sha256_file(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, 'rb') as f:
        for chunk in iter(lambda: f.read(1 << 16), b''):
            digest.update(chunk)
    return digest.hexdigest()


def read_json(path: str) -> Any:
    """Load JSON, turning syntax errors into FormatError with line and column."""
    with open(path, 'r', encoding='utf-8') as f:
        text = f.read()
    return parse_json(text, source=path)


def parse_json(text: str, source: str = '<string>') -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"malformed JSON: {e.msg}", f"{source}:{e.lineno}:{e.colno}") from e


def write_json(path: str, data: Any) -> str:
    """Write with a trailing newline; floats use the shortest round-trip repr."""
    folder = os.path.dirname(os.path.abspath(path))
    os.makedirs(folder, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(data, f, indent=2, ensure_ascii=False)
        f.write('\n')
    return path


def pi_multiple(value: complex, max_denominator: int = 64) -> str:
    """
    Render a parameter as an exact multiple of pi when it is one, e.g.
    -0.785...j -> '-I*pi/4'; anything else falls back to repr.
    """
    value = complex(value)
    parts = []
    for component, unit in ((value.real, 1), (value.imag, sympy.I)):
        if component == 0:
            continue
        ratio = sympy.Rational(component / math.pi).limit_denominator(max_denominator)
        if abs(float(ratio) * math.pi - component) > 1e-12:
            return repr(value)
        parts.append(ratio * sympy.pi * unit)
    if not parts:
        return '0'
    return str(sympy.Add(*parts))
