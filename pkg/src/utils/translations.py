"""
translations.py - Text notations for Pauli strings
"""

# Supported notations: compact ("X3 Z4^2") and sigma ("σ_x^{34}σ_z^{54}")

import re
from typing import Optional, Sequence, Tuple

from src.core.errors import FormatError
from src.core.models import PauliString

NOTATIONS = {
    'compact': 'Compact (X3 Z4^2)',
    'sigma': 'Sigma with lattice coordinates',
}

# Per-site symbols; (x, z) -> letter for qubits
LETTERS = {
    'compact': {(1, 0): 'X', (0, 1): 'Z', (1, 1): 'Y'},
    'sigma': {(1, 0): 'σ_x', (0, 1): 'σ_z', (1, 1): 'σ_y'},
}

PHASE_PREFIX = {0: '', 1: 'i', 2: '-', 3: '-i'}

_TOKEN = re.compile(r'^([XYZ])(\d+)(?:\^(-?\d+))?$')


def _site_name(i: int, coordinates: Optional[Sequence[Tuple[int, int]]]) -> str:
    if coordinates is None:
        return str(i)
    r, c = coordinates[i]
    return f"{r}{c}" if r < 10 and c < 10 else f"{r},{c}"


def pauli_to_text(p: PauliString, style: str = 'compact',
                  coordinates: Optional[Sequence[Tuple[int, int]]] = None) -> str:
    """
    Render a Pauli string; qubit Y sites print as Y, qudit sites as X^a Z^b.
    The sigma style needs lattice coordinates for its superscripts.
    """
    if style not in NOTATIONS:
        raise ValueError(f"unknown notation {style!r}; choose from {sorted(NOTATIONS)}")
    natural = sum(1 for x, z in zip(p.x, p.z) if x and z) if p.d == 2 else 0
    parts = []
    for i in p.support:
        x, z = p.x[i], p.z[i]
        site = _site_name(i, coordinates)
        if p.d == 2:
            letter = LETTERS[style][(x, z)]
            parts.append(f"{letter}^{{{site}}}" if style == 'sigma' else f"{letter}{site}")
            continue
        for letter, e in (('X', x), ('Z', z)):
            if not e:
                continue
            if style == 'sigma':
                parts.append(f"{letter}^{{{site}}}" + (f"^{e}" if e != 1 else ''))
            else:
                parts.append(f"{letter}{site}" + (f"^{e}" if e != 1 else ''))
    body = ('' if style == 'sigma' else ' ').join(parts) or 'I'
    rel = (p.phase - natural) % (2 * p.d)
    if p.d == 2:
        prefix = PHASE_PREFIX[rel]
    else:
        prefix = f"eta^{rel} " if rel else ''
    return prefix + body


def pauli_from_text(text: str, n: int, d: int = 2) -> PauliString:
    """
    Parse the compact notation, e.g. "-X0 Y1 Z2" or "X0 X1^2" (d=3).
    A leading '-', 'i' or '-i' sets the sign for qubits.
    """
    tokens = text.split()
    phase = 0
    if tokens and tokens[0] in ('-', 'i', '-i', '+'):
        phase = {'+': 0, '-': d, 'i': d // 2, '-i': d + d // 2}[tokens.pop(0)]
        if d != 2 and phase % d:
            raise FormatError("phase prefix 'i' is only defined for qubits", text)
    elif tokens and tokens[0].startswith('-'):
        phase = d
        tokens[0] = tokens[0][1:]
    xs, zs = [0] * n, [0] * n
    for token in tokens:
        if token == 'I':
            continue
        match = _TOKEN.match(token)
        if not match:
            raise FormatError(f"cannot parse Pauli token {token!r}", text)
        letter, index, exponent = match.group(1), int(match.group(2)), int(match.group(3) or 1)
        if index >= n:
            raise FormatError(f"qudit {index} out of range for n={n}", text)
        if letter == 'Y':
            if d != 2:
                raise FormatError("Y is only defined for qubits", text)
            # Y = iXZ; its X moves left past any Z already on the site
            for _ in range(exponent % 2):
                phase += 1 + 2 * zs[index]
                xs[index] += 1
                zs[index] += 1
        elif letter == 'X':
            # X after Z on the same site: move it left past Z
            phase += 2 * zs[index] * exponent
            xs[index] += exponent
        else:
            zs[index] += exponent
    return PauliString(n, d, tuple(xs), tuple(zs), phase)
