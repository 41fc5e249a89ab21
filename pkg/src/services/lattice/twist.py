"""
twist.py - Square lattice with a domain wall ending in a twist

The lattice is built on qubits at the corners of square faces. Before the
frame change every face is X on its top-left/bottom-right corners and Z on
the other two; a half row of qubits is inserted between qubit rows R and
R+1 right of column c0, which turns the face at (R, c0) into a pentagon.
Applying Hadamards on one colour class of a two-colouring of the lattice
graph turns bulk faces into pure star (X) or plaquette (Z) operators. The
colouring is cut along a staircase from the twist to the boundary; faces
on the cut keep a mixed Z Z Z X form (the wall) and the pentagon becomes
the twist operator with one sigma_y.
"""
import logging
from typing import Dict, List, Tuple

import networkx as nx

from src.core.errors import ConsistencyError, LatticeSpecError
from src.core.models import LatticeCode, LatticeSpec, PauliString
from src.services.lattice.lattice_codes import _assemble, coordinate_label

logger = logging.getLogger(__name__)

Site = Tuple[str, int]          # ('r', row) for a full row, ('m', 0) for the inserted half row
Qubit = Tuple[Site, int]
Face = List[Tuple[Qubit, str]]


def _q(r: int, c: int) -> Qubit:
    return ('r', r), c


class TwistLayout:
    """Qubits, faces and the wall cut for one twist lattice."""

    def __init__(self, spec: LatticeSpec):
        self.rows, self.cols = spec.rows, spec.cols
        self.R, self.c0 = spec.wall.twist_endpoint
        if not (1 <= self.R <= self.rows - 1 and 1 <= self.c0 <= self.cols - 1):
            raise LatticeSpecError(
                f"twist endpoint {spec.wall.twist_endpoint} touches the boundary; it needs "
                f"1 <= row <= {self.rows - 1} and 1 <= col <= {self.cols - 1}"
            )
        self.mid = ('m', 0)
        self.qubits = [_q(r, c) for r in range(self.rows + 1) for c in range(self.cols + 1)]
        self.qubits += [(self.mid, c) for c in range(self.c0 + 1, self.cols + 1)]

    def coordinate(self, qubit: Qubit) -> Tuple[int, int]:
        (kind, r), c = qubit
        return (2 * self.R + 1, c) if kind == 'm' else (2 * r, c)

    def bulk_faces(self) -> Dict[Tuple[int, int], Face]:
        """Quadrilaterals keyed by the doubled coordinate of their top-left qubit."""
        faces = {}
        for r in range(self.rows):
            for c in range(self.cols):
                if r == self.R and c >= self.c0:
                    continue
                faces[(2 * r, c)] = [(_q(r, c), 'X'), (_q(r, c + 1), 'Z'),
                                     (_q(r + 1, c + 1), 'X'), (_q(r + 1, c), 'Z')]
        for c in range(self.c0 + 1, self.cols):
            faces[(2 * self.R, c)] = [(_q(self.R, c), 'X'), (_q(self.R, c + 1), 'Z'),
                                      ((self.mid, c + 1), 'X'), ((self.mid, c), 'Z')]
            faces[(2 * self.R + 1, c)] = [((self.mid, c), 'X'), ((self.mid, c + 1), 'Z'),
                                          (_q(self.R + 1, c + 1), 'X'), (_q(self.R + 1, c), 'Z')]
        return faces

    def twist_face(self) -> Face:
        R, c0 = self.R, self.c0
        return [(_q(R, c0), 'X'), (_q(R, c0 + 1), 'Z'), ((self.mid, c0 + 1), 'Y'),
                (_q(R + 1, c0 + 1), 'X'), (_q(R + 1, c0), 'Z')]

    def right_column(self) -> List[Qubit]:
        column = [_q(r, self.cols) for r in range(self.R + 1)]
        column.append((self.mid, self.cols))
        column += [_q(r, self.cols) for r in range(self.R + 1, self.rows + 1)]
        return column

    def boundary_faces(self) -> Dict[str, Face]:
        """Outside faces restricted to the lattice, keyed by side and position."""
        faces = {}
        for c in range(self.cols):
            faces[f"top,{c}"] = [(_q(0, c), 'Z'), (_q(0, c + 1), 'X')]
            faces[f"bottom,{c}"] = [(_q(self.rows, c), 'X'), (_q(self.rows, c + 1), 'Z')]
        for r in range(self.rows):
            faces[f"left,{r}"] = [(_q(r, 0), 'Z'), (_q(r + 1, 0), 'X')]
        column = self.right_column()
        for r, (upper, lower) in enumerate(zip(column, column[1:])):
            faces[f"right,{r}"] = [(upper, 'X'), (lower, 'Z')]
        return faces

    def staircase(self) -> Tuple[List[Tuple[int, int]], List[Tuple[Qubit, Qubit]]]:
        """
        Wall faces (top-left qubit, qubit-grid coordinates) and the cut edges,
        starting with the twist face's top side and climbing up-left.
        """
        cut = [(_q(self.R, self.c0), _q(self.R, self.c0 + 1))]
        faces = []
        k = 1
        while True:
            r, c = self.R - 1 - (k - 1) // 2, self.c0 - k // 2
            if r < 0 or c < 0:
                break
            faces.append((r, c))
            if k % 2:
                cut.append((_q(r, c), _q(r + 1, c)))
                if c == 0:
                    break
            else:
                cut.append((_q(r, c), _q(r, c + 1)))
                if r == 0:
                    break
            k += 1
        return faces, cut

    def colouring(self) -> Dict[Qubit, int]:
        """1 marks the qubits that get a Hadamard; the twist's top-left qubit is 1."""
        graph = nx.Graph()
        graph.add_nodes_from(self.qubits)
        for face in list(self.bulk_faces().values()) + [self.twist_face()]:
            ring = [q for q, _ in face]
            graph.add_edges_from(zip(ring, ring[1:] + ring[:1]))
        _, cut = self.staircase()
        graph.remove_edges_from(cut)
        if not nx.is_connected(graph):
            raise ConsistencyError("the cut disconnects the twist lattice")
        colour = nx.bipartite.color(graph)
        if colour[_q(self.R, self.c0)] == 0:
            colour = {q: 1 - h for q, h in colour.items()}
        for u, v in cut:
            if colour[u] != colour[v]:
                raise ConsistencyError(f"cut edge {u}-{v} is not monochromatic")
        return colour


def _frame_change(face: Face, colour: Dict[Qubit, int], index: Dict[Qubit, int], n: int) -> PauliString:
    x, z = {}, {}
    phase = 0
    for qubit, letter in face:
        i = index[qubit]
        if letter == 'Y':
            x[i], z[i] = 1, 1
            # H Y H = -Y
            phase += 1 + 2 * colour[qubit]
            continue
        if colour[qubit]:
            letter = 'Z' if letter == 'X' else 'X'
        (x if letter == 'X' else z)[i] = 1
    return PauliString.from_sites(n, 2, x=x, z=z, phase=phase)


def build_twist(spec: LatticeSpec) -> LatticeCode:
    """
    Build the wall/twist lattice described by `spec.wall`.

    Generators: star/plaquette faces (A/B), pure-X boundary pairs (C),
    wall faces (W) and the twist (Q). Boundary pairs that end up mixed or
    pure Z are left out.
    """
    if spec.wall is None:
        raise LatticeSpecError("build_twist needs a wall")
    if spec.kind != 'planar' or spec.d != 2 or spec.defects:
        raise LatticeSpecError("the twist lattice is a qubit planar patch without defects")
    layout = TwistLayout(spec)
    wall_faces, _ = layout.staircase()
    if spec.wall.path and list(spec.wall.path) != wall_faces:
        raise LatticeSpecError(
            f"wall path {list(spec.wall.path)} does not run from the twist to the boundary; "
            f"expected {wall_faces}"
        )
    colour = layout.colouring()

    by_coordinate = sorted(layout.qubits, key=layout.coordinate)
    coordinates = [layout.coordinate(q) for q in by_coordinate]
    index = {q: i for i, q in enumerate(by_coordinate)}
    n = len(coordinates)
    generators, labels, tags = [], [], []

    wall_keys = {(2 * r, c): k + 1 for k, (r, c) in enumerate(wall_faces)}
    for key, face in sorted(layout.bulk_faces().items()):
        p = _frame_change(face, colour, index, n)
        if key in wall_keys:
            generators.append(p)
            labels.append(f"W_{{{wall_keys[key]}}}")
            tags.append('wall')
        elif p.z_support and p.x_support:
            raise ConsistencyError(f"bulk face at {key} stayed mixed after the frame change")
        else:
            generators.append(p)
            labels.append(coordinate_label('A' if p.x_support else 'B', key))
            tags.append('bulk')

    generators.append(_frame_change(layout.twist_face(), colour, index, n))
    labels.append('Q')
    tags.append('twist')

    for key, face in layout.boundary_faces().items():
        p = _frame_change(face, colour, index, n)
        if p.z_support:
            continue
        generators.append(p)
        labels.append(f"C_{{{key}}}")
        tags.append('boundary')

    code = _assemble(spec, coordinates, generators, labels, tags)
    logger.info("twist at %s, wall of %d faces, subsystem of %d spins",
                spec.wall.twist_endpoint, len(wall_faces), len(wall_subsystem(code)))
    return code


def wall_subsystem(code: LatticeCode) -> List[int]:
    """Spins touched by the wall and twist generators."""
    spins = set()
    for p, tag in zip(code.group.generators, code.tags):
        if tag in ('wall', 'twist'):
            spins.update(p.support)
    return sorted(spins)
