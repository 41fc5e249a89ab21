"""
lattice_codes.py - Surface-code builders on the square lattice

Coordinates follow the usual doubled-lattice convention: vertices at
(even, even), plaquettes at (odd, odd), edges (qudits) where the parities
differ. Qudits are indexed row-major over their coordinates.
"""
import logging
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import networkx as nx

from src.core.errors import LatticeSpecError
from src.core.models import (
    Boundary, DefectSpec, LatticeCode, LatticeSpec, PauliString, StabilizerGroup, WallSpec,
)
from src.services.pauli.pauli_core import independent_subset, validate_group
from src.utils.translations import pauli_to_text

logger = logging.getLogger(__name__)

Coord = Tuple[int, int]

STAR_LABELS = {4: 'A', 3: 'D', 2: 'C'}
PLAQUETTE_LABELS = {4: 'B', 3: 'F', 2: 'E'}
WEIGHT_TAGS = {4: 'bulk', 3: 'boundary', 2: 'corner'}


def coordinate_label(prefix: str, coord: Coord) -> str:
    """'A_{44}' style, with a comma once a coordinate reaches two digits."""
    i, j = coord
    inner = f"{i}{j}" if i < 10 and j < 10 else f"{i},{j}"
    return f"{prefix}_{{{inner}}}"


class SquareGeometry:
    """Edges, star supports and plaquette supports of one square lattice."""

    def __init__(self, spec: LatticeSpec):
        self.spec = spec
        self.height = 2 * spec.rows
        self.width = 2 * spec.cols
        self.torus = spec.kind == 'torus'
        self.crossed: List[Coord] = []
        self.edges = set(self._initial_edges())
        self.vertices = set(self._initial_vertices())
        self.faces = {(i, j) for i in range(1, self.height, 2) for j in range(1, self.width, 2)}
        for defect in spec.defects:
            self._carve(defect)

    def _in_range(self, i: int, j: int) -> bool:
        if self.torus:
            return 0 <= i < self.height and 0 <= j < self.width
        return 0 <= i <= self.height and 0 <= j <= self.width

    def wrap(self, i: int, j: int) -> Optional[Coord]:
        if self.torus:
            return i % self.height, j % self.width
        return (i, j) if self._in_range(i, j) else None

    def _on_rough_line(self, i: int, j: int) -> bool:
        if self.torus:
            return False
        b = self.spec.boundary
        return ((i == 0 and b.top == 'rough') or (i == self.height and b.bottom == 'rough')
                or (j == 0 and b.left == 'rough') or (j == self.width and b.right == 'rough'))

    def _grid(self):
        top_i = self.height if self.torus else self.height + 1
        top_j = self.width if self.torus else self.width + 1
        for i in range(top_i):
            for j in range(top_j):
                yield i, j

    def _initial_edges(self):
        for i, j in self._grid():
            if (i + j) % 2 == 1 and not self._on_rough_line(i, j):
                yield i, j

    def _initial_vertices(self):
        for i, j in self._grid():
            if i % 2 == 0 and j % 2 == 0 and not self._on_rough_line(i, j):
                yield i, j

    def _carve(self, defect: DefectSpec) -> None:
        pr0, pc0, pr1, pc1 = defect.perimeter_box
        r0, c0, r1, c1 = defect.region
        self.faces -= {(i, j) for i in range(r0, r1 + 1, 2) for j in range(c0, c1 + 1, 2)}
        if defect.type == 'smooth':
            self.edges = {e for e in self.edges if not (pr0 < e[0] < pr1 and pc0 < e[1] < pc1)}
            self.vertices = {v for v in self.vertices if not (pr0 < v[0] < pr1 and pc0 < v[1] < pc1)}
            corners = [(pr0, pc0), (pr0, pc1), (pr1, pc0), (pr1, pc1)]
            self.vertices -= set(corners)
            self.crossed.extend(corners)
        else:
            self.edges = {e for e in self.edges if not (pr0 <= e[0] <= pr1 and pc0 <= e[1] <= pc1)}
            perimeter = sorted(v for v in self.vertices
                               if pr0 <= v[0] <= pr1 and pc0 <= v[1] <= pc1
                               and (v[0] in (pr0, pr1) or v[1] in (pc0, pc1)))
            self.vertices = {v for v in self.vertices if not (pr0 <= v[0] <= pr1 and pc0 <= v[1] <= pc1)}
            self.crossed.extend(perimeter)

    def neighbours(self, coord: Coord) -> List[Coord]:
        """Up, down, left, right; the order the operator tables are written in."""
        i, j = coord
        out = []
        for di, dj in ((-1, 0), (1, 0), (0, -1), (0, 1)):
            c = self.wrap(i + di, j + dj)
            if c is not None:
                out.append(c)
        return out

    def star(self, vertex: Coord) -> List[Coord]:
        return [e for e in self.neighbours(vertex) if e in self.edges]

    def boundary_of(self, face: Coord) -> List[Coord]:
        return [e for e in self.neighbours(face) if e in self.edges]

    def coordinates(self) -> Tuple[Coord, ...]:
        return tuple(sorted(self.edges))

    def endpoints(self, edge: Coord, dual: bool = False) -> Tuple[Optional[Coord], Optional[Coord]]:
        """Vertices joined by an edge, or the faces it separates when dual."""
        i, j = edge
        horizontal = i % 2 == 0
        if horizontal != dual:
            return self.wrap(i, j - 1), self.wrap(i, j + 1)
        return self.wrap(i - 1, j), self.wrap(i + 1, j)


def _check_defects(spec: LatticeSpec) -> None:
    height, width = 2 * spec.rows, 2 * spec.cols
    boxes = []
    for defect in spec.defects:
        pr0, pc0, pr1, pc1 = defect.perimeter_box
        if not (0 < pr0 and pr1 < height and 0 < pc0 and pc1 < width):
            raise LatticeSpecError(f"defect {defect.region} must lie strictly inside the {spec.rows}x{spec.cols} lattice")
        for other in boxes:
            if not (pr1 < other[0] or other[2] < pr0 or pc1 < other[1] or other[3] < pc0):
                raise LatticeSpecError(f"overlapping defects: {defect.region} touches {other}")
        boxes.append((pr0, pc0, pr1, pc1))


def _assemble(spec: LatticeSpec, coordinates: Sequence[Coord], generators: List[PauliString],
              labels: List[str], tags: List[str], crossed: Sequence[Coord] = (),
              signs: Optional[Dict[str, Dict[int, int]]] = None) -> LatticeCode:
    """Split off dependent generators, validate, and package the code."""
    n, d = len(coordinates), spec.d
    kept = independent_subset(generators, n, d)
    dropped = [j for j in range(len(generators)) if j not in kept]
    group = StabilizerGroup(n, d, tuple(generators[j] for j in kept), tuple(labels[j] for j in kept))
    validate_group(group)
    if dropped:
        logger.info("dropped dependent generators %s", ', '.join(labels[j] for j in dropped))
    code = LatticeCode(
        spec=spec,
        coordinates=tuple(coordinates),
        group=group,
        tags=tuple(tags[j] for j in kept),
        redundant=tuple(generators[j] for j in dropped),
        redundant_labels=tuple(labels[j] for j in dropped),
        redundant_tags=tuple(tags[j] for j in dropped),
        crossed=tuple(crossed),
        signs=signs or {},
    )
    logger.info("built %s %dx%d lattice: n=%d, m=%d, k=%d",
                spec.kind, spec.rows, spec.cols, n, group.m, group.k)
    return code


def _square_code(spec: LatticeSpec) -> LatticeCode:
    geometry = SquareGeometry(spec)
    coordinates = geometry.coordinates()
    index = {c: i for i, c in enumerate(coordinates)}
    n = len(coordinates)
    generators, labels, tags = [], [], []

    for vertex in sorted(geometry.vertices):
        support = geometry.star(vertex)
        if not support:
            continue
        if len(support) == 1:
            raise LatticeSpecError(f"vertex {vertex} keeps a single edge; check the boundary tags")
        generators.append(PauliString.from_sites(n, 2, x={index[e]: 1 for e in support}))
        labels.append(coordinate_label(STAR_LABELS[len(support)], vertex))
        tags.append(WEIGHT_TAGS[len(support)])

    for face in sorted(geometry.faces):
        support = geometry.boundary_of(face)
        if len(support) < 2:
            raise LatticeSpecError(f"plaquette {face} keeps fewer than two edges")
        generators.append(PauliString.from_sites(n, 2, z={index[e]: 1 for e in support}))
        labels.append(coordinate_label(PLAQUETTE_LABELS[len(support)], face))
        tags.append(WEIGHT_TAGS[len(support)])

    return _assemble(spec, coordinates, generators, labels, tags, crossed=geometry.crossed)


def build_toric(rows: int, cols: int) -> LatticeCode:
    """Toric code on a rows x cols torus: 2*rows*cols qubits, k=2."""
    if rows < 2 or cols < 2:
        raise LatticeSpecError(f"a torus needs rows, cols >= 2, got {rows}x{cols}")
    return _square_code(LatticeSpec('torus', rows, cols))


def build_planar(spec: LatticeSpec) -> LatticeCode:
    """
    Planar code with per-side smooth/rough boundaries.

    A rough side owns its boundary line: edges and vertices on it are
    removed, so where it meets a smooth side the corner vertex carries no
    operator and the corner plaquette is truncated.
    """
    if spec.kind != 'planar':
        raise LatticeSpecError(f"build_planar needs a planar spec, got {spec.kind!r}")
    if spec.d != 2 or spec.wall is not None:
        raise LatticeSpecError("build_planar handles qubit lattices without walls")
    _check_defects(spec)
    return _square_code(spec)


def build_defect(spec: LatticeSpec) -> LatticeCode:
    """Torus or planar lattice with rectangular smooth/rough holes."""
    if not spec.defects:
        raise LatticeSpecError("build_defect needs at least one defect")
    if spec.d != 2 or spec.wall is not None:
        raise LatticeSpecError("defects are supported on qubit lattices without walls")
    if spec.kind == 'torus' and (spec.rows < 2 or spec.cols < 2):
        raise LatticeSpecError(f"a torus needs rows, cols >= 2, got {spec.rows}x{spec.cols}")
    _check_defects(spec)
    return _square_code(spec)


def build_zd(rows: int, cols: int, d: int) -> LatticeCode:
    """
    D(Z_d) model on a torus. Vertical edges point up and horizontal edges
    point right; A_s = X_right X_top X_left^-1 X_bottom^-1 and
    B_p = Z_bottom Z_right Z_top^-1 Z_left^-1. The per-edge signs of each
    plaquette are recorded in `signs`.
    """
    if d < 2:
        raise LatticeSpecError(f"local dimension must be >= 2, got {d}")
    if rows < 2 or cols < 2:
        raise LatticeSpecError(f"a torus needs rows, cols >= 2, got {rows}x{cols}")
    spec = LatticeSpec('torus', rows, cols, d=d)
    geometry = SquareGeometry(spec)
    coordinates = geometry.coordinates()
    index = {c: i for i, c in enumerate(coordinates)}
    n = len(coordinates)
    generators, labels, tags = [], [], []
    signs: Dict[str, Dict[int, int]] = {}

    for (i, j) in sorted(geometry.vertices):
        right, top = geometry.wrap(i, j + 1), geometry.wrap(i - 1, j)
        left, bottom = geometry.wrap(i, j - 1), geometry.wrap(i + 1, j)
        x = {index[right]: 1, index[top]: 1, index[left]: -1, index[bottom]: -1}
        generators.append(PauliString.from_sites(n, d, x=x))
        labels.append(coordinate_label('A', (i, j)))
        tags.append('bulk')

    for (i, j) in sorted(geometry.faces):
        bottom, right = geometry.wrap(i + 1, j), geometry.wrap(i, j + 1)
        top, left = geometry.wrap(i - 1, j), geometry.wrap(i, j - 1)
        face_signs = {index[bottom]: 1, index[right]: 1, index[top]: -1, index[left]: -1}
        label = coordinate_label('B', (i, j))
        generators.append(PauliString.from_sites(n, d, z=face_signs))
        labels.append(label)
        tags.append('bulk')
        signs[label] = face_signs

    return _assemble(spec, coordinates, generators, labels, tags, signs=signs)


def build_shor() -> StabilizerGroup:
    """Shor's [[9,1,3]] code, T_1..T_8 on qubits 0..8."""
    n = 9
    z_pairs = {1: (0, 1), 2: (1, 2), 4: (3, 4), 5: (4, 5), 7: (6, 7), 8: (7, 8)}
    x_blocks = {3: range(0, 6), 6: range(3, 9)}
    generators = []
    for t in range(1, 9):
        if t in z_pairs:
            generators.append(PauliString.from_sites(n, 2, z={q: 1 for q in z_pairs[t]}))
        else:
            generators.append(PauliString.from_sites(n, 2, x={q: 1 for q in x_blocks[t]}))
    group = StabilizerGroup(n, 2, tuple(generators), tuple(f"T_{t}" for t in range(1, 9)))
    validate_group(group)
    return group


def build(spec: LatticeSpec) -> LatticeCode:
    """Dispatch a spec to the matching builder."""
    if spec.wall is not None:
        from src.services.lattice.twist import build_twist
        return build_twist(spec)
    if spec.defects:
        return build_defect(spec)
    if spec.kind == 'torus':
        return build_zd(spec.rows, spec.cols, spec.d) if spec.d > 2 else build_toric(spec.rows, spec.cols)
    return build_planar(spec)


# presets
def _size(token: Optional[str], default: Tuple[int, int]) -> Tuple[int, int]:
    if token is None:
        return default
    try:
        r, c = token.lower().split('x')
        return int(r), int(c)
    except ValueError:
        raise LatticeSpecError(f"size must look like 4x4, got {token!r}") from None


def preset_spec(text: str) -> Union[LatticeSpec, str]:
    """
    Parse a preset such as 'toric 2x2', 'planar-mixed 4x4', 'zd 2x2 3'.
    Returns 'shor' for the Shor code, which has no lattice.
    """
    tokens = text.split()
    if not tokens:
        raise LatticeSpecError("empty preset")
    name, args = tokens[0].lower(), tokens[1:]
    size = args[0] if args else None
    if name == 'shor':
        return 'shor'
    if name == 'toric':
        rows, cols = _size(size, (2, 2))
        return LatticeSpec('torus', rows, cols)
    if name == 'zd':
        rows, cols = _size(size, (2, 2))
        d = int(args[1]) if len(args) > 1 else 3
        return LatticeSpec('torus', rows, cols, d=d)
    if name in ('planar-smooth', 'planar-rough'):
        rows, cols = _size(size, (4, 4))
        return LatticeSpec('planar', rows, cols, Boundary.uniform(name.split('-')[1]))
    if name == 'planar-mixed':
        rows, cols = _size(size, (4, 4))
        return LatticeSpec('planar', rows, cols, Boundary(top='smooth', left='smooth', bottom='rough', right='rough'))
    if name in ('defect-smooth', 'defect-rough'):
        rows, cols = _size(size, (4, 4))
        return LatticeSpec('torus', rows, cols, defects=(DefectSpec(name.split('-')[1], (3, 3, 5, 5)),))
    if name == 'twist':
        rows, cols = _size(size, (3, 3))
        return LatticeSpec('planar', rows, cols, wall=WallSpec(twist_endpoint=(2, 2)))
    raise LatticeSpecError(
        f"unknown preset {name!r}; choose from toric, shor, planar-smooth, planar-rough, "
        "planar-mixed, defect-smooth, defect-rough, twist, zd"
    )


def build_preset(text: str) -> Union[LatticeCode, StabilizerGroup]:
    spec = preset_spec(text)
    return build_shor() if spec == 'shor' else build(spec)


def string_path(code: LatticeCode, kind: str, start: Union[Coord, str], end: Union[Coord, str]) -> List[int]:
    """
    Qudits along a shortest string between two lattice sites.

    kind 'z' walks the primal lattice between vertices; kind 'x' walks the
    dual lattice between plaquettes, where 'boundary' stands for the
    outside of a planar patch.
    """
    if kind not in ('z', 'x'):
        raise ValueError(f"string kind must be 'z' or 'x', got {kind!r}")
    if code.spec.wall is not None or code.spec.d != 2:
        raise LatticeSpecError("string paths are defined on qubit square lattices")
    geometry = SquareGeometry(code.spec)
    index = code.edge_index
    graph = nx.MultiGraph()
    for edge in code.coordinates:
        u, v = geometry.endpoints(edge, dual=(kind == 'x'))
        graph.add_edge(u if u is not None else 'boundary', v if v is not None else 'boundary', key=index[edge])
    start = tuple(start) if not isinstance(start, str) else start
    end = tuple(end) if not isinstance(end, str) else end
    try:
        nodes = nx.shortest_path(graph, start, end)
    except (nx.NodeNotFound, nx.NetworkXNoPath) as e:
        raise LatticeSpecError(f"no {kind}-string from {start} to {end}: {e}") from None
    path = []
    for u, v in zip(nodes, nodes[1:]):
        path.append(min(graph[u][v]))
    return path


def lattice_spec_to_json(spec: LatticeSpec) -> Dict[str, Any]:
    data: Dict[str, Any] = {
        'kind': spec.kind,
        'rows': spec.rows,
        'cols': spec.cols,
        'boundary': {side: getattr(spec.boundary, side) for side in ('top', 'right', 'bottom', 'left')},
        'defects': [{'type': df.type, 'region': list(df.region)} for df in spec.defects],
        'd': spec.d,
    }
    if spec.wall is not None:
        data['wall'] = {'twist_endpoint': list(spec.wall.twist_endpoint),
                        'path': [list(p) for p in spec.wall.path]}
    return data


def lattice_spec_from_json(data: Any) -> LatticeSpec:
    if not isinstance(data, dict):
        raise LatticeSpecError("lattice spec must be a JSON object")
    try:
        boundary = Boundary(**data.get('boundary', {}))
        defects = tuple(DefectSpec(df['type'], tuple(df['region'])) for df in data.get('defects', []))
        wall = None
        if data.get('wall'):
            wall = WallSpec(tuple(data['wall']['twist_endpoint']),
                            tuple(tuple(p) for p in data['wall'].get('path', [])))
        return LatticeSpec(data['kind'], int(data['rows']), int(data['cols']),
                           boundary, defects, wall, int(data.get('d', 2)))
    except (KeyError, TypeError) as e:
        raise LatticeSpecError(f"invalid lattice spec: {e}") from None


def geometry_to_json(code: LatticeCode) -> Dict[str, Any]:
    group = code.geometric_group()
    tags = code.geometric_tags()
    independent = set(range(code.group.m))
    generators = []
    for j, (p, label) in enumerate(zip(group.generators, group.labels)):
        generators.append({
            'label': label,
            'tag': tags[j],
            'support': list(p.support),
            'operator': pauli_to_text(p, 'sigma', code.coordinates),
            'independent': j in independent,
        })
    data = {
        'spec': lattice_spec_to_json(code.spec),
        'coordinates': [list(c) for c in code.coordinates],
        'generators': generators,
        'crossed': [list(c) for c in code.crossed],
    }
    if code.signs:
        data['signs'] = {label: {str(q): s for q, s in face.items()} for label, face in code.signs.items()}
    if code.spec.wall is not None:
        from src.services.lattice.twist import wall_subsystem
        data['wall_subsystem'] = wall_subsystem(code)
    return data
