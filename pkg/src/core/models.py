"""
models.py - Domain dataclasses for stabrbm
"""
from dataclasses import dataclass, field, asdict
from enum import Enum
from typing import Dict, Any, Optional, List, Tuple, Mapping

import numpy as np

from src.core.errors import DimensionMismatchError, LatticeSpecError


class PauliKind(Enum):
    """Single-generator type: which single-qudit Paulis occur in it."""
    I = 'I'
    X = 'X'
    Y = 'Y'
    Z = 'Z'
    MIXED = 'MIXED'


class GroupClass(Enum):
    """Composability class of a generator set."""
    S_X = 'S_X'
    S_Y = 'S_Y'
    S_Z = 'S_Z'
    X_Z = 'X⊔Z'
    Y_Z = 'Y⊔Z'
    X_Y = 'X⊔Y'
    MIXED = 'MIXED'

    @property
    def composable(self) -> bool:
        return self is not GroupClass.MIXED


@dataclass(frozen=True)
class PauliString:
    """
    eta^phase * prod_j X_j^x_j Z_j^z_j with eta = exp(i*pi/d).

    Exponents live in Z_d and the phase in Z_2d, so all algebra is exact.
    For d=2, sigma_y is (x=1, z=1, phase=1).
    """
    n: int
    d: int
    x: Tuple[int, ...]
    z: Tuple[int, ...]
    phase: int = 0

    def __post_init__(self):
        if self.d < 2:
            raise ValueError(f"local dimension must be >= 2, got {self.d}")
        if len(self.x) != self.n or len(self.z) != self.n:
            raise DimensionMismatchError(
                f"exponent vectors must have length n={self.n}, "
                f"got {len(self.x)} and {len(self.z)}"
            )
        object.__setattr__(self, 'x', tuple(int(e) % self.d for e in self.x))
        object.__setattr__(self, 'z', tuple(int(e) % self.d for e in self.z))
        object.__setattr__(self, 'phase', int(self.phase) % (2 * self.d))

    @classmethod
    def identity(cls, n: int, d: int = 2) -> 'PauliString':
        return cls(n, d, (0,) * n, (0,) * n, 0)

    @classmethod
    def from_sites(cls, n: int, d: int = 2, x: Optional[Mapping[int, int]] = None,
                   z: Optional[Mapping[int, int]] = None, phase: int = 0) -> 'PauliString':
        """Build from sparse {qudit: exponent} maps."""
        xs = [0] * n
        zs = [0] * n
        for i, e in (x or {}).items():
            xs[i] = e
        for i, e in (z or {}).items():
            zs[i] = e
        return cls(n, d, tuple(xs), tuple(zs), phase)

    @property
    def support(self) -> Tuple[int, ...]:
        return tuple(i for i in range(self.n) if self.x[i] or self.z[i])

    @property
    def weight(self) -> int:
        return len(self.support)

    @property
    def x_support(self) -> Tuple[int, ...]:
        return tuple(i for i in range(self.n) if self.x[i])

    @property
    def z_support(self) -> Tuple[int, ...]:
        return tuple(i for i in range(self.n) if self.z[i])

    def to_dict(self, label: Optional[str] = None) -> Dict[str, Any]:
        data = {'x': list(self.x), 'z': list(self.z), 'phase': self.phase}
        if label is not None:
            data['label'] = label
        return data


@dataclass(frozen=True)
class StabilizerGroup:
    """Ordered generator list over n qudits; labels default to T_1..T_m."""
    n: int
    d: int
    generators: Tuple[PauliString, ...]
    labels: Tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'generators', tuple(self.generators))
        for j, g in enumerate(self.generators):
            if g.n != self.n or g.d != self.d:
                raise DimensionMismatchError(
                    f"generator {j} acts on n={g.n}, d={g.d}; group has n={self.n}, d={self.d}"
                )
        labels = tuple(self.labels)
        if not labels:
            labels = tuple(f"T_{j + 1}" for j in range(len(self.generators)))
        if len(labels) != len(self.generators):
            raise ValueError(f"{len(labels)} labels given for {len(self.generators)} generators")
        object.__setattr__(self, 'labels', labels)

    @property
    def m(self) -> int:
        return len(self.generators)

    @property
    def k(self) -> int:
        """Encoded qudits, n - m (meaningful for independent generators and prime d)."""
        return self.n - self.m

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def subset(self, indices) -> 'StabilizerGroup':
        indices = list(indices)
        return StabilizerGroup(self.n, self.d,
                               tuple(self.generators[j] for j in indices),
                               tuple(self.labels[j] for j in indices))

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"no generator labelled {label!r}") from None


@dataclass(frozen=True)
class Boundary:
    """Per-side boundary tags of a planar patch."""
    top: str = 'smooth'
    right: str = 'smooth'
    bottom: str = 'smooth'
    left: str = 'smooth'

    def __post_init__(self):
        for side in ('top', 'right', 'bottom', 'left'):
            tag = getattr(self, side)
            if tag not in ('smooth', 'rough'):
                raise LatticeSpecError(f"boundary side {side!r} must be 'smooth' or 'rough', got {tag!r}")

    @classmethod
    def uniform(cls, tag: str) -> 'Boundary':
        return cls(tag, tag, tag, tag)


@dataclass(frozen=True)
class DefectSpec:
    """
    A rectangular hole. `region` holds the inclusive plaquette-coordinate box
    (row_min, col_min, row_max, col_max); all four are odd.
    """
    type: str
    region: Tuple[int, int, int, int]

    def __post_init__(self):
        if self.type not in ('smooth', 'rough'):
            raise LatticeSpecError(f"defect type must be 'smooth' or 'rough', got {self.type!r}")
        region = tuple(int(c) for c in self.region)
        if len(region) != 4 or any(c % 2 == 0 for c in region):
            raise LatticeSpecError(f"defect region must be four odd plaquette coordinates, got {self.region}")
        if region[0] > region[2] or region[1] > region[3]:
            raise LatticeSpecError(f"defect region {region} is empty")
        object.__setattr__(self, 'region', region)

    @property
    def perimeter_box(self) -> Tuple[int, int, int, int]:
        r0, c0, r1, c1 = self.region
        return r0 - 1, c0 - 1, r1 + 1, c1 + 1


@dataclass(frozen=True)
class WallSpec:
    """
    Domain wall ending in a twist.

    `twist_endpoint` is the (row, col) qubit at the top-left corner of the
    twist face; `path` optionally lists the wall faces by their top-left
    qubit and must then match the staircase the builder derives.
    """
    twist_endpoint: Tuple[int, int]
    path: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'twist_endpoint', tuple(int(c) for c in self.twist_endpoint))
        object.__setattr__(self, 'path', tuple(tuple(int(c) for c in p) for p in self.path))


@dataclass(frozen=True)
class LatticeSpec:
    kind: str
    rows: int
    cols: int
    boundary: Boundary = field(default_factory=Boundary)
    defects: Tuple[DefectSpec, ...] = ()
    wall: Optional[WallSpec] = None
    d: int = 2

    def __post_init__(self):
        if self.kind not in ('torus', 'planar'):
            raise LatticeSpecError(f"lattice kind must be 'torus' or 'planar', got {self.kind!r}")
        if self.rows < 1 or self.cols < 1:
            raise LatticeSpecError(f"rows and cols must be >= 1, got {self.rows}x{self.cols}")
        if self.d < 2:
            raise LatticeSpecError(f"local dimension must be >= 2, got {self.d}")
        object.__setattr__(self, 'defects', tuple(self.defects))


@dataclass(frozen=True, eq=False)
class LatticeCode:
    """
    A built lattice: qudit coordinates, the independent generator group,
    per-generator geometry tags and the dependent generators left out of it.
    """
    spec: LatticeSpec
    coordinates: Tuple[Tuple[int, int], ...]
    group: StabilizerGroup
    tags: Tuple[str, ...]
    redundant: Tuple[PauliString, ...] = ()
    redundant_labels: Tuple[str, ...] = ()
    redundant_tags: Tuple[str, ...] = ()
    crossed: Tuple[Tuple[int, int], ...] = ()
    signs: Mapping[str, Tuple[int, ...]] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.coordinates)

    @property
    def edge_index(self) -> Dict[Tuple[int, int], int]:
        return {c: i for i, c in enumerate(self.coordinates)}

    def geometric_group(self) -> StabilizerGroup:
        """Every generator the geometry defines, dependent ones included."""
        return StabilizerGroup(self.group.n, self.group.d,
                               self.group.generators + tuple(self.redundant),
                               self.group.labels + tuple(self.redundant_labels))

    def geometric_tags(self) -> Tuple[str, ...]:
        return tuple(self.tags) + tuple(self.redundant_tags)

    def generator(self, label: str) -> PauliString:
        group = self.geometric_group()
        return group.generators[group.index_of(label)]


@dataclass(frozen=True, eq=False)
class RbmState:
    """
    Psi(v) = exp(sum_i a_i v_i) * prod_j 2 cosh(b_j + sum_i W_ji v_i).

    Visible values are +-1 for d=2 and 0..d-1 otherwise. `basis` is 'y'
    when the amplitudes refer to the sigma_y eigenbasis.
    """
    a: np.ndarray
    b: np.ndarray
    W: np.ndarray
    d: int = 2
    hidden_labels: Tuple[str, ...] = ()
    basis: str = 'z'

    def __post_init__(self):
        a = np.array(self.a, dtype=np.complex128).reshape(-1)
        b = np.array(self.b, dtype=np.complex128).reshape(-1)
        W = np.array(self.W, dtype=np.complex128).reshape(len(b), len(a))
        for arr in (a, b, W):
            arr.setflags(write=False)
        object.__setattr__(self, 'a', a)
        object.__setattr__(self, 'b', b)
        object.__setattr__(self, 'W', W)
        labels = tuple(self.hidden_labels)
        if labels and len(labels) != len(b):
            raise ValueError(f"{len(labels)} hidden labels for {len(b)} hidden units")
        object.__setattr__(self, 'hidden_labels', labels)
        if self.basis not in ('z', 'y'):
            raise ValueError(f"basis must be 'z' or 'y', got {self.basis!r}")
        if self.d < 2:
            raise ValueError(f"visible cardinality must be >= 2, got {self.d}")

    @property
    def n(self) -> int:
        return self.a.shape[0]

    @property
    def m(self) -> int:
        return self.b.shape[0]

    @classmethod
    def uniform(cls, n: int, d: int = 2) -> 'RbmState':
        return cls(np.zeros(n), np.zeros(0), np.zeros((0, n)), d)


@dataclass(frozen=True, eq=False)
class DenseState:
    """Amplitudes over d^n configurations, row-major with qudit 0 most significant."""
    n: int
    d: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.shape[0] != self.d ** self.n:
            raise DimensionMismatchError(
                f"dense state needs {self.d ** self.n} amplitudes for n={self.n}, d={self.d}, got {amps.shape[0]}"
            )
        object.__setattr__(self, 'amplitudes', amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((self.d,) * self.n)


@dataclass(frozen=True)
class HiddenContribution:
    """What one generator added to the network."""
    generator_index: int
    label: str
    kind: str
    support: Tuple[int, ...]
    hidden_indices: Tuple[int, ...] = ()


@dataclass(frozen=True, eq=False)
class AnalyticRecipe:
    source_group: StabilizerGroup
    group_class: GroupClass
    basis: str
    contributions: Tuple[HiddenContribution, ...]
    z_incidence: Tuple[int, ...]
    y_cover: Tuple[int, ...]


@dataclass(frozen=True)
class OptimizerConfig:
    max_iterations: int = 5000
    restarts: int = 8
    rng_seed: int = 1234
    init_scale: float = 0.05
    convergence_tol: float = 1e-4
    gradient_tol: float = 1e-9
    gradient_check: bool = False
    hidden_count: Optional[int] = None

    def __post_init__(self):
        if self.max_iterations < 1 or self.restarts < 1:
            raise ValueError("max_iterations and restarts must be >= 1")
        if self.init_scale <= 0 or self.convergence_tol <= 0:
            raise ValueError("init_scale and convergence_tol must be positive")
        if self.hidden_count is not None and self.hidden_count < 1:
            raise ValueError("hidden_count must be >= 1")


@dataclass
class FitReport:
    final_distance: float
    final_fidelity: float
    iterations_used: int
    restart_index: int
    gradient_check_max_rel_err: Optional[float] = None
    parameter_norms: Dict[str, float] = field(default_factory=dict)
    restart_distances: List[float] = field(default_factory=list)
    converged: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class RunManifest:
    """One per CLI run, written next to the primary output."""
    command: str
    arguments: Dict[str, Any]
    inputs: Dict[str, str]
    seed: Optional[int]
    tool_version: str
    started_at: str
    wall_clock_seconds: float = 0.0
    outputs: List[str] = field(default_factory=list)
    exit_code: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)
