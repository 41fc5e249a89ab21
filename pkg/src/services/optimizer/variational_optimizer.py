"""
variational_optimizer.py - Fit a dense complex RBM to a target state

The loss is 1 - F with F = |<target|psi>|^2 / (<psi|psi><target|target>),
evaluated exactly over every configuration. Distances are reported as
arccos(sqrt(F)). Restarts are independent and seeded with seed + index.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize

from src.core.config import Config
from src.core.errors import EnumerationCapError, NonFiniteLossError, OptimizationStalledError, SubsystemError
from src.core.extensions import worker_pool
from src.core.models import DenseState, FitReport, LatticeCode, OptimizerConfig, PauliKind, RbmState
from src.services.analytic.analytic_builder import construct
from src.services.lattice.twist import wall_subsystem
from src.services.oracle.exact_oracle import SubsystemState, code_projector_overlap, subsystem_state
from src.services.pauli.pauli_core import kind_of
from src.services.rbm.rbm_state import check_cap, compose, full_state, log_2cosh
from src.utils.helpers import all_indices, visible_values

logger = logging.getLogger(__name__)

MAX_SPINS = 20
# a restart counts as progress once it moves this far below its starting distance
STALL_MARGIN = 0.01

TraceRow = Tuple[int, int, float, float]


class ParameterLayout:
    """Real vector [Re a, Re b, Re W, Im a, Im b, Im W] for an (n, m) network."""

    CLASSES = ('a', 'b', 'W')

    def __init__(self, n: int, m: int):
        self.n, self.m = n, m
        self.half = n + m + m * n
        self.size = 2 * self.half

    def slices(self) -> Dict[str, slice]:
        n, m, half = self.n, self.m, self.half
        spans = {'a': (0, n), 'b': (n, n + m), 'W': (n + m, half)}
        out = {}
        for name, (lo, hi) in spans.items():
            out[f"Re {name}"] = slice(lo, hi)
            out[f"Im {name}"] = slice(half + lo, half + hi)
        return out

    def pack(self, rbm: RbmState) -> np.ndarray:
        if (rbm.n, rbm.m) != (self.n, self.m):
            raise ValueError(f"network is ({rbm.n}, {rbm.m}), layout expects ({self.n}, {self.m})")
        flat = np.concatenate([rbm.a, rbm.b, rbm.W.reshape(-1)])
        return np.concatenate([flat.real, flat.imag])

    def unpack(self, params: np.ndarray, d: int = 2, basis: str = 'z') -> RbmState:
        params = np.asarray(params, dtype=np.float64)
        flat = params[:self.half] + 1j * params[self.half:]
        n, m = self.n, self.m
        return RbmState(flat[:n], flat[n:n + m], flat[n + m:].reshape(m, n), d, basis=basis)


class DistanceObjective:
    """Callable returning (1 - F, gradient) for a fixed target."""

    def __init__(self, target: DenseState, m: int):
        self.n, self.d, self.m = target.n, target.d, m
        self.layout = ParameterLayout(self.n, m)
        self.visible = visible_values(all_indices(self.n, self.d), self.d).astype(np.float64)
        self.target_conj = np.conj(target.amplitudes)
        self.target_norm2 = float(np.real(np.vdot(target.amplitudes, target.amplitudes)))
        if self.target_norm2 == 0:
            raise ValueError("zero-norm target")

    def _psi(self, params: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        rbm = self.layout.unpack(params, self.d)
        theta = self.visible @ rbm.W.T + rbm.b
        log_psi = self.visible @ rbm.a + np.sum(log_2cosh(theta), axis=1)
        if not np.all(np.isfinite(log_psi)):
            raise NonFiniteLossError("log amplitude is not finite; re-initialise with a smaller init_scale")
        psi = np.exp(log_psi - np.max(log_psi.real))
        return psi, theta

    def fidelity(self, params: np.ndarray) -> float:
        psi, _ = self._psi(params)
        overlap = self.target_conj @ psi
        norm2 = float(np.real(np.vdot(psi, psi)))
        return float(min(1.0, abs(overlap) ** 2 / (norm2 * self.target_norm2)))

    def distance(self, params: np.ndarray) -> float:
        return float(np.arccos(np.sqrt(self.fidelity(params))))

    def __call__(self, params: np.ndarray) -> Tuple[float, np.ndarray]:
        psi, theta = self._psi(params)
        tanh = np.tanh(theta)
        w = self.target_conj * psi
        u = np.abs(psi) ** 2
        S = np.sum(w)
        N = float(np.sum(u))
        if not (np.isfinite(S) and np.isfinite(N) and np.all(np.isfinite(tanh))) or N == 0:
            raise NonFiniteLossError("loss is not finite; re-initialise with a smaller init_scale")
        F = abs(S) ** 2 / (N * self.target_norm2)

        # derivatives of S and N along each complex parameter
        grad_S = np.concatenate([w @ self.visible, w @ tanh, ((tanh * w[:, None]).T @ self.visible).reshape(-1)])
        grad_N = np.concatenate([u @ self.visible, u @ tanh, ((tanh * u[:, None]).T @ self.visible).reshape(-1)])
        s_g = np.conj(S) * grad_S
        scale = N * N * self.target_norm2
        d_re = (2 * s_g.real * N - abs(S) ** 2 * 2 * grad_N.real) / scale
        d_im = (-2 * s_g.imag * N + abs(S) ** 2 * 2 * grad_N.imag) / scale
        return float(1.0 - F), -np.concatenate([d_re, d_im])


def gradient_check(objective: DistanceObjective, params: np.ndarray, h: float = 1e-5) -> Dict[str, float]:
    """Norm-relative error of the analytic gradient per parameter class, by central differences."""
    params = np.asarray(params, dtype=np.float64)
    _, grad = objective(params)
    numeric = np.zeros_like(params)
    for k in range(params.size):
        step = np.zeros_like(params)
        step[k] = h
        numeric[k] = (objective(params + step)[0] - objective(params - step)[0]) / (2 * h)
    errors = {}
    for name, span in objective.layout.slices().items():
        if span.stop == span.start:
            continue
        scale = max(np.linalg.norm(numeric[span]), np.linalg.norm(grad[span]), 1e-12)
        errors[name] = float(np.linalg.norm(numeric[span] - grad[span]) / scale)
    return errors


@dataclass
class RestartResult:
    index: int
    params: np.ndarray
    initial_distance: float
    best_distance: float
    iterations: int
    converged: bool
    trace: List[TraceRow] = field(default_factory=list)
    error: Optional[str] = None


def _run_restart(objective: DistanceObjective, cfg: OptimizerConfig, index: int) -> RestartResult:
    rng = np.random.default_rng(cfg.rng_seed + index)
    x0 = rng.normal(0.0, cfg.init_scale, objective.layout.size)
    try:
        initial = objective.distance(x0)
    except NonFiniteLossError as e:
        return RestartResult(index, x0, math.pi / 2, math.pi / 2, 0, False, error=str(e))

    state = {'x': x0.copy(), 'best': initial, 'iteration': 0}
    trace: List[TraceRow] = [(index, 0, initial, initial)]

    def callback(intermediate_result):
        state['iteration'] += 1
        fidelity = min(1.0, max(0.0, 1.0 - float(intermediate_result.fun)))
        current = float(np.arccos(np.sqrt(fidelity)))
        if current < state['best']:
            state['best'] = current
            state['x'] = np.array(intermediate_result.x, copy=True)
        trace.append((index, state['iteration'], current, state['best']))
        logger.debug("restart %d iteration %d: distance %.3e", index, state['iteration'], current)
        if state['best'] < cfg.convergence_tol:
            raise StopIteration

    error = None
    if initial >= cfg.convergence_tol:
        try:
            # 1 - F is ~1e-12 at distance 1e-6, so relative-reduction stops are off;
            # gtol, maxiter and the callback end the run
            minimize(objective, x0, jac=True, method='L-BFGS-B', callback=callback,
                     options={'maxiter': cfg.max_iterations, 'gtol': cfg.gradient_tol, 'ftol': 0.0})
        except NonFiniteLossError as e:
            error = str(e)
            logger.warning("restart %d hit a non-finite loss: %s", index, e)
    best = objective.distance(state['x'])
    return RestartResult(index, state['x'], initial, best, state['iteration'],
                         best < cfg.convergence_tol, trace, error)


def fit_subsystem(target: DenseState, cfg: Optional[OptimizerConfig] = None, workers: Optional[int] = None,
                  trace: Optional[List[TraceRow]] = None) -> Tuple[RbmState, FitReport]:
    """
    Best fully connected RBM for `target` over cfg.restarts restarts.

    Args:
        target: dense state on at most 20 spins.
        cfg: optimizer settings; hidden_count defaults to the spin count.
        workers: threads for running restarts side by side.
        trace: if given, extended with (restart, iteration, distance,
            best_distance) rows in restart order.

    Raises:
        OptimizationStalledError: no restart converged or moved meaningfully
            below its starting distance.
        NonFiniteLossError: every restart overflowed.
    """
    cfg = cfg or OptimizerConfig(Config.MAX_ITERATIONS, Config.RESTARTS, Config.SEED,
                                 Config.INIT_SCALE, Config.CONVERGENCE_TOL, Config.GRADIENT_TOL)
    if target.n > MAX_SPINS:
        raise ValueError(f"target has {target.n} spins; full enumeration supports at most {MAX_SPINS}")
    check_cap(target.n, target.d)
    m = cfg.hidden_count or target.n
    objective = DistanceObjective(target, m)

    with worker_pool(workers) as pool:
        results = list(pool.map(lambda r: _run_restart(objective, cfg, r), range(cfg.restarts)))

    for r in results:
        logger.info("restart %d: distance %.3e -> %.3e after %d iterations%s", r.index, r.initial_distance,
                    r.best_distance, r.iterations, f" ({r.error})" if r.error else '')
        if trace is not None:
            trace.extend(r.trace)
    finite = [r for r in results if r.error is None or r.iterations]
    if not finite:
        raise NonFiniteLossError(f"all {cfg.restarts} restarts overflowed; re-initialise with a smaller init_scale")

    best = min(results, key=lambda r: (r.best_distance, r.index))
    rbm = objective.layout.unpack(best.params, target.d)
    report = FitReport(
        final_distance=best.best_distance,
        final_fidelity=float(np.cos(best.best_distance) ** 2),
        iterations_used=best.iterations,
        restart_index=best.index,
        parameter_norms={name: float(np.linalg.norm(getattr(rbm, name))) for name in ParameterLayout.CLASSES},
        restart_distances=[r.best_distance for r in results],
        converged=best.converged,
    )
    if cfg.gradient_check:
        report.gradient_check_max_rel_err = max(gradient_check(objective, best.params).values())
    if not any(r.converged or r.initial_distance - r.best_distance >= STALL_MARGIN for r in results):
        raise OptimizationStalledError(
            f"optimization stalled: best distance {best.best_distance:.4f} after {cfg.restarts} restarts", report
        )
    return rbm, report


@dataclass(frozen=True, eq=False)
class TwistFit:
    rbm: RbmState
    report: FitReport
    subsystem: SubsystemState
    residual_labels: Tuple[str, ...]
    code_overlap: Optional[float]


def fit_twist_lattice(code: LatticeCode, cfg: Optional[OptimizerConfig] = None,
                      exclude_labels: Sequence[str] = (), workers: Optional[int] = None,
                      cap: Optional[int] = None, trace: Optional[List[TraceRow]] = None) -> TwistFit:
    """
    Global RBM for a twist lattice: a fitted network on the wall subsystem
    times the analytic network of every generator that is not mixed.

    Raises:
        SubsystemError: the restricted stabilizers leave the subsystem
            state undetermined (dimension > 1).
    """
    g = code.group
    spins = wall_subsystem(code)
    excluded = set(exclude_labels)
    unknown = excluded - set(g.labels)
    if unknown:
        raise ValueError(f"unknown generator labels {sorted(unknown)}")
    stabs = [j for j, p in enumerate(g.generators)
             if g.labels[j] not in excluded and set(p.support) & set(spins)]
    sub = subsystem_state(g, spins, stabs, cap=cap)
    if sub.degenerate:
        raise SubsystemError(
            f"subsystem dimension {g.d}^{sub.dimension_exponent}: restricted rank {sub.rank} "
            f"for {len(spins)} spins", sub.rank
        )
    fitted, report = fit_subsystem(sub.state, cfg, workers, trace)

    residual = [j for j, p in enumerate(g.generators) if kind_of(p) is not PauliKind.MIXED]
    residual_group = g.subset(residual)
    analytic, _ = construct(residual_group)
    rbm = compose([(fitted, spins), (analytic, range(g.n))], g.n)
    logger.info("twist fit: subsystem %d spins, distance %.4f, %d residual generators, %d hidden units",
                len(spins), report.final_distance, len(residual), rbm.m)

    overlap = None
    try:
        overlap = code_projector_overlap(g, full_state(rbm, cap=cap, workers=workers))
    except EnumerationCapError as e:
        logger.warning("skipped global overlap check: %s", e)
    return TwistFit(rbm, report, sub, residual_group.labels, overlap)
