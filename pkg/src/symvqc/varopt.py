"""Variational loops: energy minimization, fidelity maximization, trial batches.

Optimizers are derivative-free: Nelder-Mead (scipy, chained with fresh
restart simplexes at the incumbent until the evaluation budget is spent),
COBYLA (scipy, chained over shrinking start radii; clearly the strongest of
the three on the brick-wall energy landscapes), and a standard-gain SPSA for
shot-noisy objectives. ``max_iterations`` always counts objective
evaluations, so traces from different methods share an x-axis. Every trace
entry is the best objective value seen up to that evaluation, which makes
traces monotone by construction.

Trial batches share initializations through the seed contract: trial k draws
its starting parameters from ``default_rng(base_seed + k)``, so two circuits
with the same parameter count and base seed start every paired trial at the
identical point.
"""
from __future__ import annotations

import enum
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import minimize as _scipy_minimize

from .circuit import Circuit, sector_of
from .numkit import StateVector
from .pauli import PauliSum
from .simulator import (
    NoiseSpec,
    apply_circuit,
    apply_circuit_noisy,
    expectation,
    sampled_expectation,
)
from .symmetry import sector_basis_indices


class Method(str, enum.Enum):
    NELDER_MEAD = "nelder_mead"
    SPSA = "spsa"
    COBYLA = "cobyla"


@dataclass(frozen=True)
class OptimizerConfig:
    method: Method = Method.NELDER_MEAD
    max_iterations: int = 1000
    tolerance: float = 1e-10
    seed: int = 0

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


@dataclass(frozen=True)
class EstimatorSpec:
    """How objective expectation values are produced: exact or shot-sampled."""

    kind: str = "exact"
    shots: int | None = None

    def __post_init__(self):
        if self.kind not in ("exact", "shots"):
            raise ValueError(f"unknown estimator kind {self.kind!r}")
        if self.kind == "shots" and (self.shots is None or self.shots < 1):
            raise ValueError("shots estimator needs shots >= 1")

    @classmethod
    def exact(cls) -> "EstimatorSpec":
        return cls("exact", None)

    @classmethod
    def with_shots(cls, shots: int) -> "EstimatorSpec":
        return cls("shots", shots)


@dataclass(frozen=True)
class TrialResult:
    """One optimization run: best-so-far trace, best parameters, best value."""

    trace: np.ndarray = field(repr=False)
    final_params: np.ndarray = field(repr=False)
    final_value: float


@dataclass(frozen=True)
class FidelityResult(TrialResult):
    """Fidelity-span run; ``final_value`` is the mean of per-target maxima."""

    per_target: tuple[float, ...] = ()


@dataclass(frozen=True)
class AggregateResult:
    """Per-step statistics of best-so-far energy error across trials."""

    delta_e_mean: np.ndarray = field(repr=False)
    delta_e_stderr: np.ndarray = field(repr=False)
    num_trials: int
    reference_energy: float
    final_values: np.ndarray = field(repr=False)

    @property
    def best_final_value(self) -> float:
        return float(self.final_values.min())


@dataclass(frozen=True)
class VqeTask:
    """Everything one energy-minimization trial needs, minus the seed."""

    circuit: Circuit
    hamiltonian: PauliSum
    config: OptimizerConfig
    estimator: EstimatorSpec = EstimatorSpec.exact()
    noise: NoiseSpec | None = None
    reference_energy: float = 0.0


class _BudgetExhausted(Exception):
    pass


class _Recorder:
    """Wraps an objective: enforces the evaluation budget, tracks the best."""

    def __init__(self, objective, budget: int):
        self.objective = objective
        self.budget = budget
        self.trace: list[float] = []
        self.best_value = np.inf
        self.best_x: np.ndarray | None = None

    @property
    def used(self) -> int:
        return len(self.trace)

    def __call__(self, x: np.ndarray) -> float:
        if self.used >= self.budget:
            raise _BudgetExhausted
        value = float(self.objective(np.asarray(x, dtype=float)))
        if value < self.best_value:
            self.best_value = value
            self.best_x = np.array(x, dtype=float)
        self.trace.append(self.best_value)
        return value


# Restart simplex edge lengths for the Nelder-Mead chain; None = scipy default.
_NM_RESTART_SCALES = (None, 1.2, 0.6, 0.3, 0.15, 0.08, 0.04, 0.02)


def _run_nelder_mead(rec: _Recorder, x0: np.ndarray, tol: float) -> None:
    n = x0.size
    stage = 0
    stale = 0
    while rec.used < rec.budget and stale < 2:
        start = rec.best_x if rec.best_x is not None else x0
        options = dict(
            maxfev=rec.budget - rec.used,
            xatol=tol,
            fatol=tol * 1e-2,
            adaptive=True,
        )
        scale = _NM_RESTART_SCALES[min(stage, len(_NM_RESTART_SCALES) - 1)]
        if scale is not None:
            simplex = np.tile(start, (n + 1, 1))
            for k in range(n):
                simplex[k + 1, k] += scale
            options["initial_simplex"] = simplex
        before = rec.best_value
        try:
            _scipy_minimize(rec, start, method="Nelder-Mead", options=options)
        except _BudgetExhausted:
            break
        stale = stale + 1 if rec.best_value >= before - abs(tol) else 0
        stage += 1


# Trust-region start radii for the COBYLA chain: one coarse pass, two refinements.
_COBYLA_RHO_CHAIN = (0.7, 0.3, 0.1)


def _run_cobyla(rec: _Recorder, x0: np.ndarray, tol: float) -> None:
    stages = len(_COBYLA_RHO_CHAIN)
    for i, rho in enumerate(_COBYLA_RHO_CHAIN):
        remaining = rec.budget - rec.used
        if remaining <= 0:
            break
        share = remaining if i == stages - 1 else min(max(rec.budget // stages, 1), remaining)
        start = rec.best_x if rec.best_x is not None else x0
        try:
            _scipy_minimize(
                rec,
                start,
                method="COBYLA",
                tol=tol,
                options=dict(maxiter=share, rhobeg=rho),
            )
        except _BudgetExhausted:
            break


def _run_spsa(rec: _Recorder, x0: np.ndarray, seed) -> None:
    # Standard SPSA gain schedules (alpha = 0.602, gamma = 0.101).
    rng = np.random.default_rng(seed)
    n = x0.size
    iterations = max((rec.budget - 1) // 2, 1)
    a, c = 0.25, 0.15
    big_a = 0.1 * iterations
    x = x0.copy()
    try:
        rec(x)
        for k in range(iterations):
            ak = a / (k + 1 + big_a) ** 0.602
            ck = c / (k + 1) ** 0.101
            delta = rng.choice((-1.0, 1.0), size=n)
            f_plus = rec(x + ck * delta)
            f_minus = rec(x - ck * delta)
            gradient = (f_plus - f_minus) / (2.0 * ck) * delta
            x = x - ak * gradient
    except _BudgetExhausted:
        pass


def _minimize(objective, x0: np.ndarray, config: OptimizerConfig):
    rec = _Recorder(objective, config.max_iterations)
    if config.method is Method.NELDER_MEAD:
        _run_nelder_mead(rec, x0, config.tolerance)
    elif config.method is Method.SPSA:
        _run_spsa(rec, x0, (config.seed, 0x5B5A))
    elif config.method is Method.COBYLA:
        _run_cobyla(rec, x0, config.tolerance)
    else:
        raise ValueError(f"unknown method {config.method}")
    if rec.best_x is None:  # budget of 0 evals can't happen (>=1), but be safe
        rec.best_x, rec.best_value, rec.trace = x0.copy(), float(objective(x0)), [np.inf]
    return rec.best_x, rec.best_value, np.asarray(rec.trace)


def initial_parameters(num_parameters: int, seed) -> np.ndarray:
    """Uniform random start in [-pi, pi) per slot."""
    return np.random.default_rng(seed).uniform(-np.pi, np.pi, num_parameters)


def _energy_objective(circuit, hamiltonian, estimator, noise, eval_rng):
    psi_in = StateVector.zero_state(circuit.num_qubits)

    def objective(params):
        if noise is not None and not noise.is_noiseless():
            psi = apply_circuit_noisy(circuit, params, psi_in, noise, eval_rng)
        else:
            psi = apply_circuit(circuit, params, psi_in)
        if estimator.kind == "exact":
            return expectation(hamiltonian, psi)
        p_ro = noise.p_ro if noise is not None else 0.0
        return sampled_expectation(
            hamiltonian, psi, estimator.shots, eval_rng, readout_flip_p=p_ro
        )

    return objective


def minimize_energy(
    circuit: Circuit,
    hamiltonian: PauliSum,
    config: OptimizerConfig,
    estimator: EstimatorSpec = EstimatorSpec.exact(),
    noise: NoiseSpec | None = None,
    initial_params: np.ndarray | None = None,
) -> TrialResult:
    """VQE loop: minimize <psi(params)|H|psi(params)> from the all-zeros input.

    The returned value/parameters are the best actually evaluated, so the
    result is never worse than the starting point. Bit-reproducible for fixed
    config (stochastic estimators draw from a stream seeded by config.seed).
    """
    if circuit.num_qubits != hamiltonian.num_qubits:
        raise ValueError(
            f"circuit on {circuit.num_qubits} qubits, operator on {hamiltonian.num_qubits}"
        )
    if initial_params is None:
        initial_params = initial_parameters(circuit.num_free_parameters, config.seed)
    x0 = np.asarray(initial_params, dtype=float)
    if x0.shape != (circuit.num_free_parameters,):
        raise ValueError("initial parameter vector has the wrong length")
    eval_rng = np.random.default_rng((config.seed, 0xE7A1))
    objective = _energy_objective(circuit, hamiltonian, estimator, noise, eval_rng)
    best_x, best_value, trace = _minimize(objective, x0, config)
    return TrialResult(trace=trace, final_params=best_x, final_value=best_value)


def _check_targets_in_sector(circuit: Circuit, targets) -> None:
    num_sites, num_particles = sector_of(circuit)
    idx = sector_basis_indices(num_sites, num_particles)
    for i, target in enumerate(targets):
        if target.num_qubits != circuit.num_qubits:
            raise ValueError(f"target {i} size mismatch")
        weight = float(np.sum(np.abs(target.amplitudes[idx]) ** 2))
        if weight < 1.0 - 1e-9:
            raise ValueError(
                f"target {i} lies outside the ({num_sites},{num_particles}) sector "
                f"(sector weight {weight:.12f})"
            )


def maximize_fidelity(
    circuit: Circuit,
    targets,
    config: OptimizerConfig,
) -> FidelityResult:
    """Maximize |<target|psi(params)>|^2 independently for each target.

    Each target gets its own evaluation budget of ``config.max_iterations``,
    split over up to five fresh random starts (stopping early once the
    fidelity is within 1e-9 of one). The reported trace is the across-target
    mean of best-so-far fidelity curves; ``final_params`` belongs to the last
    target.
    """
    targets = list(targets)
    if not targets:
        raise ValueError("need at least one target")
    _check_targets_in_sector(circuit, targets)
    psi_in = StateVector.zero_state(circuit.num_qubits)
    curves: list[np.ndarray] = []
    maxima: list[float] = []
    last_params: np.ndarray | None = None
    starts = max(1, min(5, config.max_iterations // 1000))
    chunk = max(config.max_iterations // starts, 1)
    for t_index, target in enumerate(targets):
        amps = target.amplitudes

        def objective(params):
            psi = apply_circuit(circuit, params, psi_in)
            return 1.0 - float(abs(np.vdot(amps, psi.amplitudes)) ** 2)

        best_value, best_x = np.inf, None
        curve: list[float] = []
        for start in range(starts):
            x0 = initial_parameters(
                circuit.num_free_parameters, (config.seed, t_index, start)
            )
            sub = replace(config, max_iterations=chunk)
            x, value, trace = _minimize(objective, x0, sub)
            if value < best_value:
                best_value, best_x = value, x
            running = np.minimum.accumulate(
                np.concatenate([[curve[-1] if curve else np.inf], trace])
            )[1:]
            curve.extend(running.tolist())
            if best_value <= 1e-9:
                break
        curves.append(1.0 - np.asarray(curve))
        maxima.append(1.0 - best_value)
        last_params = best_x
    length = max(c.size for c in curves)
    padded = np.vstack([np.pad(c, (0, length - c.size), mode="edge") for c in curves])
    mean_curve = padded.mean(axis=0)
    return FidelityResult(
        trace=mean_curve,
        final_params=last_params,
        final_value=float(np.mean(maxima)),
        per_target=tuple(maxima),
    )


def _run_single_trial(task: VqeTask, base_seed: int, k: int) -> TrialResult:
    init = initial_parameters(task.circuit.num_free_parameters, base_seed + k)
    cfg = replace(task.config, seed=base_seed + k)
    return minimize_energy(
        task.circuit,
        task.hamiltonian,
        cfg,
        task.estimator,
        noise=task.noise,
        initial_params=init,
    )


def run_trials(
    task: VqeTask,
    num_trials: int,
    base_seed: int,
    max_workers: int = 1,
) -> AggregateResult:
    """Run ``num_trials`` seeded trials and aggregate best-so-far energy error.

    Trial k starts from ``initial_parameters(P, base_seed + k)``; running two
    tasks whose circuits share a parameter count against the same base seed
    therefore pairs their initializations trial by trial. Traces are padded
    with their final value to a common length before averaging.
    """
    if num_trials < 1:
        raise ValueError("num_trials must be >= 1")
    if max_workers > 1:
        with ProcessPoolExecutor(max_workers=max_workers) as pool:
            results = list(
                pool.map(_run_single_trial, [task] * num_trials, [base_seed] * num_trials, range(num_trials))
            )
    else:
        results = [_run_single_trial(task, base_seed, k) for k in range(num_trials)]
    length = max(r.trace.size for r in results)
    stacked = np.vstack(
        [np.pad(r.trace, (0, length - r.trace.size), mode="edge") for r in results]
    )
    delta = stacked - task.reference_energy
    mean = delta.mean(axis=0)
    if num_trials == 1:
        stderr = np.zeros_like(mean)
    else:
        stderr = delta.std(axis=0, ddof=1) / np.sqrt(num_trials)
    finals = np.array([r.final_value for r in results])
    return AggregateResult(
        delta_e_mean=mean,
        delta_e_stderr=stderr,
        num_trials=num_trials,
        reference_energy=task.reference_energy,
        final_values=finals,
    )


def aggregate_to_csv(result: AggregateResult) -> str:
    """CSV text with header step,delta_e_mean,delta_e_stderr (LF endings)."""
    lines = ["step,delta_e_mean,delta_e_stderr"]
    for step, (m, s) in enumerate(zip(result.delta_e_mean, result.delta_e_stderr)):
        lines.append(f"{step},{m:.12g},{s:.12g}")
    return "\n".join(lines) + "\n"
