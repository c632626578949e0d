"""Monte Carlo harness: MSE tables, variance traces, coverage and PP/WoM comparison.

Every seed yields one trajectory; both cascades are run on that same
trajectory so differences between setups are paired. Seeds are processed in
ascending order and reduced in that order, which keeps reports bit-identical
whether or not the per-seed work is fanned out to worker processes.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import chain as ch
from .chain import PriorConvention, Setup
from .errors import ParameterError
from .model import ModelParams, Trajectory, simulate, validate
from .riccati import FixedPointReport, fixed_points

DEFAULT_INITS = (0.1, 3.7075, 50.0)


@dataclass(frozen=True)
class ExperimentConfig:
    params: ModelParams = field(default_factory=ModelParams)
    K: int = 1000
    seeds: tuple[int, ...] = tuple(range(50))
    initial_pred_vars: tuple[float, ...] = DEFAULT_INITS
    setups: tuple[Setup, ...] = (Setup.PP, Setup.WOM)
    burn_in: int = 0
    prior_convention: PriorConvention = PriorConvention.POSTERIOR_AT_0
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "seeds", tuple(sorted(int(s) for s in self.seeds)))
        object.__setattr__(self, "setups", tuple(Setup.parse(s) for s in self.setups))
        object.__setattr__(self, "initial_pred_vars", tuple(float(p) for p in self.initial_pred_vars))


def validate_config(config: ExperimentConfig) -> ExperimentConfig:
    validate(config.params)
    if config.K < 1:
        raise ParameterError("K must be at least 1")
    if not config.seeds:
        raise ParameterError("at least one seed is required")
    if len(set(config.seeds)) != len(config.seeds):
        raise ParameterError("seeds must be distinct")
    if not config.setups:
        raise ParameterError("no setup selected")
    if any(not p > 0 for p in config.initial_pred_vars):
        raise ParameterError("initial_pred_vars must be positive")
    if not 0 <= config.burn_in < config.K:
        raise ParameterError("burn_in must lie in [0, K)")
    return config


# -- one seed ----------------------------------------------------------------

@dataclass(frozen=True)
class ChainRun:
    """Per-step quantities of one cascade, arrays of shape ``(K, m)``."""

    setup: Setup
    pred_mean: np.ndarray
    pred_var: np.ndarray
    post_mean: np.ndarray
    post_var: np.ndarray
    gain: np.ndarray


def run_chain(params: ModelParams, setup, traj: Trajectory,
              prior_convention=PriorConvention.POSTERIOR_AT_0) -> ChainRun:
    setup = Setup.parse(setup)
    state = ch.init_chain(params, setup, prior_convention)
    K, m = traj.horizon, params.m
    out = {name: np.empty((K, m)) for name in ("pred_mean", "pred_var", "post_mean", "post_var", "gain")}
    states = traj.states.tolist()
    noise = traj.injected_noise.tolist()
    for k in range(K):
        state = ch.time_step(state, states[k], noise[k])
        for name, arr in out.items():
            arr[k] = state.column(name)
    return ChainRun(setup=setup, **out)


@dataclass(frozen=True)
class SeedResult:
    seed: int
    states: np.ndarray
    runs: dict

    def errors(self, setup: Setup, which: str = "pred") -> np.ndarray:
        run = self.runs[setup]
        est = run.pred_mean if which == "pred" else run.post_mean
        return est - self.states[:, None]


def run_seed(config: ExperimentConfig, seed: int) -> SeedResult:
    traj = simulate(config.params, config.K, seed)
    runs = {s: run_chain(config.params, s, traj, config.prior_convention) for s in config.setups}
    return SeedResult(seed, traj.states, runs)


def _run_seeds(config: ExperimentConfig) -> list[SeedResult]:
    validate_config(config)
    if config.workers > 1 and len(config.seeds) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            return list(pool.map(run_seed, [config] * len(config.seeds), config.seeds))
    return [run_seed(config, seed) for seed in config.seeds]


def _stderr(values: np.ndarray) -> np.ndarray:
    n = values.shape[0]
    if n < 2:
        return np.zeros(values.shape[1:])
    return values.std(axis=0, ddof=1) / math.sqrt(n)


def _coverage(res: SeedResult, setup: Setup, n_sigma: float, burn_in: int) -> np.ndarray:
    run = res.runs[setup]
    err = res.errors(setup, "pred")[burn_in:]
    inside = np.abs(err) <= n_sigma * np.sqrt(run.pred_var[burn_in:])
    return inside.mean(axis=0)


# -- MSE ---------------------------------------------------------------------

@dataclass(frozen=True)
class AgentStats:
    agent: int
    mse_pred: float
    mse_post: float
    stderr_pred: float
    stderr_post: float
    coverage_3sigma: float
    coverage_stderr: float
    p_inf: float
    p_post_inf: float


@dataclass(frozen=True)
class SetupStats:
    setup: Setup
    agents: tuple[AgentStats, ...]
    fixed_points: FixedPointReport
    per_seed_mse_pred: np.ndarray
    per_seed_mse_post: np.ndarray
    per_seed_coverage: np.ndarray

    @property
    def mse_pred(self) -> list[float]:
        return [a.mse_pred for a in self.agents]

    @property
    def mse_post(self) -> list[float]:
        return [a.mse_post for a in self.agents]

    @property
    def coverage_3sigma(self) -> list[float]:
        return [a.coverage_3sigma for a in self.agents]


@dataclass(frozen=True)
class ExperimentReport:
    config: ExperimentConfig
    setups: dict

    def __getitem__(self, setup) -> SetupStats:
        return self.setups[Setup.parse(setup)]

    @property
    def seeds(self) -> tuple[int, ...]:
        return self.config.seeds


def _summarize(config: ExperimentConfig, results: list[SeedResult]) -> ExperimentReport:
    b = config.burn_in
    out = {}
    for setup in config.setups:
        fp = fixed_points(config.params, setup)
        pred = np.array([np.mean(r.errors(setup, "pred")[b:] ** 2, axis=0) for r in results])
        post = np.array([np.mean(r.errors(setup, "post")[b:] ** 2, axis=0) for r in results])
        cov = np.array([_coverage(r, setup, 3.0, b) for r in results])
        se_pred, se_post, se_cov = _stderr(pred), _stderr(post), _stderr(cov)
        agents = tuple(
            AgentStats(agent=i + 1, mse_pred=float(pred[:, i].mean()), mse_post=float(post[:, i].mean()),
                       stderr_pred=float(se_pred[i]), stderr_post=float(se_post[i]),
                       coverage_3sigma=float(cov[:, i].mean()), coverage_stderr=float(se_cov[i]),
                       p_inf=fp.p_inf[i], p_post_inf=fp.p_post_inf[i])
            for i in range(config.params.m)
        )
        out[setup] = SetupStats(setup, agents, fp, pred, post, cov)
    return ExperimentReport(config, out)


def run_mse(config: ExperimentConfig) -> ExperimentReport:
    """Time-averaged squared prediction and posterior errors, averaged over seeds."""
    return _summarize(config, _run_seeds(config))


# -- coverage ----------------------------------------------------------------

@dataclass(frozen=True)
class CoverageResult:
    setup: Setup
    agent: int
    n_sigma: float
    fraction: float
    stderr: float
    per_seed: np.ndarray


def coverage_from_results(config: ExperimentConfig, results: Sequence[SeedResult], agent: int,
                          n_sigma: float = 3.0) -> dict:
    if not 1 <= agent <= config.params.m:
        raise ParameterError(f"agent must lie in 1..{config.params.m}")
    out = {}
    for setup in config.setups:
        per_seed = np.array([_coverage(r, setup, n_sigma, config.burn_in)[agent - 1] for r in results])
        out[setup] = CoverageResult(setup, agent, n_sigma, float(per_seed.mean()),
                                    float(_stderr(per_seed[:, None])[0]), per_seed)
    return out


def run_coverage(config: ExperimentConfig, agent: int, n_sigma: float = 3.0) -> dict:
    """Share of steps with ``|x_k - x_k|k-1| <= n_sigma * sqrt(p_k|k-1)``, per setup."""
    return coverage_from_results(config, _run_seeds(config), agent, n_sigma)


# -- paired comparison -------------------------------------------------------

@dataclass(frozen=True)
class AgentComparison:
    agent: int
    pred_diff: float
    post_diff: float
    pred_diff_stderr: float
    post_diff_stderr: float

    @staticmethod
    def _verdict(diff: float) -> str:
        if diff > 0:
            return "degraded"
        if diff < 0:
            return "improved"
        return "unchanged"

    @property
    def pred_verdict(self) -> str:
        return self._verdict(self.pred_diff)

    @property
    def post_verdict(self) -> str:
        return self._verdict(self.post_diff)


def paired_comparison(config: ExperimentConfig, report: ExperimentReport | None = None) -> list[AgentComparison]:
    """Per-agent ``mse_WoM - mse_PP`` on shared noise; negative means WoM helped."""
    if set(config.setups) != {Setup.PP, Setup.WOM}:
        raise ParameterError("paired comparison needs both PP and WoM")
    report = run_mse(config) if report is None else report
    pp, wom = report[Setup.PP], report[Setup.WOM]
    d_pred = wom.per_seed_mse_pred - pp.per_seed_mse_pred
    d_post = wom.per_seed_mse_post - pp.per_seed_mse_post
    se_pred, se_post = _stderr(d_pred), _stderr(d_post)
    return [
        AgentComparison(i + 1, float(d_pred[:, i].mean()), float(d_post[:, i].mean()),
                        float(se_pred[i]), float(se_post[i]))
        for i in range(config.params.m)
    ]


# -- convergence traces ------------------------------------------------------

@dataclass(frozen=True)
class VarianceTrace:
    """Data-free variance recursion from one initial ``p1|0``; arrays ``(K, m)``."""

    setup: Setup
    init_id: int
    init_pred_var: float
    p_pred: np.ndarray
    gain: np.ndarray
    p_post: np.ndarray

    @property
    def terminal_pred_var(self) -> np.ndarray:
        return self.p_pred[-1]


def variance_trace(params: ModelParams, setup, init_pred_var: float, K: int, init_id: int = 0) -> VarianceTrace:
    setup = Setup.parse(setup)
    state = ch.chain_from_prediction(params, setup, init_pred_var)
    pred = state.column("pred_var")
    m = params.m
    p_pred, gain, p_post = np.empty((K, m)), np.empty((K, m)), np.empty((K, m))
    for k in range(K):
        if k:
            pred = ch.predict_variances(setup, post, params.a, params.q)
        gains, _, _, post = ch.correct_variances(setup, pred, params.s)
        p_pred[k], gain[k], p_post[k] = pred, gains, post
    return VarianceTrace(setup, init_id, float(init_pred_var), p_pred, gain, p_post)


def run_convergence_trace(config: ExperimentConfig) -> list[VarianceTrace]:
    """Variance, gain and posterior-variance paths for every setup and initial condition."""
    validate_config(config)
    return [variance_trace(config.params, setup, p0, config.K, init_id)
            for setup in config.setups
            for init_id, p0 in enumerate(config.initial_pred_vars)]
