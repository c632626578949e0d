"""World model: AR(1) state, agent noise parameters and seeded trajectories.

All randomness comes from a single ``numpy.random.Generator`` backed by
PCG64 and drawn with numpy's ziggurat normal sampler, so a trajectory is a
pure function of ``(params, horizon, seed)``. Draw order is fixed:

1. the initial state ``x0`` (one standard normal),
2. the process noise ``w_1..w_K``,
3. the injected noise ``v_k^i`` as a ``K x m`` block, row major.

Every agent's noise is drawn up front so the private-prior and word-of-mouth
cascades can be driven by exactly the same randomness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ParameterError

RNG_NAME = "numpy.PCG64/ziggurat"
MAX_AGENTS = 10


@dataclass(frozen=True)
class ModelParams:
    """State dynamics ``x_k = a x_{k-1} + w_k`` plus the per-agent noise.

    ``s[0]`` is agent 1's measurement-noise variance; ``s[i]`` for ``i >= 1``
    is the variance of the noise injected before agent ``i + 1`` receives its
    predecessor's estimate.
    """

    a: float = 0.95
    q: float = 1.0
    s: tuple[float, ...] = (1.0, 1.0, 1.0)
    prior_mean: float = 25.0
    prior_var: float = 3.0

    def __post_init__(self):
        object.__setattr__(self, "s", tuple(float(v) for v in self.s))

    @property
    def m(self) -> int:
        return len(self.s)

    @property
    def stationary_var(self) -> float:
        return self.q / (1.0 - self.a * self.a)

    def with_agents(self, s: Sequence[float]) -> "ModelParams":
        return ModelParams(self.a, self.q, tuple(s), self.prior_mean, self.prior_var)


def validate(params: ModelParams) -> ModelParams:
    """Return ``params`` unchanged, or raise ParameterError naming the violation."""
    values = {
        "a": params.a,
        "q": params.q,
        "prior_mean": params.prior_mean,
        "prior_var": params.prior_var,
    }
    for name, value in values.items():
        if not math.isfinite(value):
            raise ParameterError(f"{name} must be finite")
    if not -1.0 < params.a < 1.0:
        raise ParameterError("a must lie in (-1,1)")
    if params.q <= 0:
        raise ParameterError("q must be positive")
    if params.prior_var <= 0:
        raise ParameterError("prior_var must be positive")
    if params.m < 1:
        raise ParameterError("s must hold at least one agent")
    if params.m > MAX_AGENTS:
        raise ParameterError(f"at most {MAX_AGENTS} agents are supported")
    for i, v in enumerate(params.s, start=1):
        if not (math.isfinite(v) and v > 0):
            raise ParameterError(f"s^{i} must be positive")
    return params


@dataclass(frozen=True)
class Trajectory:
    """Realized states and every noise draw used to produce them.

    ``states[k]`` holds x_{k+1}; ``initial_state`` is the drawn x_0.
    ``injected_noise`` is already scaled, i.e. column ``i`` has variance ``s[i]``.
    """

    initial_state: float
    states: np.ndarray
    process_noise: np.ndarray
    injected_noise: np.ndarray
    seed: int

    @property
    def horizon(self) -> int:
        return len(self.states)

    def observation_noise(self, k: int) -> np.ndarray:
        return self.injected_noise[k]


def simulate(params: ModelParams, horizon: int, seed: int) -> Trajectory:
    validate(params)
    if horizon < 1:
        raise ParameterError("horizon must be at least 1")
    rng = np.random.Generator(np.random.PCG64(seed))
    x0 = params.prior_mean + math.sqrt(params.prior_var) * float(rng.standard_normal())
    w = math.sqrt(params.q) * rng.standard_normal(horizon)
    v = rng.standard_normal((horizon, params.m)) * np.sqrt(np.asarray(params.s))

    a = params.a
    states = np.empty(horizon)
    x = x0
    for k, wk in enumerate(w.tolist()):
        x = a * x + wk
        states[k] = x
    return Trajectory(initial_state=x0, states=states, process_noise=w,
                      injected_noise=v, seed=seed)
