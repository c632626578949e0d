"""One outer time step of the private-prior (PP) or word-of-mouth (WoM) cascade.

A time step is a prediction followed by a left-to-right sweep over the agents.
Agent 1 observes the state in noise. Every later agent receives its
predecessor's post-processed estimate plus fresh injected noise, and undoes the
scaling with a pre-processing division, which turns the relay into an ordinary
observation ``y^i = x + n^i`` with equivalent noise variance ``r^i``.

PP agents predict from their own posterior. In WoM every agent predicts from
the last agent's posterior, so all agents share one prior.

Variances and gains never depend on data; :func:`predict_variances` and
:func:`correct_variances` carry that part of the recursion on plain floats and
are reused by the convergence traces.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Sequence

from .errors import InvariantError, ParameterError
from .model import ModelParams, validate


class Setup(str, enum.Enum):
    PP = "PP"
    WOM = "WoM"

    @classmethod
    def parse(cls, value) -> "Setup":
        if isinstance(value, cls):
            return value
        for member in cls:
            if str(value).lower() == member.value.lower():
                return member
        raise ParameterError(f"unknown setup {value!r}; expected PP or WoM")


class PriorConvention(str, enum.Enum):
    POSTERIOR_AT_0 = "posterior_at_0"
    PREDICTION_AT_1 = "prediction_at_1"


class Phase(str, enum.Enum):
    POSTERIOR = "posterior"
    PRIOR = "prior"


@dataclass(frozen=True, slots=True)
class AgentSlot:
    """Filter quantities of one agent at one time step.

    Fields that only exist after a correction (gain, equivalent noise,
    posterior, observation) are ``None`` while the slot holds a bare prior.
    ``gamma`` is the WoM increment of the equivalent noise and stays ``None``
    for agent 1 and for PP agents.
    """

    pred_mean: float | None
    pred_var: float | None
    post_mean: float | None = None
    post_var: float | None = None
    gain: float | None = None
    eq_noise_var: float | None = None
    gamma: float | None = None
    observation: float | None = None


@dataclass(frozen=True)
class ChainState:
    k: int
    setup: Setup
    slots: tuple[AgentSlot, ...]
    params: ModelParams
    phase: Phase = Phase.POSTERIOR

    @property
    def m(self) -> int:
        return len(self.slots)

    def column(self, name: str) -> list:
        return [getattr(slot, name) for slot in self.slots]


def init_chain(params: ModelParams, setup, prior_convention=PriorConvention.POSTERIOR_AT_0) -> ChainState:
    """Start every agent from ``x0|0 = prior_mean`` and ``p0|0 = prior_var``.

    With ``prediction_at_1`` the returned state already holds the equivalent
    one-step prediction ``x1|0 = a x0``, ``p1|0 = a^2 p0 + q``.
    """
    validate(params)
    setup = Setup.parse(setup)
    slot = AgentSlot(pred_mean=None, pred_var=None,
                     post_mean=params.prior_mean, post_var=params.prior_var)
    state = ChainState(k=0, setup=setup, slots=(slot,) * params.m, params=params)
    if PriorConvention(prior_convention) is PriorConvention.PREDICTION_AT_1:
        state = predict(state)
    return state


def chain_from_prediction(params: ModelParams, setup, pred_var: float | Sequence[float],
                          pred_mean: float | None = None, k: int = 1) -> ChainState:
    """Build a prior-phase state at time ``k`` from given one-step predictions.

    Used for convergence traces, whose initial ``p1|0`` may be smaller than
    ``q`` and hence unreachable from any ``p0|0``.
    """
    validate(params)
    setup = Setup.parse(setup)
    if isinstance(pred_var, (int, float)):
        pred_var = [float(pred_var)] * params.m
    pred_var = [float(p) for p in pred_var]
    if len(pred_var) != params.m:
        raise ParameterError("one initial prediction variance per agent is required")
    if any(not p > 0 for p in pred_var):
        raise ParameterError("initial prediction variances must be positive")
    if setup is Setup.WOM and len(set(pred_var)) > 1:
        raise ParameterError("WoM agents share a single prior variance")
    if pred_mean is None:
        pred_mean = params.a * params.prior_mean
    slots = tuple(AgentSlot(pred_mean=pred_mean, pred_var=p) for p in pred_var)
    return ChainState(k=k, setup=setup, slots=slots, params=params, phase=Phase.PRIOR)


# -- data-free variance recursion -------------------------------------------

def predict_variances(setup: Setup, post_vars: Sequence[float], a: float, q: float) -> list[float]:
    if setup is Setup.WOM:
        return [a * a * post_vars[-1] + q] * len(post_vars)
    return [a * a * p + q for p in post_vars]


def wom_noise_chain(p: float, s: Sequence[float]) -> tuple[list[float], list[float]]:
    """Direct WoM recursion for a shared prediction variance ``p``.

    Returns ``(gammas, eq_noise)`` where ``gammas[i]`` is the increment
    ``s^i (1 + r^{i-1}/p)^2`` (``None`` for agent 1) and ``eq_noise[i]`` the
    running total ``r^i = s^1 + sum gamma``.
    """
    r = s[0]
    gammas: list = [None]
    eq_noise = [r]
    for si in s[1:]:
        g = si * (1.0 + r / p) ** 2
        r = r + g
        gammas.append(g)
        eq_noise.append(r)
    return gammas, eq_noise


def correct_variances(setup: Setup, pred_vars: Sequence[float], s: Sequence[float]):
    """Gains, equivalent-noise variances, gammas and posterior variances of one sweep."""
    m = len(s)
    if setup is Setup.WOM:
        p = pred_vars[-1]
        gammas, eq_noise = wom_noise_chain(p, s)
        gains = [p / (p + r) for r in eq_noise]
        post_vars = [p * (1.0 - g) for g in gains]
        return gains, eq_noise, gammas, post_vars

    gains, eq_noise, post_vars = [], [], []
    r = s[0]
    for i in range(m):
        if i > 0:
            prev = gains[-1]
            if prev == 0.0:
                raise InvariantError(f"agent {i} has zero gain; cannot pre-process for agent {i + 1}")
            r = r + s[i] / (prev * prev)
        p = pred_vars[i]
        g = p / (p + r)
        gains.append(g)
        eq_noise.append(r)
        post_vars.append(p * (1.0 - g))
    return gains, eq_noise, [None] * m, post_vars


# -- relay blocks ------------------------------------------------------------

def post_process(post_mean: float, pred_mean: float, gain: float) -> float:
    """Strip the sender's prior from its posterior, leaving ``gain * y``."""
    return post_mean - (1.0 - gain) * pred_mean


def pre_process(received: float, sender_gain: float) -> float:
    """Undo the sender's gain scaling so the relay reads as ``x + noise``."""
    if sender_gain == 0.0:
        raise InvariantError("sender gain is zero; relayed signal carries no information")
    return received / sender_gain


# -- time steps --------------------------------------------------------------

def predict(state: ChainState) -> ChainState:
    """Advance a posterior-phase state at ``k`` to the prior phase at ``k + 1``."""
    if state.phase is not Phase.POSTERIOR:
        raise InvariantError("predict expects a posterior-phase state")
    p = state.params
    post_vars = state.column("post_var")
    pred_vars = predict_variances(state.setup, post_vars, p.a, p.q)
    if state.setup is Setup.WOM:
        pred_means = [p.a * state.slots[-1].post_mean] * state.m
    else:
        pred_means = [p.a * x for x in state.column("post_mean")]
    slots = tuple(AgentSlot(pred_mean=xm, pred_var=pv) for xm, pv in zip(pred_means, pred_vars))
    return ChainState(k=state.k + 1, setup=state.setup, slots=slots, params=p, phase=Phase.PRIOR)


def _correct(state: ChainState, x: float, v: Sequence[float]) -> ChainState:
    params = state.params
    if len(v) != state.m:
        raise ParameterError(f"expected {state.m} injected-noise values, got {len(v)}")
    pred_vars = state.column("pred_var")
    gains, eq_noise, gammas, post_vars = correct_variances(state.setup, pred_vars, params.s)

    slots = []
    y = x + v[0]
    for i, slot in enumerate(state.slots):
        if i > 0:
            sender = slots[-1]
            relayed = post_process(sender.post_mean, sender.pred_mean, sender.gain) + v[i]
            y = pre_process(relayed, sender.gain)
        g = gains[i]
        post_mean = slot.pred_mean + g * (y - slot.pred_mean)
        slots.append(replace(slot, post_mean=post_mean, post_var=post_vars[i], gain=g,
                             eq_noise_var=eq_noise[i], gamma=gammas[i], observation=y))
    return ChainState(k=state.k, setup=state.setup, slots=tuple(slots), params=params,
                      phase=Phase.POSTERIOR)


def _time_step(state: ChainState, x: float, v: Sequence[float]) -> ChainState:
    if state.phase is Phase.POSTERIOR:
        state = predict(state)
    return _correct(state, x, v)


def pp_time_step(state: ChainState, x: float, v: Sequence[float]) -> ChainState:
    """Run one PP step given the realized state ``x`` and injected noise ``v``."""
    if state.setup is not Setup.PP:
        raise ParameterError("pp_time_step needs a PP chain")
    return _time_step(state, x, v)


def wom_time_step(state: ChainState, x: float, v: Sequence[float]) -> ChainState:
    """Run one WoM step; agent m's posterior becomes everyone's next prior."""
    if state.setup is not Setup.WOM:
        raise ParameterError("wom_time_step needs a WoM chain")
    return _time_step(state, x, v)


def time_step(state: ChainState, x: float, v: Sequence[float]) -> ChainState:
    return _time_step(state, x, v)


def mean_update_identity_check(slot: AgentSlot, y: float, rel_tol: float = 1e-12) -> float:
    """Recompute the posterior mean from ``y`` and check it matches the slot."""
    if slot.gain is None:
        raise InvariantError("slot has no gain yet")
    value = slot.pred_mean + slot.gain * (y - slot.pred_mean)
    if not math.isclose(value, slot.post_mean, rel_tol=rel_tol, abs_tol=1e-300):
        raise InvariantError(f"posterior mean {slot.post_mean!r} does not match update {value!r}")
    return value
