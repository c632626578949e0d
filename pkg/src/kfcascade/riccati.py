"""Stationary variances of the PP and WoM cascades.

PP agents each settle on a scalar DARE whose noise variance is fixed by the
gains of their predecessors, so the cascade is solved agent by agent.

For WoM the last agent's prediction variance ``p`` feeds back through every
agent. Agent ``i``'s equivalent noise is a polynomial in ``1/p`` with positive
coefficients and degree ``2**i - 2`` (:class:`NoisePolynomial`), and the
variance map is ``T(p) = a^2 p f(p) / (p + f(p)) + q``. Its unique positive
fixed point lies in ``(q, q / (1 - a^2))`` and is found by bisection on
``f(p) = g(p)`` with ``g(p) = p (q - p) / (p (1 - a^2) - q)``; iterating ``T``
is offered as a cross-check and is a contraction with constant ``a^2`` when
``m = 2``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .chain import Setup
from .errors import ConvergenceError, InvariantError, ParameterError
from .model import ModelParams, validate

DEFAULT_TOL = 1e-12


@dataclass(frozen=True)
class DareProblem:
    a: float
    q: float
    r: float

    def __post_init__(self):
        if not -1.0 < self.a < 1.0:
            raise ParameterError("a must lie in (-1,1)")
        if not self.q > 0:
            raise ParameterError("q must be positive")
        if not self.r > 0:
            raise ParameterError("r must be positive")
        if not math.isfinite(self.r):
            raise ParameterError("r must be finite")

    def riccati_map(self, p: float) -> float:
        return self.a * self.a * p / (1.0 + p / self.r) + self.q

    def residual(self, p: float) -> float:
        """Relative residual of the DARE at ``p``."""
        return abs(self.riccati_map(p) - p) / p


def dare_closed_form(prob: DareProblem) -> float:
    """Positive root of ``p^2 + p (r (1 - a^2) - q) - q r = 0``."""
    a, q, r = prob.a, prob.q, prob.r
    b = r * (1.0 - a * a) - q
    disc = math.hypot(b, 2.0 * math.sqrt(q) * math.sqrt(r))
    # pick the cancellation-free form of the positive root
    if b <= 0:
        return (disc - b) / 2.0
    return 2.0 * q * r / (b + disc)


def dare_iterate(prob: DareProblem, p_init: float, tol: float = DEFAULT_TOL,
                 max_iter: int = 100_000) -> tuple[float, int]:
    """Iterate the Riccati recursion until ``|dp| <= tol * max(1, p)``.

    The update runs in the normalized coordinates ``p/r``, where one step is a
    power-method step on the 2x2 positive matrix ``[[a^2 + q/r, q/r], [1, 1]]``
    with normalization ``1 / (p/r + 1)``.

    Returns the settled value and the number of map applications needed to
    reach it (at least one).
    """
    if not p_init > 0:
        raise ParameterError("p_init must be positive")
    a2 = prob.a * prob.a
    r = prob.r
    qn = prob.q / r
    pn = p_init / r
    for n in range(1, max_iter + 1):
        beta = 1.0 / (pn + 1.0)
        nxt = beta * ((a2 + qn) * pn + qn)
        if abs(nxt - pn) * r <= tol * max(1.0, nxt * r):
            return nxt * r, max(1, n - 1)
        pn = nxt
    raise ConvergenceError(f"DARE iteration did not settle in {max_iter} steps",
                           last=pn * r, iterations=max_iter)


# -- reports -----------------------------------------------------------------

@dataclass(frozen=True)
class AgentFixedPoint:
    agent: int
    p_inf: float
    alpha_inf: float
    r_inf: float

    @property
    def p_post_inf(self) -> float:
        return self.p_inf * (1.0 - self.alpha_inf)


@dataclass(frozen=True)
class FixedPointReport:
    setup: Setup
    agents: tuple[AgentFixedPoint, ...]
    method: str
    iterations: int
    residual: float
    converged: bool = True
    notes: dict = field(default_factory=dict)

    @property
    def p_inf(self) -> list[float]:
        return [ag.p_inf for ag in self.agents]

    @property
    def alpha_inf(self) -> list[float]:
        return [ag.alpha_inf for ag in self.agents]

    @property
    def r_inf(self) -> list[float]:
        return [ag.r_inf for ag in self.agents]

    @property
    def p_post_inf(self) -> list[float]:
        return [ag.p_post_inf for ag in self.agents]


def pp_cascade_fixed_points(params: ModelParams) -> FixedPointReport:
    validate(params)
    agents = []
    r = params.s[0]
    worst = 0.0
    for i, si in enumerate(params.s):
        if i > 0:
            prev = agents[-1].alpha_inf
            r = r + si / prev / prev if prev > 0 else math.inf
            if not math.isfinite(r):
                raise ParameterError(f"equivalent noise of agent {i + 1} exceeds the double-precision range")
        prob = DareProblem(params.a, params.q, r)
        p = dare_closed_form(prob)
        worst = max(worst, prob.residual(p))
        agents.append(AgentFixedPoint(i + 1, p, p / (p + r), r))
    return FixedPointReport(Setup.PP, tuple(agents), method="closed_form",
                            iterations=0, residual=worst)


# -- WoM noise polynomial ----------------------------------------------------

@dataclass(frozen=True)
class NoisePolynomial:
    """Equivalent-noise variance of agent ``agent_index`` as ``sum c_j / p**j``."""

    agent_index: int
    coefficients: tuple[float, ...]

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, p):
        u = 1.0 / np.asarray(p, dtype=float)
        out = np.zeros_like(u)
        for c in reversed(self.coefficients):
            out = out * u + c
        return out if out.ndim else float(out)

    def derivative(self, p):
        """d/dp of the polynomial, i.e. ``-sum j c_j / p**(j+1)``."""
        u = 1.0 / np.asarray(p, dtype=float)
        out = np.zeros_like(u)
        for j in range(self.degree, 0, -1):
            out = out * u + j * self.coefficients[j]
        out = -out * u * u
        return out if out.ndim else float(out)


@lru_cache(maxsize=256)
def _noise_coefficients(s: tuple[float, ...]) -> tuple[float, ...]:
    # f_1 = s1; gamma_i(u) = s_i (1 + u f_{i-1}(u))^2; f_i = f_{i-1} + gamma_i, u = 1/p
    f = np.array([s[0]])
    for si in s[1:]:
        inner = np.concatenate(([1.0], f))
        gamma = si * np.convolve(inner, inner)
        padded = np.zeros_like(gamma)
        padded[: len(f)] = f
        f = padded + gamma
    return tuple(float(c) for c in f)


def build_noise_polynomial(params: ModelParams, i: int) -> NoisePolynomial:
    """Expand agent ``i``'s WoM equivalent-noise variance in powers of ``1/p``."""
    validate(params)
    if i < 2:
        raise ParameterError("noise polynomial is defined for agents i >= 2")
    if i > params.m:
        raise ParameterError(f"agent index {i} exceeds m = {params.m}")
    coeffs = _noise_coefficients(tuple(params.s[:i]))
    if len(coeffs) != 2 ** i - 1:
        raise InvariantError(f"polynomial for agent {i} has degree {len(coeffs) - 1}")
    if min(coeffs) <= 0:
        raise InvariantError("noise polynomial has a non-positive coefficient")
    return NoisePolynomial(i, coeffs)


def wom_noise_variance(p, params: ModelParams, i: int | None = None):
    """``f(p, i)``; agent 1 sees ``s^1`` regardless of ``p``."""
    i = params.m if i is None else i
    if i == 1:
        return params.s[0] if np.ndim(p) == 0 else np.full(np.shape(p), params.s[0])
    return build_noise_polynomial(params, i)(p)


def _map_without_q(p, params: ModelParams):
    f = wom_noise_variance(p, params)
    return params.a ** 2 * p / (1.0 + p / f)


def wom_map(p, params: ModelParams):
    """One WoM step of the last agent's prediction variance."""
    return _map_without_q(p, params) + params.q


# -- WoM fixed point ---------------------------------------------------------

class WomMethod(str, enum.Enum):
    BISECTION = "bisection_on_fg"
    CONTRACTION = "contraction_iteration"


def _fg_sign(p: float, params: ModelParams) -> float:
    """A value with the sign of ``f(p) - g(p)`` on ``(q, q/(1-a^2))``.

    With ``g = p (q - p) / (p (1 - a^2) - q)`` one has
    ``f - g = N / D`` and ``T(p) - p = -N / (p + f)``, where ``D < 0`` on the
    bracket, so both share a sign. The second form has no pole at the upper
    end of the bracket.
    """
    return float(wom_map(p, params)) - p


def _bisect_fg(params: ModelParams, tol: float) -> tuple[float, int]:
    q = params.q
    if params.a == 0:
        return q, 0
    lo, hi = q, params.stationary_var
    if not _fg_sign(lo, params) > 0:
        raise InvariantError("f - g has no sign change on (q, q/(1-a^2))")
    n = 0
    while hi - lo > tol * max(1.0, lo) and n < 400:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if _fg_sign(mid, params) > 0:
            lo = mid
        else:
            hi = mid
        n += 1
    return 0.5 * (lo + hi), n


def iterate_wom_map(params: ModelParams, p_init: float, tol: float = DEFAULT_TOL,
                    max_iter: int = 100_000) -> tuple[float, int, bool]:
    """Fixed-point iteration of ``T``; returns ``(last, iterations, converged)``."""
    p = float(p_init)
    if not p > 0:
        raise ParameterError("p_init must be positive")
    for n in range(1, max_iter + 1):
        nxt = float(wom_map(p, params))
        if abs(nxt - p) <= tol * max(1.0, nxt):
            return nxt, n, True
        p = nxt
    return p, max_iter, False


def _wom_report(params: ModelParams, p: float, method: str, iterations: int,
                converged: bool, notes: dict) -> FixedPointReport:
    eq_noise = [params.s[0]] + [float(build_noise_polynomial(params, i)(p))
                                for i in range(2, params.m + 1)]
    if not math.isfinite(eq_noise[-1]):
        raise ParameterError(f"equivalent noise of agent {params.m} exceeds the double-precision range")
    agents = tuple(AgentFixedPoint(i + 1, p, p / (p + r), r) for i, r in enumerate(eq_noise))
    residual = abs(float(wom_map(p, params)) - p) / p
    return FixedPointReport(Setup.WOM, agents, method=method, iterations=iterations,
                            residual=residual, converged=converged, notes=notes)


def wom_fixed_point(params: ModelParams, method=WomMethod.BISECTION, tol: float = DEFAULT_TOL,
                    p_init: float | None = None, max_iter: int = 100_000) -> FixedPointReport:
    """Shared stationary prediction variance of the WoM cascade.

    Bisection is authoritative. The contraction iteration is guaranteed only
    for ``m <= 2``; for larger ``m`` a converged iterate must match the
    bisection root to 1e-9, and a non-converged run is reported with
    ``converged=False`` and the bisection value.
    """
    validate(params)
    method = WomMethod(method)
    root, n_bisect = _bisect_fg(params, tol)
    if method is WomMethod.BISECTION:
        return _wom_report(params, root, method.value, n_bisect, True, {})

    start = params.a ** 2 * params.prior_var + params.q if p_init is None else p_init
    p, n, converged = iterate_wom_map(params, start, tol, max_iter)
    notes = {"p_init": start, "bisection_root": root}
    if not converged:
        return _wom_report(params, root, method.value, n, False, notes)
    if abs(p - root) > 1e-9 * max(1.0, root):
        raise InvariantError(f"iteration settled at {p!r} but the unique root is {root!r}")
    return _wom_report(params, p, method.value, n, True, notes)


def contraction_certificate(params: ModelParams, samples: int = 10_000, seed: int = 0,
                            lo: float = 1e-3, hi: float = 1e3) -> float:
    """Largest sampled ``|T(p') - T(p'')| / |p' - p''|`` over log-uniform pairs.

    ``q`` cancels in the difference and is left out so small separations do
    not lose digits; pairs closer than 1e-6 relative are skipped.
    """
    validate(params)
    rng = np.random.Generator(np.random.PCG64(seed))
    pairs = np.exp(rng.uniform(math.log(lo), math.log(hi), size=(samples, 2)))
    p1, p2 = pairs[:, 0], pairs[:, 1]
    keep = np.abs(p1 - p2) > 1e-6 * np.maximum(p1, p2)
    p1, p2 = p1[keep], p2[keep]
    if p1.size == 0:
        return 0.0
    dt = _map_without_q(p1, params) - _map_without_q(p2, params)
    return float(np.max(np.abs(dt) / np.abs(p1 - p2)))


def fixed_points(params: ModelParams, setup, **kwargs) -> FixedPointReport:
    setup = Setup.parse(setup)
    if setup is Setup.PP:
        return pp_cascade_fixed_points(params)
    return wom_fixed_point(params, **kwargs)
