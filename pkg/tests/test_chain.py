import math

import numpy as np
import pytest

from kfcascade import chain as ch
from kfcascade.chain import AgentSlot, Phase, PriorConvention, Setup
from kfcascade.errors import InvariantError, ParameterError
from kfcascade.model import ModelParams, simulate

BASE = ModelParams()
# closed-form stationary values for the baseline parameters, from mpmath at 40 digits
P1_INF = 1.548349158007151
ALPHA1_INF = 0.6075890947447658
P_WOM_INF = 2.796780707194964


def run(params, setup, traj, convention=PriorConvention.POSTERIOR_AT_0):
    state = ch.init_chain(params, setup, convention)
    states = []
    for k in range(traj.horizon):
        state = ch.time_step(state, float(traj.states[k]), traj.injected_noise[k].tolist())
        states.append(state)
    return states


class TestInit:
    def test_prediction_at_1_matches_hand_value(self):
        state = ch.init_chain(BASE, Setup.PP, PriorConvention.PREDICTION_AT_1)
        assert state.k == 1 and state.phase is Phase.PRIOR
        for slot in state.slots:
            assert slot.pred_var == pytest.approx(3.7075, abs=1e-12)
            assert slot.pred_mean == pytest.approx(23.75)
            assert slot.gain is None and slot.eq_noise_var is None

    def test_a_zero_forgets_prior_variance(self):
        p = ModelParams(a=0.0, q=1.0, s=(1.0,), prior_var=5.0)
        state = ch.init_chain(p, Setup.PP, PriorConvention.PREDICTION_AT_1)
        assert state.slots[0].pred_var == 1.0

    @pytest.mark.parametrize("setup", [Setup.PP, Setup.WOM])
    def test_conventions_agree(self, setup):
        a = ch.predict(ch.init_chain(BASE, setup, PriorConvention.POSTERIOR_AT_0))
        b = ch.init_chain(BASE, setup, PriorConvention.PREDICTION_AT_1)
        assert a == b
        traj = simulate(BASE, 30, 1)
        assert run(BASE, setup, traj, PriorConvention.POSTERIOR_AT_0) == \
            run(BASE, setup, traj, PriorConvention.PREDICTION_AT_1)

    def test_chain_from_prediction_rejects_bad_input(self):
        with pytest.raises(ParameterError):
            ch.chain_from_prediction(BASE, Setup.PP, [1.0, 2.0])
        with pytest.raises(ParameterError):
            ch.chain_from_prediction(BASE, Setup.WOM, [1.0, 2.0, 3.0])
        with pytest.raises(ParameterError):
            ch.chain_from_prediction(BASE, Setup.PP, 0.0)


class TestPP:
    def test_wrong_setup_rejected(self):
        with pytest.raises(ParameterError):
            ch.pp_time_step(ch.init_chain(BASE, Setup.WOM), 0.0, [0.0] * 3)
        with pytest.raises(ParameterError):
            ch.wom_time_step(ch.init_chain(BASE, Setup.PP), 0.0, [0.0] * 3)

    def test_noise_length_checked(self):
        with pytest.raises(ParameterError):
            ch.pp_time_step(ch.init_chain(BASE, Setup.PP), 0.0, [0.0])

    def test_noiseless_relay_recovers_state(self):
        p = ModelParams(s=(1.0, 1.0))
        state = ch.init_chain(p, Setup.PP)
        for x in (24.0, 21.5, 23.3):
            state = ch.pp_time_step(state, x, [0.0, 0.0])
            y2 = state.slots[1].observation
            assert abs(y2 - x) <= 10 * math.ulp(x)

    def test_equivalent_noise_at_stationary_gain(self):
        # r^2 = s^1 + s^2 / alpha^2 evaluated at agent 1's stationary gain
        assert 1 + 1 / ALPHA1_INF ** 2 == pytest.approx(3.708819450912848, rel=1e-12)
        gains, r, _, _ = ch.correct_variances(Setup.PP, [P1_INF, 2.0, 2.0], (1.0, 1.0, 1.0))
        assert gains[0] == pytest.approx(ALPHA1_INF, rel=1e-12)
        assert r[1] == pytest.approx(3.709, abs=5e-4)

    def test_stationary_prediction_is_fixed(self):
        post = P1_INF * (1 - ALPHA1_INF)
        pred = ch.predict_variances(Setup.PP, [post], 0.95, 1.0)
        assert pred[0] == pytest.approx(P1_INF, rel=1e-13)
        assert round(pred[0], 2) == 1.55

    def test_step_matches_hand_computed_update(self):
        p = ModelParams(a=0.5, q=2.0, s=(1.0, 4.0), prior_mean=2.0, prior_var=1.0)
        state = ch.pp_time_step(ch.init_chain(p, Setup.PP), 3.0, [0.5, -2.0])
        # agent 1: pred var 0.25 + 2 = 2.25, gain 2.25/3.25, obs 3.5
        g1 = 2.25 / 3.25
        m1 = 1.0 + g1 * (3.5 - 1.0)
        s1 = state.slots[0]
        assert (s1.pred_mean, s1.pred_var) == (1.0, 2.25)
        assert s1.gain == pytest.approx(g1) and s1.post_mean == pytest.approx(m1)
        # agent 2 sees y2 = (m1 - (1-g1) 1.0 - 2.0) / g1 = 3.5 - 2/g1, noise var 1 + 4/g1^2
        r2 = 1 + 4 / g1 ** 2
        g2 = 2.25 / (2.25 + r2)
        s2 = state.slots[1]
        assert s2.observation == pytest.approx(3.5 - 2.0 / g1)
        assert s2.eq_noise_var == pytest.approx(r2)
        assert s2.gain == pytest.approx(g2)
        assert s2.post_var == pytest.approx(2.25 * (1 - g2))
        assert s2.gamma is None


class TestWoM:
    def test_single_agent_matches_pp(self):
        p = ModelParams(s=(1.3,))
        traj = simulate(p, 100, 4)
        pp = run(p, Setup.PP, traj)
        wom = run(p, Setup.WOM, traj)
        for a, b in zip(pp, wom):
            assert a.slots == b.slots

    def test_shared_prior_after_every_step(self):
        for state in run(BASE, Setup.WOM, simulate(BASE, 100, 8)):
            assert len({s.pred_mean for s in state.slots}) == 1
            assert len({s.pred_var for s in state.slots}) == 1

    def test_gamma_formula(self):
        gammas, r = ch.wom_noise_chain(2.79, (1.0, 1.0))
        assert gammas[1] == pytest.approx((1 + 1 / 2.79) ** 2, rel=1e-14)
        assert gammas[1] == pytest.approx(1.8453128813864, rel=1e-12)
        assert r[1] == pytest.approx(2 + 2 / 2.79 + 1 / 2.79 ** 2, rel=1e-14)

    def test_gamma_equals_pp_style_increment(self):
        # s^i / alpha_{i-1}^2 with a shared prior is the same quantity as gamma
        p = 2.4
        gains, r, gammas, _ = ch.correct_variances(Setup.WOM, [p] * 4, (1.0, 0.5, 2.0, 0.7))
        for i in range(1, 4):
            assert gammas[i] == pytest.approx((1.0, 0.5, 2.0, 0.7)[i] / gains[i - 1] ** 2, rel=1e-13)
            assert r[i] == pytest.approx(1.0 + sum(gammas[1:i + 1]), rel=1e-14)

    def test_stationary_shared_variance(self):
        state = ch.chain_from_prediction(BASE, Setup.WOM, 3.7075)
        pred = state.column("pred_var")
        for _ in range(300):
            _, _, _, post = ch.correct_variances(Setup.WOM, pred, BASE.s)
            pred = ch.predict_variances(Setup.WOM, post, BASE.a, BASE.q)
        assert pred == pytest.approx([P_WOM_INF] * 3, rel=1e-12)
        assert abs(pred[0] - 2.79) <= 0.01


class TestIdentity:
    def test_zero_gain(self):
        slot = AgentSlot(pred_mean=3.0, pred_var=1.0, post_mean=3.0, gain=0.0)
        assert ch.mean_update_identity_check(slot, 10.0) == 3.0

    def test_full_gain(self):
        slot = AgentSlot(pred_mean=3.0, pred_var=1.0, post_mean=10.0, gain=1.0)
        assert ch.mean_update_identity_check(slot, 10.0) == 10.0

    def test_stationary_gain_example(self):
        slot = AgentSlot(pred_mean=23.75, pred_var=P1_INF, post_mean=23.75 + 0.6076 * 1.25, gain=0.6076)
        assert ch.mean_update_identity_check(slot, 25.0) == pytest.approx(24.5095, abs=1e-12)

    def test_mismatch_raises(self):
        slot = AgentSlot(pred_mean=0.0, pred_var=1.0, post_mean=1.0, gain=0.5)
        with pytest.raises(InvariantError):
            ch.mean_update_identity_check(slot, 1.0)

    def test_holds_on_simulated_steps(self):
        for state in run(BASE, Setup.PP, simulate(BASE, 50, 2)):
            for slot in state.slots:
                ch.mean_update_identity_check(slot, slot.observation)


def test_zero_sender_gain_is_guarded():
    with pytest.raises(InvariantError):
        ch.pre_process(1.0, 0.0)


@pytest.mark.parametrize("setup", [Setup.PP, Setup.WOM])
def test_variances_do_not_depend_on_data(setup):
    a = run(BASE, setup, simulate(BASE, 60, 1))
    b = run(BASE, setup, simulate(BASE, 60, 2))
    for sa, sb in zip(a, b):
        for name in ("pred_var", "post_var", "gain", "eq_noise_var", "gamma"):
            assert sa.column(name) == sb.column(name)
    assert [s.column("post_mean") for s in a] != [s.column("post_mean") for s in b]


@pytest.mark.parametrize("setup", [Setup.PP, Setup.WOM])
def test_step_invariants(setup):
    for state in run(BASE, setup, simulate(BASE, 200, 6)):
        shared = state.slots[-1].pred_var
        for slot in state.slots:
            used = slot.pred_var if setup is Setup.PP else shared
            assert 0 < slot.gain < 1
            assert slot.post_var == pytest.approx(used * (1 - slot.gain), rel=1e-15)
            assert slot.gain == pytest.approx(used / (used + slot.eq_noise_var), rel=1e-15)
            assert slot.post_var < used
        r = state.column("eq_noise_var")
        assert all(lo < hi for lo, hi in zip(r, r[1:]))
        if setup is Setup.WOM:
            assert r[1:] == pytest.approx([1.0 + sum(state.column("gamma")[1:i + 1]) for i in range(1, 3)],
                                          rel=1e-14)


def test_noiseless_cascade_recovers_state_for_every_agent():
    state = ch.init_chain(BASE, Setup.PP)
    x = 25.0
    for k in range(200):
        x = 0.95 * x + math.sin(k)
        state = ch.pp_time_step(state, x, [0.0] * 3)
        for slot in state.slots:
            # rounding scale is set by the operands of the relay arithmetic
            scale = max(abs(x), abs(slot.pred_mean))
            assert abs(slot.observation - x) <= 10 * math.ulp(scale)
    assert np.isfinite(state.column("post_mean")).all()
