import numpy as np
import pytest

from ehrenfest.classical import (
    ClassicalState,
    PhasePoint,
    SystemParams,
    TangentMatrix,
    integrate,
    rk4_step,
    step_path,
    step_trajectory,
)
from ehrenfest.errors import TrajectoryDivergedError
from ehrenfest.potentials import PolynomialPotential, StepPotential

FREE = PolynomialPotential((0.0,))


def initial_state(q=0.0, p=1.0):
    return ClassicalState(0.0, PhasePoint(q, p), TangentMatrix.identity())


class TestSystemParams:
    def test_c_is_derived(self):
        params = SystemParams(mu=1.0, hbar=0.01, b=0.1)
        assert params.c == pytest.approx(0.1)
        assert params.b * params.c == pytest.approx(params.hbar, rel=1e-15)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            SystemParams(mu=0.0, hbar=0.01, b=0.1)
        with pytest.raises(ValueError):
            SystemParams(mu=1.0, hbar=-1.0, b=0.1)


class TestRk4Step:
    def test_free_particle_one_step(self):
        # force-free tangent grows as m_qp = hbar t / (mu b^2); RK4 is
        # exact because the dynamics is polynomial in t of degree <= 1
        params = SystemParams(mu=1.0, hbar=0.01, b=0.1)
        st1 = rk4_step(initial_state(), FREE, params, 0.1)
        assert st1.phase.q == pytest.approx(0.1, abs=1e-15)
        assert st1.phase.p == pytest.approx(1.0, abs=1e-15)
        assert st1.tangent.m_qq == pytest.approx(1.0, abs=1e-15)
        assert st1.tangent.m_qp == pytest.approx(0.1, abs=1e-14)

    def test_determinant_preserved(self):
        params = SystemParams(mu=1.0, hbar=0.05, b=0.1)
        pot = PolynomialPotential((0.0, 0.3, 0.7, -0.2))
        state = initial_state(q=0.4, p=0.8)
        for _ in range(50):
            state = rk4_step(state, pot, params, 1e-2)
        assert state.tangent.det == pytest.approx(1.0, abs=1e-10)

    def test_divergence_raises(self):
        # inverted quartic ejects the trajectory in finite time
        params = SystemParams(mu=1.0, hbar=0.01, b=0.1)
        pot = PolynomialPotential((0.0, 0.0, 0.0, 0.0, -1.0))
        state = initial_state(q=1.0, p=1.0)
        with pytest.raises(TrajectoryDivergedError):
            for _ in range(5000):
                state = rk4_step(state, pot, params, 1e-2)

    def test_rejects_nonpositive_dt(self):
        params = SystemParams(mu=1.0, hbar=0.01, b=0.1)
        with pytest.raises(ValueError):
            rk4_step(initial_state(), FREE, params, 0.0)


class TestIntegrate:
    def test_linear_potential_momentum_exact(self):
        params = SystemParams(mu=1.0, hbar=0.01, b=0.1)
        pot = PolynomialPotential((0.0, 0.7))
        states = integrate(PhasePoint(0.0, 1.0), pot, params, 1.0, 1e-3)
        for st in states[:: len(states) // 7]:
            assert st.phase.p == pytest.approx(1.0 - 0.7 * st.t, abs=1e-13)

    def test_cubic_small_time_series(self):
        # q'' = -3 q^2 from (0, 1): q(t) = t - t^4/4 + t^7/28 - ...
        params = SystemParams(mu=1.0, hbar=0.01, b=0.1)
        pot = PolynomialPotential((0.0, 0.0, 0.0, 1.0))
        states = integrate(PhasePoint(0.0, 1.0), pot, params, 0.04, 1e-3)
        for st in states:
            t = st.t
            series = t - t**4 / 4.0 + t**7 / 28.0
            assert st.phase.q == pytest.approx(series, abs=1e-12)

    def test_harmonic_period_return(self):
        params = SystemParams(mu=1.0, hbar=0.01, b=0.1)
        pot = PolynomialPotential((0.0, 0.0, 0.5))  # omega = 1
        t_final = 2.0 * np.pi
        n = int(round(t_final / 1e-3))
        dt = t_final / n
        states = integrate(PhasePoint(0.5, 1.0), pot, params, t_final, dt)
        assert states[-1].phase.q == pytest.approx(0.5, abs=1e-6)
        assert states[-1].phase.p == pytest.approx(1.0, abs=1e-6)

    def test_harmonic_tangent_analytic(self):
        # variational system reduces to the same oscillator, so
        # m_qq = cos(w t) and m_qp = hbar sin(w t) / (mu w b^2)
        params = SystemParams(mu=1.0, hbar=0.01, b=0.1)
        pot = PolynomialPotential((0.0, 0.0, 0.5))
        states = integrate(PhasePoint(0.5, 1.0), pot, params, 2.0, 1e-3)
        scale = params.hbar / (params.mu * params.b**2)
        for st in states[:: len(states) // 9]:
            assert st.tangent.m_qq == pytest.approx(np.cos(st.t), abs=1e-8)
            assert st.tangent.m_qp == pytest.approx(scale * np.sin(st.t), abs=1e-8)

    def test_energy_conservation(self):
        params = SystemParams(mu=1.0, hbar=0.01, b=0.1)
        pot = PolynomialPotential((0.0, 0.0, 0.0, 0.5))
        states = integrate(PhasePoint(0.3, 1.0), pot, params, 0.5, 1e-3)

        def energy(st):
            return st.phase.p**2 / 2.0 + pot.value(st.phase.q)

        e0 = energy(states[0])
        drift = max(abs(energy(st) - e0) for st in states)
        assert drift <= 1e-8 * abs(e0)

    def test_tangent_matches_flow_jacobian(self):
        # finite-difference Jacobian of the flow map in scaled units
        params = SystemParams(mu=1.0, hbar=0.05, b=0.1)
        pot = PolynomialPotential((0.0, 0.1, 0.4, 0.3))
        q0, p0, t_final, dt = 0.2, 0.9, 1.0, 1e-3
        delta = 1e-6

        def endpoint(q, p):
            st = integrate(PhasePoint(q, p), pot, params, t_final, dt)[-1]
            return st.phase.q, st.phase.p

        eps_q = delta * params.b
        eps_p = delta * params.c
        qp, pp = endpoint(q0 + eps_q, p0)
        qm, pm = endpoint(q0 - eps_q, p0)
        fd_qq = (qp - qm) / (2.0 * eps_q)
        fd_pq = (pp - pm) / (2.0 * eps_q) * (params.b / params.c)
        qp, pp = endpoint(q0, p0 + eps_p)
        qm, pm = endpoint(q0, p0 - eps_p)
        fd_qp = (qp - qm) / (2.0 * eps_p) * (params.c / params.b)
        fd_pp = (pp - pm) / (2.0 * eps_p)

        m = integrate(PhasePoint(q0, p0), pot, params, t_final, dt)[-1].tangent
        assert m.m_qq == pytest.approx(fd_qq, abs=1e-4)
        assert m.m_qp == pytest.approx(fd_qp, abs=1e-4)
        assert m.m_pq == pytest.approx(fd_pq, abs=1e-4)
        assert m.m_pp == pytest.approx(fd_pp, abs=1e-4)

    def test_action_derivative_is_lagrangian(self):
        params = SystemParams(mu=1.0, hbar=0.01, b=0.1)
        pot = PolynomialPotential((0.0, 0.0, 0.5))
        dt = 1e-3
        states = integrate(PhasePoint(0.5, 1.0), pot, params, 1.0, dt)
        for i in range(1, len(states) - 1, 100):
            st = states[i]
            lagrangian = st.phase.p**2 / 2.0 - pot.value(st.phase.q)
            fd = (states[i + 1].action - states[i - 1].action) / (2.0 * dt)
            assert fd == pytest.approx(lagrangian, rel=1e-6, abs=1e-9)

    def test_rejects_incommensurate_times(self):
        params = SystemParams(mu=1.0, hbar=0.01, b=0.1)
        with pytest.raises(ValueError):
            integrate(PhasePoint(0.0, 1.0), FREE, params, 1.0, 3e-4)


class TestStepTrajectory:
    PARAMS = SystemParams(mu=1.0, hbar=0.05, b=0.1)
    POT = StepPotential(height=5.0, wall=1.0)

    def test_before_collision(self):
        ph, m_qq, m_qp = step_trajectory(0.0, 1.0, self.POT, self.PARAMS, 0.5)
        assert (ph.q, ph.p, m_qq) == (0.5, 1.0, 1.0)

    def test_boundary_belongs_to_incoming_branch(self):
        ph, m_qq, _ = step_trajectory(0.0, 1.0, self.POT, self.PARAMS, 1.0)
        assert (ph.q, ph.p, m_qq) == (1.0, 1.0, 1.0)

    def test_after_collision(self):
        ph, m_qq, m_qp = step_trajectory(0.0, 1.0, self.POT, self.PARAMS, 1.5)
        assert (ph.q, ph.p, m_qq) == (0.5, -1.0, -1.0)
        # hbar t m_qq / (mu b^2) = 0.05 * 1.5 * (-1) / 0.01
        assert m_qp == pytest.approx(-7.5, abs=1e-12)

    def test_implied_determinant_is_one(self):
        # free flight on both branches implies m_pq = 0, m_pp = m_qq
        for t in (0.2, 1.0, 1.25):
            _, m_qq, m_qp = step_trajectory(0.0, 1.0, self.POT, self.PARAMS, t)
            det = m_qq * m_qq - m_qp * 0.0
            assert det == 1.0

    def test_preconditions_rejected(self):
        with pytest.raises(ValueError):
            step_trajectory(0.0, -1.0, self.POT, self.PARAMS, 0.5)
        with pytest.raises(ValueError):
            step_trajectory(2.0, 1.0, self.POT, self.PARAMS, 0.5)
        with pytest.raises(ValueError):
            # p0 >= sqrt(2 mu V0) would surmount the barrier
            step_trajectory(0.0, 4.0, self.POT, self.PARAMS, 0.5)

    def test_vectorized_path_matches_scalar(self):
        times = np.array([0.0, 0.4, 1.0, 1.2])
        q, p, m_qq, m_qp = step_path(0.0, 1.0, self.POT, self.PARAMS, times)
        for i, t in enumerate(times):
            ph, mq, mp = step_trajectory(0.0, 1.0, self.POT, self.PARAMS, t)
            assert (q[i], p[i], m_qq[i]) == (ph.q, ph.p, mq)
            assert m_qp[i] == pytest.approx(mp, abs=1e-15)
