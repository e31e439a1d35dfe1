"""Classical trajectories, linear stability, and the classical action.

The tangent matrix is propagated in the scaled coordinates (dq/b, dp/c),
which makes its entries dimensionless and keeps det m = 1 along any
Hamiltonian flow.  Polynomial potentials are integrated with a
fixed-step classical RK4 over the 7-component state

    (q, p, m_qq, m_qp, m_pq, m_pp, S),

where S is the action integral of the Lagrangian.  The step potential
is never integrated through its discontinuity: the bounce trajectory
and the two tangent elements it determines are evaluated in closed
form.
"""

from dataclasses import dataclass

import numpy as np

from .errors import TrajectoryDivergedError
from .potentials import StepPotential

__all__ = [
    "SystemParams",
    "PhasePoint",
    "TangentMatrix",
    "ClassicalState",
    "rk4_step",
    "integrate",
    "step_trajectory",
    "step_path",
]


@dataclass(frozen=True)
class SystemParams:
    """Mass and the coherent-state scale parameters.

    The momentum scale ``c`` is always derived as ``hbar / b`` so the
    constraint b*c = hbar holds exactly; it is never stored.
    """

    mu: float
    hbar: float
    b: float

    def __post_init__(self):
        for name in ("mu", "hbar", "b"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be positive and finite")

    @property
    def c(self):
        return self.hbar / self.b


@dataclass(frozen=True)
class PhasePoint:
    q: float
    p: float

    def __post_init__(self):
        if not (np.isfinite(self.q) and np.isfinite(self.p)):
            raise ValueError("phase-space coordinates must be finite")


@dataclass(frozen=True)
class TangentMatrix:
    """Linearization of the flow map in (dq/b, dp/c) coordinates."""

    m_qq: float
    m_qp: float
    m_pq: float
    m_pp: float

    @property
    def det(self):
        return self.m_qq * self.m_pp - self.m_qp * self.m_pq

    @classmethod
    def identity(cls):
        return cls(1.0, 0.0, 0.0, 1.0)


@dataclass(frozen=True)
class ClassicalState:
    t: float
    phase: PhasePoint
    tangent: TangentMatrix
    action: float = 0.0


def _pack(state):
    return np.array(
        [
            state.phase.q,
            state.phase.p,
            state.tangent.m_qq,
            state.tangent.m_qp,
            state.tangent.m_pq,
            state.tangent.m_pp,
            state.action,
        ]
    )


def _unpack(t, y):
    return ClassicalState(
        t=t,
        phase=PhasePoint(q=y[0], p=y[1]),
        tangent=TangentMatrix(m_qq=y[2], m_qp=y[3], m_pq=y[4], m_pp=y[5]),
        action=y[6],
    )


def _derivatives(y, pot, params):
    q, p = y[0], y[1]
    dv = pot.derivative(q, 1)
    d2v = pot.derivative(q, 2)
    a_qp = params.hbar / (params.mu * params.b**2)
    a_pq = -(params.b / params.c) * d2v
    return np.array(
        [
            p / params.mu,
            -dv,
            a_qp * y[4],
            a_qp * y[5],
            a_pq * y[2],
            a_pq * y[3],
            p * p / (2.0 * params.mu) - pot.value(q),
        ]
    )


def _rk4_kernel(y, pot, params, dt):
    k1 = _derivatives(y, pot, params)
    k2 = _derivatives(y + 0.5 * dt * k1, pot, params)
    k3 = _derivatives(y + 0.5 * dt * k2, pot, params)
    k4 = _derivatives(y + dt * k3, pot, params)
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def rk4_step(state, pot, params, dt):
    """Advance the coupled (trajectory, tangent, action) system one step.

    The equations of motion are

        dq/dt = p / mu,              dp/dt = -V'(q),
        dm/dt = A(t) m   with  A = [[0, hbar/(mu b^2)], [-(b/c) V''(q), 0]],
        dS/dt = p^2 / (2 mu) - V(q).

    Raises
    ------
    TrajectoryDivergedError
        If any state component becomes non-finite.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    y = _rk4_kernel(_pack(state), pot, params, dt)
    if not np.all(np.isfinite(y)):
        raise TrajectoryDivergedError(
            f"trajectory diverged near t = {state.t + dt:.6g}"
        )
    return _unpack(state.t + dt, y)


def integrate(initial, pot, params, t_final, dt):
    """Integrate from an identity tangent and zero action.

    Returns the list of states at t = 0, dt, 2*dt, ..., t_final.  The
    step doubles as the output sampling interval, so t_final must be an
    integer multiple of dt.
    """
    if t_final <= 0 or dt <= 0:
        raise ValueError("t_final and dt must be positive")
    n_steps = int(round(t_final / dt))
    if abs(n_steps * dt - t_final) > 1e-9 * max(1.0, abs(t_final)):
        raise ValueError("t_final must be an integer multiple of dt")

    y = _pack(ClassicalState(0.0, initial, TangentMatrix.identity()))
    states = [_unpack(0.0, y)]
    for k in range(1, n_steps + 1):
        y = _rk4_kernel(y, pot, params, dt)
        if not np.all(np.isfinite(y)):
            raise TrajectoryDivergedError(f"trajectory diverged near t = {k * dt:.6g}")
        states.append(_unpack(k * dt, y))
    return states


def _check_step_preconditions(q0, p0, pot, params):
    if p0 <= 0:
        raise ValueError("step scenarios require p0 > 0")
    if q0 >= pot.wall:
        raise ValueError("step scenarios require q0 < wall")
    p_max = np.sqrt(2.0 * params.mu * pot.height)
    if p0 >= p_max:
        raise ValueError(
            f"step scenarios require p0 < sqrt(2 mu V0) = {p_max:.6g}"
        )


def step_trajectory(q0, p0, pot, params, t):
    """Closed-form bounce off the step: phase point and tangent elements.

    The packet travels freely, reflects elastically at the wall at
    t0 = mu (wall - q0) / p0, and travels freely back.  Both free
    segments carry m_qq = +/-1 and m_qp = hbar t m_qq / (mu b^2); the
    boundary instant t = t0 belongs to the incoming branch.  Only these
    two tangent elements are defined for the discontinuous potential
    (free flight implies m_pq = 0 and m_pp = m_qq).

    Returns
    -------
    (PhasePoint, m_qq, m_qp)
    """
    if not isinstance(pot, StepPotential):
        raise TypeError("step_trajectory requires a StepPotential")
    _check_step_preconditions(q0, p0, pot, params)
    mu = params.mu
    t0 = mu * (pot.wall - q0) / p0
    if t <= t0:
        q, p, m_qq = q0 + p0 * t / mu, p0, 1.0
    else:
        q, p, m_qq = pot.wall - p0 * (t - t0) / mu, -p0, -1.0
    m_qp = params.hbar * t * m_qq / (mu * params.b**2)
    return PhasePoint(q=q, p=p), m_qq, m_qp


def step_path(q0, p0, pot, params, times):
    """Vectorized form of :func:`step_trajectory` over a time array.

    Returns (q, p, m_qq, m_qp) arrays aligned with ``times``.
    """
    _check_step_preconditions(q0, p0, pot, params)
    t = np.asarray(times, dtype=float)
    mu = params.mu
    t0 = mu * (pot.wall - q0) / p0
    incoming = t <= t0
    q = np.where(incoming, q0 + p0 * t / mu, pot.wall - p0 * (t - t0) / mu)
    p = np.where(incoming, p0, -p0)
    m_qq = np.where(incoming, 1.0, -1.0)
    m_qp = params.hbar * t * m_qq / (mu * params.b**2)
    return q, p, m_qq, m_qp
