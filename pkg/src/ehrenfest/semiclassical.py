"""Gaussian-smeared forces and the semiclassical path construction.

The propagated Gaussian has density

    |psi(x, t)|^2 = exp(-(x - q_c)^2 / sigma^2) / (sqrt(pi) sigma),

with width sigma(t) = b sqrt(m_qq^2 + m_qp^2).  The semiclassical
acceleration is the classical force averaged against that density; it
reduces to the classical acceleration as sigma -> 0 and is evaluated by
three routes that check each other:

* a closed-form finite sum over the all-real Hermite kernel, for
  polynomial potentials;
* adaptive Simpson quadrature of an arbitrary force against the
  Gaussian, the independent reference;
* a closed form for the step potential, where the smeared force is just
  the density at the wall times the step height.

Because a_sc depends only on precomputed classical inputs (q_c, sigma),
the semiclassical momentum and position are plain quadratures of the
sampled acceleration, not an ODE solve.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .errors import NonNormalizableError, QuadratureError
from .potentials import hermite_real

__all__ = [
    "WidthState",
    "HellerState",
    "SemiclassicalPath",
    "sigma",
    "width_state",
    "accel_hermite",
    "accel_quadrature",
    "accel_step",
    "accel_series",
    "integrate_path",
    "heller_state",
    "heller_states",
    "heller_wavefunction",
]


@dataclass(frozen=True)
class WidthState:
    """Instantaneous Gaussian width and center."""

    sigma: float
    q_c: float

    def __post_init__(self):
        if not (np.isfinite(self.sigma) and self.sigma > 0):
            raise ValueError("sigma must be positive and finite")


@dataclass(frozen=True)
class SemiclassicalPath:
    """Aligned time series of smeared acceleration and integrated path."""

    times: np.ndarray
    a_sc: np.ndarray
    p_sc: np.ndarray
    q_sc: np.ndarray


@dataclass(frozen=True)
class HellerState:
    """Complex width, prefactor, and phase data of the evolved Gaussian."""

    zeta: complex
    prefactor: complex
    q_c: float
    p_c: float
    action: float


def sigma(params, m_qq, m_qp):
    """Instantaneous position width b * sqrt(m_qq^2 + m_qp^2)."""
    return params.b * np.hypot(m_qq, m_qp)


def width_state(state, params):
    """Width/center pair for a single classical state."""
    m = state.tangent
    return WidthState(sigma=float(sigma(params, m.m_qq, m.m_qp)), q_c=state.phase.q)


def accel_hermite(pot, q_c, sig, mu):
    """Smeared acceleration of a polynomial potential, in closed form.

    Each monomial alpha_n x^n contributes
    -n alpha_n (sigma/2)^(n-1) R_{n-1}(q_c / sigma) / mu, where R is the
    all-real Hermite kernel.  Broadcasts over q_c and sig.
    """
    q_c = np.asarray(q_c, dtype=float)
    s = np.asarray(sig, dtype=float)
    y = q_c / s
    total = np.zeros(np.broadcast(q_c, s).shape)
    for n in range(1, pot.degree + 1):
        alpha = pot.coefficients[n]
        if alpha == 0.0:
            continue
        total = total + n * alpha * (0.5 * s) ** (n - 1) * hermite_real(n - 1, y)
    return (-total / mu)[()]


def _simpson_panel(f, a, fa, b, fb):
    m = 0.5 * (a + b)
    fm = f(m)
    return m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb)


def _refine(f, a, fa, b, fb, m, fm, whole, eps, depth):
    lm, flm, left = _simpson_panel(f, a, fa, m, fm)
    rm, frm, right = _simpson_panel(f, m, fm, b, fb)
    delta = left + right - whole
    if abs(delta) <= 15.0 * eps:
        return left + right + delta / 15.0
    if depth <= 0:
        raise QuadratureError("adaptive Simpson hit the depth cap before converging")
    return _refine(f, a, fa, m, fm, lm, flm, left, 0.5 * eps, depth - 1) + _refine(
        f, m, fm, b, fb, rm, frm, right, 0.5 * eps, depth - 1
    )


def accel_quadrature(force, q_c, sig, mu, rtol=1.0e-10, max_depth=40):
    """Smeared acceleration of an arbitrary force by adaptive Simpson.

    Integrates force(x) against the Gaussian density over
    [q_c - 8 sigma, q_c + 8 sigma]; the Gaussian mass outside that
    window is below 1e-27, negligible against the tolerance.

    Parameters
    ----------
    force : callable
        Force field -dV/dx, evaluated pointwise.
    rtol : float
        Relative tolerance of the refinement (with a unit absolute
        floor, matching the oracle-equivalence contract).
    max_depth : int
        Maximum bisection depth; exceeding it raises QuadratureError.
    """
    s = float(sig)
    qc = float(q_c)
    if not s > 0:
        raise ValueError("sigma must be positive")
    scale = 1.0 / (math.sqrt(math.pi) * s)

    def integrand(x):
        u = (x - qc) / s
        return scale * math.exp(-u * u) * force(x)

    a, b = qc - 8.0 * s, qc + 8.0 * s
    fa, fb = integrand(a), integrand(b)
    m, fm, whole = _simpson_panel(integrand, a, fa, b, fb)
    eps = rtol * (1.0 + abs(whole))
    return _refine(integrand, a, fa, b, fb, m, fm, whole, eps, max_depth) / mu


def accel_step(pot, q_c, sig, mu):
    """Smeared acceleration of the step: density at the wall times height.

    a_sc = -V0 exp(-((wall - q_c)/sigma)^2) / (mu sqrt(pi) sigma).
    Broadcasts over q_c and sig.
    """
    q_c = np.asarray(q_c, dtype=float)
    s = np.asarray(sig, dtype=float)
    u = (pot.wall - q_c) / s
    return (-(pot.height / mu) * np.exp(-u * u) / (np.sqrt(np.pi) * s))[()]


def accel_series(pot, q_c, sig, mu):
    """Leading width correction to the classical acceleration.

    a_c - sigma^2 V'''(q_c) / (4 mu): the first two terms of the
    expansion of the smeared force in powers of sigma^2.  Diagnostic
    only; the closed forms above are the primary path.
    """
    s = np.asarray(sig, dtype=float)
    a_c = -pot.derivative(q_c, 1) / mu
    return (a_c - s**2 / (4.0 * mu) * pot.derivative(q_c, 3))[()]


def integrate_path(times, a_sc, q0, p0, mu):
    """Integrate a sampled acceleration into momentum and position paths.

    p_sc(t) = p0 + mu * int a_sc dt' and q_sc(t) = q0 + int p_sc dt'/mu,
    both by composite trapezoid on the (uniform) sample grid.
    """
    t = np.asarray(times, dtype=float)
    a = np.asarray(a_sc, dtype=float)
    if t.ndim != 1 or t.size < 2:
        raise ValueError("need at least two uniformly spaced samples")
    if a.shape != t.shape:
        raise ValueError("times and a_sc must be aligned")
    steps = np.diff(t)
    if steps.min() <= 0 or steps.max() - steps.min() > 1e-9 * steps.max():
        raise ValueError("sample times must be uniform and increasing")
    p = p0 + mu * cumulative_trapezoid(a, t, initial=0.0)
    q = q0 + cumulative_trapezoid(p, t, initial=0.0) / mu
    return SemiclassicalPath(times=t, a_sc=a, p_sc=p, q_sc=q)


def heller_state(state, params, prev=None):
    """Complex width and continuous prefactor of the evolved Gaussian.

    zeta = (m_pp - i m_pq) / (m_qq + i m_qp); its real part equals
    det m / (m_qq^2 + m_qp^2), so a symplectic tangent guarantees a
    normalizable Gaussian.  The prefactor involves the square root of
    m_qq + i m_qp: the principal branch is taken, and if ``prev`` (the
    HellerState of the previous sample along a trajectory) is given,
    the sign is flipped whenever the naive root jumps by more than
    pi/2 in phase, keeping the prefactor continuous across branch cuts.

    Raises
    ------
    NonNormalizableError
        If Re(zeta) <= 0, which indicates a corrupted tangent matrix.
    """
    m = state.tangent
    w = complex(m.m_qq, m.m_qp)
    if w == 0:
        raise NonNormalizableError("m_qq + i m_qp vanished")
    zeta = complex(m.m_pp, -m.m_pq) / w
    if zeta.real <= 0:
        raise NonNormalizableError(
            f"Re(zeta) = {zeta.real:.3g} <= 0: tangent matrix is not symplectic"
        )
    prefactor = math.pi ** (-0.25) * params.b ** (-0.5) / np.sqrt(w)
    if prev is not None and (prefactor * np.conj(prev.prefactor)).real < 0.0:
        prefactor = -prefactor
    return HellerState(
        zeta=zeta,
        prefactor=complex(prefactor),
        q_c=state.phase.q,
        p_c=state.phase.p,
        action=state.action,
    )


def heller_states(states, params):
    """Map classical states to HellerStates with branch continuity."""
    out = []
    prev = None
    for state in states:
        prev = heller_state(state, params, prev=prev)
        out.append(prev)
    return out


def heller_wavefunction(x, state, params, initial=None, prev=None):
    """Evolved-Gaussian amplitude at ``x`` for one classical state.

    The phase carries the classical action, the local momentum ramp
    p_c (x - q_c), and, when the trajectory's ``initial`` phase point is
    supplied, the constant q0 p0 / 2 that makes the t = 0 limit coincide
    with the coherent-state wavefunction exactly.  ``prev`` threads the
    branch-continuity tracking of :func:`heller_state`.
    """
    hs = heller_state(state, params, prev=prev)
    x = np.asarray(x, dtype=float)
    dx = x - hs.q_c
    phase = hs.action + hs.p_c * dx
    if initial is not None:
        phase = phase + 0.5 * initial.q * initial.p
    envelope = np.exp(-hs.zeta * dx**2 / (2.0 * params.b**2) + 1j * phase / params.hbar)
    return (hs.prefactor * envelope)[()]
