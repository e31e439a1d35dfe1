"""Scenario configuration, run orchestration, and result serialization.

A scenario bundles a potential, the initial phase point, the width and
scale parameters, and the numerical controls for the three path
families.  Scenarios load from plain-text config files with
``[scenario]``, ``[numerics]``, and ``[quantum]`` sections of
``key = value`` lines; a handful of named presets are built in.

A run produces a PathRecord: the aligned time series of classical
trajectory and tangent entries, Gaussian width, smeared acceleration,
the integrated semiclassical path, and (optionally) the grid-propagated
quantum expectations.  Records serialize to CSV; run summaries to flat
JSON; and the report path renders a figure of the three q(t) curves
next to the delimited output.
"""

import configparser
import io
import json
from dataclasses import asdict, dataclass

import numpy as np

from . import quantum, semiclassical
from .classical import SystemParams, PhasePoint, integrate, step_path
from .errors import ComparisonError, ConfigError, NumericalError
from .potentials import PolynomialPotential, StepPotential

__all__ = [
    "QuantumSpec",
    "Scenario",
    "PathRecord",
    "ComparisonSummary",
    "PRESET_NAMES",
    "preset",
    "load_scenario",
    "loads_scenario",
    "dumps_scenario",
    "dump_scenario",
    "run_scenario",
    "compare",
    "emit",
    "read_record_csv",
]

CSV_COLUMNS = (
    "t",
    "q_c",
    "p_c",
    "m_qq",
    "m_qp",
    "m_pq",
    "m_pp",
    "det_m",
    "sigma",
    "a_sc",
    "q_sc",
    "p_sc",
    "q_qm",
    "p_qm",
    "norm_qm",
)

# drift levels treated as numerical failure (well beyond healthy runs)
DET_DRIFT_LIMIT = 1.0e-6
NORM_DRIFT_LIMIT = 1.0e-6


@dataclass(frozen=True)
class QuantumSpec:
    """Grid and step controls of the quantum reference run."""

    x_min: float = -4.0
    x_max: float = 3.0
    n_points: int = 4096
    dt_qm: float = 1.0e-4


@dataclass(frozen=True)
class Scenario:
    potential: object
    q0: float
    p0: float
    params: SystemParams
    t_final: float
    dt: float = 1.0e-3
    quantum: QuantumSpec | None = QuantumSpec()


@dataclass
class PathRecord:
    """Aligned per-sample series of the three path families.

    Quantum columns are None when the reference run is disabled.
    """

    t: np.ndarray
    q_c: np.ndarray
    p_c: np.ndarray
    m_qq: np.ndarray
    m_qp: np.ndarray
    m_pq: np.ndarray
    m_pp: np.ndarray
    det_m: np.ndarray
    sigma: np.ndarray
    a_sc: np.ndarray
    q_sc: np.ndarray
    p_sc: np.ndarray
    q_qm: np.ndarray | None = None
    p_qm: np.ndarray | None = None
    norm_qm: np.ndarray | None = None

    @property
    def has_quantum(self):
        return self.q_qm is not None


@dataclass(frozen=True)
class ComparisonSummary:
    """Deviation maxima, refined turning times, and initial accelerations."""

    max_dev_semiclassical: float
    max_dev_classical: float
    turning_time_classical: float
    turning_time_semiclassical: float
    turning_time_quantum: float
    a_sc_initial: float
    a_quant_initial: float
    a_classical_initial: float

    def to_dict(self):
        return asdict(self)


# ----------------------------------------------------------------------
# configuration


_SCENARIO_KEYS = {"potential", "coefficients", "v0", "wall", "q0", "p0", "mu", "hbar", "b"}
_NUMERICS_KEYS = {"t_final", "dt"}
_QUANTUM_KEYS = {"enabled", "x_min", "x_max", "n_points", "dt_qm"}


def _parse_float(section, key, raw):
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"{section}.{key}: not a number: {raw!r}") from None


def _parse_scenario(cp):
    if not cp.has_section("scenario"):
        raise ConfigError("missing [scenario] section")
    for section, allowed in (
        ("scenario", _SCENARIO_KEYS),
        ("numerics", _NUMERICS_KEYS),
        ("quantum", _QUANTUM_KEYS),
    ):
        if cp.has_section(section):
            unknown = set(cp.options(section)) - allowed
            if unknown:
                raise ConfigError(f"{section}: unknown key(s) {sorted(unknown)}")
    extra = set(cp.sections()) - {"scenario", "numerics", "quantum"}
    if extra:
        raise ConfigError(f"unknown section(s) {sorted(extra)}")

    sc = cp["scenario"]

    def fval(section, key, default=None, required=False):
        proxy = cp[section] if cp.has_section(section) else {}
        if key not in proxy:
            if required:
                raise ConfigError(f"{section}.{key}: required key is missing")
            return default
        return _parse_float(section, key, proxy[key])

    family = sc.get("potential", "").strip().lower()
    if family == "polynomial":
        raw = sc.get("coefficients")
        if raw is None:
            raise ConfigError("scenario.coefficients: required for polynomial potentials")
        try:
            coeffs = tuple(float(tok) for tok in raw.replace(",", " ").split())
        except ValueError:
            raise ConfigError(f"scenario.coefficients: not a number list: {raw!r}") from None
        if not coeffs:
            raise ConfigError("scenario.coefficients: empty")
        pot = PolynomialPotential(coeffs)
    elif family == "step":
        pot = StepPotential(
            height=fval("scenario", "v0", required=True),
            wall=fval("scenario", "wall", required=True),
        )
    else:
        raise ConfigError(
            f"scenario.potential: expected 'polynomial' or 'step', got {family!r}"
        )

    params = SystemParams(
        mu=fval("scenario", "mu", default=1.0),
        hbar=fval("scenario", "hbar", required=True),
        b=fval("scenario", "b", required=True),
    )
    q0 = fval("scenario", "q0", required=True)
    p0 = fval("scenario", "p0", required=True)
    t_final = fval("numerics", "t_final", required=True)
    dt = fval("numerics", "dt", default=1.0e-3)

    enabled = True
    if cp.has_section("quantum") and "enabled" in cp["quantum"]:
        try:
            enabled = cp.getboolean("quantum", "enabled")
        except ValueError:
            raise ConfigError("quantum.enabled: expected a boolean") from None
    qspec = None
    if enabled:
        defaults = QuantumSpec()
        n_raw = cp["quantum"].get("n_points") if cp.has_section("quantum") else None
        if n_raw is None:
            n_points = defaults.n_points
        else:
            try:
                n_points = int(n_raw)
            except ValueError:
                raise ConfigError(f"quantum.n_points: not an integer: {n_raw!r}") from None
        qspec = QuantumSpec(
            x_min=fval("quantum", "x_min", default=defaults.x_min),
            x_max=fval("quantum", "x_max", default=defaults.x_max),
            n_points=n_points,
            dt_qm=fval("quantum", "dt_qm", default=defaults.dt_qm),
        )

    scenario = Scenario(
        potential=pot, q0=q0, p0=p0, params=params, t_final=t_final, dt=dt, quantum=qspec
    )
    validate_scenario(scenario)
    return scenario


def validate_scenario(s):
    """Check all cross-field invariants; raise ConfigError naming the field."""
    for key, v in (("q0", s.q0), ("p0", s.p0)):
        if not np.isfinite(v):
            raise ConfigError(f"scenario.{key}: must be finite")
    for key, v in (("t_final", s.t_final), ("dt", s.dt)):
        if not (np.isfinite(v) and v > 0):
            raise ConfigError(f"numerics.{key}: must be positive and finite")
    n_steps = round(s.t_final / s.dt)
    if n_steps < 1 or abs(n_steps * s.dt - s.t_final) > 1e-9 * max(1.0, s.t_final):
        raise ConfigError("numerics.t_final: must be an integer multiple of dt")
    if isinstance(s.potential, StepPotential):
        if s.p0 <= 0:
            raise ConfigError("scenario.p0: step scenarios require p0 > 0")
        if s.q0 >= s.potential.wall:
            raise ConfigError("scenario.q0: step scenarios require q0 < wall")
        p_max = np.sqrt(2.0 * s.params.mu * s.potential.height)
        if s.p0 >= p_max:
            raise ConfigError(
                f"scenario.p0: step scenarios require p0 < sqrt(2 mu v0) = {p_max:.6g}"
            )
    if s.quantum is not None:
        q = s.quantum
        try:
            quantum.Grid(q.x_min, q.x_max, q.n_points)
        except ValueError as exc:
            raise ConfigError(f"quantum grid: {exc}") from None
        if not (np.isfinite(q.dt_qm) and q.dt_qm > 0):
            raise ConfigError("quantum.dt_qm: must be positive and finite")
        ratio = s.dt / q.dt_qm
        if abs(ratio - round(ratio)) > 1e-9 or round(ratio) < 1:
            raise ConfigError("quantum.dt_qm: must divide the sampling step dt")
        b = s.params.b
        if s.q0 - 8.0 * b < q.x_min or s.q0 + 8.0 * b > q.x_max:
            raise ConfigError(
                "quantum.x_min/x_max: initial packet support (+-8b) exceeds the grid"
            )
    return s


def load_scenario(path):
    """Load and validate a scenario config file."""
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        with open(path, encoding="utf-8") as fh:
            cp.read_file(fh, source=str(path))
    except OSError as exc:
        raise ConfigError(f"cannot read scenario file: {exc}") from None
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse scenario file: {exc}") from None
    return _parse_scenario(cp)


def loads_scenario(text):
    """Parse a scenario from config text."""
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse scenario text: {exc}") from None
    return _parse_scenario(cp)


def dumps_scenario(s):
    """Render a scenario as config text that loads back identically."""
    lines = ["[scenario]"]
    if isinstance(s.potential, PolynomialPotential):
        lines.append("potential = polynomial")
        lines.append("coefficients = " + ", ".join(repr(a) for a in s.potential.coefficients))
    else:
        lines.append("potential = step")
        lines.append(f"v0 = {s.potential.height!r}")
        lines.append(f"wall = {s.potential.wall!r}")
    lines += [
        f"q0 = {s.q0!r}",
        f"p0 = {s.p0!r}",
        f"mu = {s.params.mu!r}",
        f"hbar = {s.params.hbar!r}",
        f"b = {s.params.b!r}",
        "",
        "[numerics]",
        f"t_final = {s.t_final!r}",
        f"dt = {s.dt!r}",
        "",
        "[quantum]",
    ]
    if s.quantum is None:
        lines.append("enabled = false")
    else:
        lines += [
            "enabled = true",
            f"x_min = {s.quantum.x_min!r}",
            f"x_max = {s.quantum.x_max!r}",
            f"n_points = {s.quantum.n_points}",
            f"dt_qm = {s.quantum.dt_qm!r}",
        ]
    return "\n".join(lines) + "\n"


def dump_scenario(s, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_scenario(s))


# ----------------------------------------------------------------------
# presets


def _figure1(hbar):
    return Scenario(
        potential=StepPotential(height=5.0, wall=1.0),
        q0=0.0,
        p0=1.0,
        params=SystemParams(mu=1.0, hbar=hbar, b=0.1),
        t_final=1.3,
        dt=1.0e-3,
        quantum=QuantumSpec(x_min=-4.0, x_max=3.0, n_points=4096, dt_qm=1.0e-4),
    )


def _polynomial_preset(coeffs, q0, p0, t_final, x_min, x_max):
    return Scenario(
        potential=PolynomialPotential(coeffs),
        q0=q0,
        p0=p0,
        params=SystemParams(mu=1.0, hbar=0.01, b=0.1),
        t_final=t_final,
        dt=1.0e-3,
        quantum=QuantumSpec(x_min=x_min, x_max=x_max, n_points=4096, dt_qm=1.0e-4),
    )


_PRESETS = {
    "free": lambda: _polynomial_preset((0.0,), 0.5, 1.0, 2.0, -4.0, 6.0),
    "linear": lambda: _polynomial_preset((0.0, 1.0), 0.5, 1.0, 2.0, -4.0, 4.0),
    "harmonic": lambda: _polynomial_preset((0.0, 0.0, 0.5), 0.5, 1.0, 2.0, -4.0, 4.0),
    "cubic": lambda: _polynomial_preset((0.0, 0.0, 0.0, 0.5), 0.3, 1.0, 0.5, -4.0, 4.0),
    "figure1-hbar005": lambda: _figure1(0.05),
    "figure1-hbar01": lambda: _figure1(0.1),
}

PRESET_NAMES = tuple(sorted(_PRESETS))


def preset(name):
    """Return a built-in scenario by name."""
    try:
        factory = _PRESETS[name]
    except KeyError:
        raise ConfigError(
            f"unknown preset {name!r}; choose from {', '.join(PRESET_NAMES)}"
        ) from None
    return validate_scenario(factory())


# ----------------------------------------------------------------------
# running


def _classical_series(s, times):
    if isinstance(s.potential, StepPotential):
        q, p, m_qq, m_qp = step_path(s.q0, s.p0, s.potential, s.params, times)
        # free flight on both sides of the bounce: m_pq = 0, m_pp = m_qq
        m_pq = np.zeros_like(q)
        m_pp = m_qq.copy()
        return q, p, m_qq, m_qp, m_pq, m_pp
    states = integrate(PhasePoint(s.q0, s.p0), s.potential, s.params, s.t_final, s.dt)
    q = np.array([st.phase.q for st in states])
    p = np.array([st.phase.p for st in states])
    m_qq = np.array([st.tangent.m_qq for st in states])
    m_qp = np.array([st.tangent.m_qp for st in states])
    m_pq = np.array([st.tangent.m_pq for st in states])
    m_pp = np.array([st.tangent.m_pp for st in states])
    return q, p, m_qq, m_qp, m_pq, m_pp


def _quantum_series(s, times):
    grid = quantum.Grid(s.quantum.x_min, s.quantum.x_max, s.quantum.n_points)
    wf0 = quantum.init_coherent(grid, s.q0, s.p0, s.params)
    sample_every = int(round(s.dt / s.quantum.dt_qm))
    series = quantum.propagate_record(
        wf0, s.potential, s.params, s.t_final, s.quantum.dt_qm, sample_every
    )
    if series.t.size != times.size:
        raise NumericalError("quantum sampling grid does not align with dt grid")
    return series


def run_scenario(s):
    """Compute the aligned classical, semiclassical, and quantum series.

    Raises NumericalError subclasses on diverged trajectories, tangent
    determinant drift, quantum norm drift, or grid exhaustion.
    """
    validate_scenario(s)
    n_steps = int(round(s.t_final / s.dt))
    times = np.arange(n_steps + 1) * s.dt

    q_c, p_c, m_qq, m_qp, m_pq, m_pp = _classical_series(s, times)
    det_m = m_qq * m_pp - m_qp * m_pq
    det_drift = float(np.max(np.abs(det_m - 1.0)))
    if det_drift > DET_DRIFT_LIMIT:
        raise NumericalError(f"tangent determinant drifted by {det_drift:.3g}")

    sig = semiclassical.sigma(s.params, m_qq, m_qp)
    if isinstance(s.potential, StepPotential):
        a_sc = semiclassical.accel_step(s.potential, q_c, sig, s.params.mu)
    else:
        a_sc = semiclassical.accel_hermite(s.potential, q_c, sig, s.params.mu)
    path = semiclassical.integrate_path(times, a_sc, s.q0, s.p0, s.params.mu)

    record = PathRecord(
        t=times,
        q_c=q_c,
        p_c=p_c,
        m_qq=m_qq,
        m_qp=m_qp,
        m_pq=m_pq,
        m_pp=m_pp,
        det_m=det_m,
        sigma=sig,
        a_sc=a_sc,
        q_sc=path.q_sc,
        p_sc=path.p_sc,
    )

    if s.quantum is not None:
        series = _quantum_series(s, times)
        norm_drift = float(np.max(np.abs(series.norm - 1.0)))
        if norm_drift > NORM_DRIFT_LIMIT:
            raise NumericalError(f"quantum norm drifted by {norm_drift:.3g}")
        record.q_qm = series.q
        record.p_qm = series.p
        record.norm_qm = series.norm
    return record


# ----------------------------------------------------------------------
# comparison


def _turning_time(t, q, label):
    i = int(np.argmax(q))
    if i == 0 or i == q.size - 1:
        raise ComparisonError(f"{label} q-series is monotonic: no turning point in window")
    denom = q[i - 1] - 2.0 * q[i] + q[i + 1]
    if denom == 0.0:
        return float(t[i])
    # parabola through the three samples around the discrete maximum
    return float(t[i] + 0.5 * (t[i + 1] - t[i]) * (q[i - 1] - q[i + 1]) / denom)


def _initial_accel(t, q):
    # second-order one-sided second derivative at t = 0
    dt = t[1] - t[0]
    return float((2.0 * q[0] - 5.0 * q[1] + 4.0 * q[2] - q[3]) / dt**2)


def compare(record):
    """Summarize quantum/semiclassical/classical agreement for one record."""
    if not record.has_quantum:
        raise ComparisonError("record has no quantum columns to compare against")
    dev_sc = float(np.max(np.abs(record.q_sc - record.q_qm)))
    dev_c = float(np.max(np.abs(record.q_c - record.q_qm)))
    return ComparisonSummary(
        max_dev_semiclassical=dev_sc,
        max_dev_classical=dev_c,
        turning_time_classical=_turning_time(record.t, record.q_c, "classical"),
        turning_time_semiclassical=_turning_time(record.t, record.q_sc, "semiclassical"),
        turning_time_quantum=_turning_time(record.t, record.q_qm, "quantum"),
        a_sc_initial=float(record.a_sc[0]),
        a_quant_initial=_initial_accel(record.t, record.q_qm),
        a_classical_initial=_initial_accel(record.t, record.q_c),
    )


# ----------------------------------------------------------------------
# serialization


def _format_cell(v):
    return f"{v:.12g}"


def record_to_csv(record):
    """Render a record as CSV text (12 significant digits per cell)."""
    out = io.StringIO()
    out.write(",".join(CSV_COLUMNS) + "\n")
    quantum_cols = record.has_quantum
    for i in range(record.t.size):
        row = [
            _format_cell(getattr(record, name)[i])
            for name in CSV_COLUMNS[:12]
        ]
        if quantum_cols:
            row += [
                _format_cell(record.q_qm[i]),
                _format_cell(record.p_qm[i]),
                _format_cell(record.norm_qm[i]),
            ]
        else:
            row += ["", "", ""]
        out.write(",".join(row) + "\n")
    return out.getvalue()


def read_record_csv(path):
    """Load a PathRecord from a CSV file written by :func:`emit`."""
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header.split(",") != list(CSV_COLUMNS):
            raise ConfigError(f"unexpected CSV header in {path}")
        rows = [line.rstrip("\n").split(",") for line in fh if line.strip()]
    if not rows:
        raise ConfigError(f"no data rows in {path}")
    cols = list(zip(*rows))
    data = {}
    for name, col in zip(CSV_COLUMNS, cols):
        if all(cell == "" for cell in col):
            data[name] = None
        else:
            data[name] = np.array([float(cell) for cell in col])
    quantum_cols = [data["q_qm"], data["p_qm"], data["norm_qm"]]
    if any(c is None for c in quantum_cols) and not all(c is None for c in quantum_cols):
        raise ConfigError("quantum columns must be all present or all empty")
    return PathRecord(**data)


def emit(record, summary, out_prefix):
    """Write ``<prefix>.csv``, ``<prefix>.summary.json``, ``<prefix>.svg``.

    The summary file is skipped when ``summary`` is None (comparison not
    applicable, e.g. no quantum columns or no turning point in window).
    """
    from .plotting import render_paths  # deferred: pulls in matplotlib

    csv_path = f"{out_prefix}.csv"
    with open(csv_path, "w", encoding="utf-8") as fh:
        fh.write(record_to_csv(record))
    written = [csv_path]
    if summary is not None:
        summary_path = f"{out_prefix}.summary.json"
        with open(summary_path, "w", encoding="utf-8") as fh:
            json.dump(summary.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")
        written.append(summary_path)
    svg_path = f"{out_prefix}.svg"
    render_paths(record, svg_path)
    written.append(svg_path)
    return written
