"""1D coupled simulation: gradient elasticity, quasi-static potential and
hyperbolic heat conduction on ``[0, L]`` with clamped, grounded, isothermal ends.

Unknowns are the interior nodal values of displacement ``u``, velocity ``v``,
temperature ``theta``, its rate ``w`` and the potential ``phi``.  Time
stepping is the trapezoidal rule on the first-order system, i.e. average
acceleration Newmark for both second-order equations, with the elliptic
potential equation imposed at every new time level.  All five fields are
advanced by one monolithic sparse solve whose factorization is reused.

With zero sources the scheme satisfies the discrete energy identity

    L[n+1] - L[n] = -dt * P_h(w_mid, theta_mid)

exactly, where ``L`` is the discrete Lyapunov functional and ``P_h`` the
discrete dissipation.  Boundary flux terms vanish because every boundary
condition is homogeneous and essential.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .admissibility import check_isotropic
from .errors import (
    ConfigurationError,
    DegenerateCoefficientError,
    InadmissibleMaterialError,
    SimulationError,
)
from .fd1d import Grid1D, Operators
from .material import IsoMaterial

MONOTONE_RTOL = 1e-8
REFINEMENT_STEPS = 2
TRACE_HEADER = ("step", "time", "lyapunov", "dissipation", "max_u", "max_theta", "max_phi")


@dataclass(frozen=True)
class Coeffs1D:
    """Coefficients of the field equations restricted to u = (u(x, t), 0, 0)."""

    A: float
    B: float
    Cu: float
    Cphi: float
    Dphi: float
    alpha14: float
    alpha33: float
    alpha47: float
    alpha66: float
    a44: float
    gamma: float
    beta: float
    rho: float
    T0: float
    alpha4: float = 0.0

    @property
    def capacity(self) -> float:
        """``a44 + gamma/beta^2``; negative for an admissible material."""
        if self.beta == 0:
            raise DegenerateCoefficientError("beta = 0")
        return self.a44 + self.gamma / self.beta**2

    @property
    def thermal_inertia(self) -> float:
        """Leading coefficient ``-(a44 + gamma/beta^2) * beta`` of the temperature equation."""
        return -self.capacity * self.beta


def reduce_to_1d(m: IsoMaterial) -> Coeffs1D:
    """Read off the 1D field-equation coefficients from the isotropic moduli.

    The two third-order couplings are equal: both come from the same
    ``(lambda* + 2 mu*) - (alpha0 + 2 beta0)`` combination of the
    stress/quadrupole and hyperstress/polarization responses.
    """
    coupling = m.lambda_star + 2 * m.mu_star - m.alpha0 - 2 * m.beta0
    return Coeffs1D(
        A=m.lam + 2 * m.mu,
        B=4 * (m.gamma1 + m.gamma2 + m.gamma5) + m.gamma3 + 2 * m.gamma4,
        Cu=coupling,
        Cphi=coupling,
        Dphi=m.lambda_tilde + 2 * m.mu_tilde,
        alpha14=m.alpha14, alpha33=m.alpha33, alpha47=m.alpha47, alpha66=m.alpha66,
        a44=m.a44, gamma=m.gamma, beta=m.beta, rho=m.rho, T0=m.T0, alpha4=m.alpha4,
    )


# ---------------------------------------------------------------------------
# State and configuration


@dataclass
class SimState1D:
    u: np.ndarray
    v: np.ndarray
    theta: np.ndarray
    w: np.ndarray
    phi: np.ndarray
    t: float = 0.0
    step: int = 0

    @classmethod
    def zeros(cls, n: int) -> SimState1D:
        return cls(*(np.zeros(n) for _ in range(5)))

    def vector(self) -> np.ndarray:
        return np.concatenate([self.u, self.v, self.theta, self.w, self.phi])

    @classmethod
    def from_vector(cls, X: np.ndarray, t: float, step: int) -> SimState1D:
        u, v, theta, w, phi = np.split(X, 5)
        return cls(u.copy(), v.copy(), theta.copy(), w.copy(), phi.copy(), t, step)

    def __sub__(self, other: SimState1D) -> SimState1D:
        return SimState1D(self.u - other.u, self.v - other.v, self.theta - other.theta,
                          self.w - other.w, self.phi - other.phi, self.t, self.step)


def _profile(spec, grid: Grid1D, what: str) -> np.ndarray:
    """Nodal array from a list or a named profile description."""
    x, L = grid.x, grid.L
    if spec is None:
        return np.zeros(grid.N)
    if isinstance(spec, (list, tuple, np.ndarray)):
        arr = np.asarray(spec, dtype=float)
        if arr.shape != (grid.N,):
            raise ConfigurationError(f"{what}: expected {grid.N} nodal values, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ConfigurationError(f"{what}: non-finite values")
        return arr.copy()
    if isinstance(spec, str):
        spec = {"profile": spec}
    if not isinstance(spec, dict) or "profile" not in spec:
        raise ConfigurationError(f"{what}: expected a list of values or a profile object")
    allowed = {"profile", "amplitude", "mode", "seed", "modes"}
    unknown = set(spec) - allowed
    if unknown:
        raise ConfigurationError(f"{what}: unknown profile key {sorted(unknown)[0]!r}")
    kind = spec["profile"]
    amp = float(spec.get("amplitude", 1.0))
    k = int(spec.get("mode", 1))
    if kind == "zero":
        return np.zeros(grid.N)
    if kind == "sine":
        return amp * np.sin(k * math.pi * x / L)
    if kind == "sin2":
        return amp * np.sin(k * math.pi * x / L) ** 2
    if kind == "random_smooth":
        return random_smooth(grid, int(spec.get("seed", 0)), int(spec.get("modes", 6)), amp)
    raise ConfigurationError(f"{what}: unknown profile {kind!r}")


def random_smooth(grid: Grid1D, seed: int, modes: int = 6, amplitude: float = 1.0) -> np.ndarray:
    """``sin(pi x/L) * sum_k a_k sin(k pi x/L)`` with ``a_k ~ U(-1, 1)/k^2``.

    The leading sine factor makes the profile and its slope vanish at both ends.
    """
    rng = np.random.default_rng(seed)
    coeffs = rng.uniform(-1.0, 1.0, modes) / np.arange(1, modes + 1) ** 2
    s = grid.x / grid.L
    series = sum(a * np.sin((k + 1) * math.pi * s) for k, a in enumerate(coeffs))
    return amplitude * np.sin(math.pi * s) * series


@dataclass
class SimConfig:
    material: IsoMaterial
    grid: Grid1D
    dt: float
    steps: int
    u0: np.ndarray | None = None
    v0: np.ndarray | None = None
    theta0: np.ndarray | None = None
    eta0: np.ndarray | None = None
    theta_dot0: np.ndarray | None = None
    f: np.ndarray | None = None
    g: np.ndarray | None = None
    r: np.ndarray | None = None
    boundary: str = "clamped"
    force: bool = False

    def __post_init__(self):
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise ConfigurationError(f"dt must be positive, got {self.dt}")
        if int(self.steps) != self.steps or self.steps < 0:
            raise ConfigurationError(f"steps must be a non-negative integer, got {self.steps}")
        self.steps = int(self.steps)
        if self.boundary != "clamped":
            raise ConfigurationError(
                f"unsupported boundary set {self.boundary!r}; only 'clamped' is implemented"
            )
        if self.eta0 is not None and self.theta_dot0 is not None:
            raise ConfigurationError("give either eta0 or thetaDot0, not both")
        for name in ("u0", "v0", "theta0", "eta0", "theta_dot0", "f", "g", "r"):
            value = getattr(self, name)
            if value is not None:
                setattr(self, name, _profile(value, self.grid, name))

    def field(self, name: str) -> np.ndarray:
        value = getattr(self, name)
        return np.zeros(self.grid.N) if value is None else value


# ---------------------------------------------------------------------------
# Single-point relations


def init_theta_dot(m: IsoMaterial, u0, theta0, phi0, eta0, grid: Grid1D) -> np.ndarray:
    """Temperature rate that reproduces the prescribed initial entropy.

    Solves ``-rho eta = alpha14 u_x + a44 (theta + beta theta_dot)
    + alpha47 V + gamma theta_dot / beta + alpha4`` with ``V = -phi_xx``.
    """
    if m.beta == 0:
        raise DegenerateCoefficientError("beta = 0")
    denom = m.a44 * m.beta + m.gamma / m.beta
    if denom == 0:
        raise DegenerateCoefficientError(
            "a44*beta + gamma/beta = 0: initial entropy does not determine the temperature rate"
        )
    ops = Operators(grid)
    V = -(ops.D2 @ np.asarray(phi0, dtype=float))
    rhs = (-m.rho * np.asarray(eta0, dtype=float) - m.alpha14 * (ops.D1 @ np.asarray(u0, dtype=float))
           - m.a44 * np.asarray(theta0, dtype=float) - m.alpha47 * V - m.alpha4)
    return rhs / denom


def entropy(m: IsoMaterial, ops: Operators, s: SimState1D) -> np.ndarray:
    """Nodal ``eta`` implied by a state (inverse of ``init_theta_dot``)."""
    z = s.theta + m.beta * s.w
    minus_rho_eta = (m.alpha14 * (ops.D1 @ s.u) + m.a44 * z - m.alpha47 * (ops.D2 @ s.phi)
                     + m.gamma / m.beta * s.w + m.alpha4)
    return -minus_rho_eta / m.rho


def _factor(matrix: sp.spmatrix, what: str):
    try:
        lu = spla.splu(matrix.tocsc())
    except RuntimeError as exc:
        raise ConfigurationError(f"{what} is singular ({exc})") from exc
    return lu


def potential_operator(c: Coeffs1D, ops: Operators) -> sp.csr_matrix:
    return (c.alpha33 * ops.D2 - c.Dphi * ops.D4).tocsr()


def solve_potential(state: SimState1D, coeffs: Coeffs1D, grid: Grid1D, g=None) -> np.ndarray:
    """Potential from the quasi-static equation given u, theta and theta_dot."""
    ops = Operators(grid)
    g = np.zeros(grid.N) if g is None else np.asarray(g, dtype=float)
    z = state.theta + coeffs.beta * state.w
    rhs = g - coeffs.Cphi * (ops.D3phi @ state.u) - coeffs.alpha47 * (ops.D2 @ z)
    lu = _factor(potential_operator(coeffs, ops),
                 "potential operator alpha33*D2 - Dphi*D4 (alpha33 < 0 and Dphi < 0 make it definite)")
    phi = lu.solve(rhs)
    if not np.all(np.isfinite(phi)):
        raise ConfigurationError("potential solve produced non-finite values; check alpha33 and Dphi")
    return phi


# ---------------------------------------------------------------------------
# Energy bookkeeping


def lyapunov(c: Coeffs1D, ops: Operators, s: SimState1D) -> float:
    """Discrete Lyapunov functional.

    Gradients are summed over cells, second differences with trapezoid
    weights, everything else over nodes.
    """
    z = s.theta + c.beta * s.w
    return (0.5 * c.rho * ops.node_sum(s.v)
            + 0.5 * c.A * ops.grad_sq(s.u)
            + 0.5 * c.B * ops.curv_sq(s.u)
            - 0.5 * c.alpha33 * ops.grad_sq(s.phi)
            - 0.5 * c.Dphi * ops.curv_sq(s.phi)
            + c.alpha47 * ops.node_sum(ops.D2 @ s.phi, z)
            - 0.5 * c.capacity * ops.node_sum(z)
            + 0.5 * c.gamma / c.beta**2 * ops.node_sum(s.theta)
            + 0.5 * c.alpha66 * ops.grad_sq(s.theta))


def dissipation(c: Coeffs1D, ops: Operators, w: np.ndarray, theta: np.ndarray) -> float:
    """Discrete ``sum dx * P(theta_dot, theta_x)``."""
    return (c.gamma * ops.node_sum(w) + c.alpha66 * ops.grad_sq(theta)) / c.beta


# ---------------------------------------------------------------------------
# Time stepping


class Stepper:
    """Owns the factored step matrix for one (coefficients, grid, dt) triple."""

    def __init__(self, coeffs: Coeffs1D, grid: Grid1D, dt: float,
                 f=None, g=None, r=None):
        c = coeffs
        self.coeffs = c
        self.grid = grid
        self.dt = dt
        self.ops = ops = Operators(grid)
        n = grid.N
        I = sp.identity(n, format="csr")
        Z = sp.csr_matrix((n, n))
        m_theta = c.thermal_inertia
        Ku = c.A * ops.D2 - c.B * ops.D4
        h = 0.5 * dt

        # rows: u, v, theta, w, phi; columns: u, v, theta, w, phi
        lhs = [
            [I, -h * I, Z, Z, Z],
            [-0.5 * Ku, (c.rho / dt) * I, -0.5 * c.alpha14 * ops.D1,
             -0.5 * c.alpha14 * c.beta * ops.D1, 0.5 * c.Cu * ops.D3u],
            [Z, Z, I, -h * I, Z],
            [Z, -0.5 * c.alpha14 * ops.D1, -0.5 * (c.alpha66 / c.beta) * ops.D2,
             (m_theta / dt) * I - 0.5 * c.a44 * I, (c.alpha47 / dt) * ops.D2],
            [c.Cphi * ops.D3phi, Z, c.alpha47 * ops.D2, c.alpha47 * c.beta * ops.D2,
             potential_operator(c, ops)],
        ]
        rhs = [
            [I, h * I, Z, Z, Z],
            [0.5 * Ku, (c.rho / dt) * I, 0.5 * c.alpha14 * ops.D1,
             0.5 * c.alpha14 * c.beta * ops.D1, -0.5 * c.Cu * ops.D3u],
            [Z, Z, I, h * I, Z],
            [Z, 0.5 * c.alpha14 * ops.D1, 0.5 * (c.alpha66 / c.beta) * ops.D2,
             (m_theta / dt) * I + 0.5 * c.a44 * I, (c.alpha47 / dt) * ops.D2],
            [Z, Z, Z, Z, Z],
        ]
        self.lhs = sp.bmat(lhs, format="csr")
        self.rhs = sp.bmat(rhs, format="csr")
        # The fourth-difference blocks make the raw matrix badly scaled, so it
        # is equilibrated by rows then columns before factoring.
        self.row_scale = 1.0 / abs(self.lhs).max(axis=1).toarray().ravel()
        scaled = sp.diags(self.row_scale) @ self.lhs
        self.col_scale = 1.0 / abs(scaled).max(axis=0).toarray().ravel()
        self.lu = _factor(scaled @ sp.diags(self.col_scale), "step matrix")
        zero = np.zeros(n)
        f = zero if f is None else np.asarray(f, dtype=float)
        g = zero if g is None else np.asarray(g, dtype=float)
        r = zero if r is None else np.asarray(r, dtype=float)
        self.source = np.concatenate([zero, c.rho * f, zero, c.rho * r / c.T0, g])

    def solve(self, b: np.ndarray) -> np.ndarray:
        """Solve with the step matrix plus two rounds of iterative refinement."""
        X = self.col_scale * self.lu.solve(self.row_scale * b)
        for _ in range(REFINEMENT_STEPS):
            X += self.col_scale * self.lu.solve(self.row_scale * (b - self.lhs @ X))
        return X

    def advance(self, s: SimState1D) -> SimState1D:
        X = self.solve(self.rhs @ s.vector() + self.source)
        step = s.step + 1
        if not np.all(np.isfinite(X)):
            raise SimulationError(f"non-finite state at step {step}", step=step)
        return SimState1D.from_vector(X, s.t + self.dt, step)

    def lyapunov(self, s: SimState1D) -> float:
        return lyapunov(self.coeffs, self.ops, s)

    def dissipation(self, s: SimState1D) -> float:
        return dissipation(self.coeffs, self.ops, s.w, s.theta)


def step(state: SimState1D, config: SimConfig, stepper: Stepper | None = None) -> SimState1D:
    """Advance one time step.  Pass a ``Stepper`` to reuse its factorization."""
    if stepper is None:
        stepper = make_stepper(config)
    return stepper.advance(state)


def make_stepper(config: SimConfig) -> Stepper:
    return Stepper(reduce_to_1d(config.material), config.grid, config.dt,
                   config.f, config.g, config.r)


def gate_material(config: SimConfig):
    """Refuse inadmissible materials unless ``force`` is set.  Returns the report."""
    m = config.material
    report = check_isotropic(m)
    if config.force:
        return report
    if not report.flags["theorem1_hypotheses"]:
        failed = ", ".join(cond.name for cond in report.failures())
        raise InadmissibleMaterialError(f"material fails uniqueness hypotheses: {failed}", report)
    c = reduce_to_1d(m)
    if c.thermal_inertia <= 0:
        raise InadmissibleMaterialError(
            "(a44 + gamma/beta^2)*beta must be negative for a damped temperature wave", report
        )
    return report


def initial_state(config: SimConfig, stepper: Stepper | None = None) -> SimState1D:
    """Initial fields; the potential and the temperature rate are solved jointly
    when the initial entropy is prescribed."""
    m = config.material
    c = reduce_to_1d(m)
    grid = config.grid
    ops = Operators(grid) if stepper is None else stepper.ops
    u0, v0, th0 = config.field("u0"), config.field("v0"), config.field("theta0")
    g = config.field("g")
    s = SimState1D(u0.copy(), v0.copy(), th0.copy(), np.zeros(grid.N), np.zeros(grid.N))
    if config.eta0 is None:
        s.w = config.field("theta_dot0").copy()
        s.phi = solve_potential(s, c, grid, g)
        return s
    if m.beta == 0:
        raise DegenerateCoefficientError("beta = 0")
    denom = m.a44 * m.beta + m.gamma / m.beta
    if denom == 0:
        raise DegenerateCoefficientError(
            "a44*beta + gamma/beta = 0: initial entropy does not determine the temperature rate"
        )
    n = grid.N
    I = sp.identity(n, format="csr")
    # unknowns (w, phi): entropy relation and potential equation
    block = sp.bmat([
        [denom * I, -c.alpha47 * ops.D2],
        [c.alpha47 * c.beta * ops.D2, potential_operator(c, ops)],
    ], format="csc")
    rhs = np.concatenate([
        -m.rho * config.eta0 - c.alpha14 * (ops.D1 @ u0) - c.a44 * th0 - m.alpha4,
        g - c.Cphi * (ops.D3phi @ u0) - c.alpha47 * (ops.D2 @ th0),
    ])
    sol = _factor(block, "initial entropy/potential system").solve(rhs)
    s.w, s.phi = sol[:n].copy(), sol[n:].copy()
    return s


@dataclass
class SimResult:
    times: np.ndarray
    lyapunov: np.ndarray
    dissipation: np.ndarray
    max_u: np.ndarray
    max_theta: np.ndarray
    max_phi: np.ndarray
    final: SimState1D
    dt: float
    forced: bool = False
    history: list[SimState1D] = field(default_factory=list)

    @property
    def steps(self) -> np.ndarray:
        return np.arange(len(self.times))

    def increments(self) -> np.ndarray:
        return np.diff(self.lyapunov)

    def max_relative_increase(self) -> float:
        """Largest ``(L[n+1] - L[n]) / |L[n]|``; an increase from exactly 0 counts as inf."""
        worst = -math.inf
        for prev, inc in zip(self.lyapunov[:-1], self.increments()):
            if prev != 0:
                rel = inc / abs(prev)
            else:
                rel = 0.0 if inc <= 0 else math.inf
            worst = max(worst, rel)
        return worst if worst != -math.inf else 0.0

    def is_monotone(self, rtol: float = MONOTONE_RTOL) -> bool:
        inc = self.increments()
        return bool(np.all(inc <= rtol * np.abs(self.lyapunov[:-1])))

    def identity_residual(self) -> np.ndarray:
        """``(L[n+1] - L[n])/dt + (D[n] + D[n+1])/2`` for every step."""
        return self.increments() / self.dt + 0.5 * (self.dissipation[:-1] + self.dissipation[1:])

    def summary(self) -> dict:
        return {
            "steps": int(len(self.times) - 1),
            "dt": self.dt,
            "initial_lyapunov": float(self.lyapunov[0]),
            "final_lyapunov": float(self.lyapunov[-1]),
            "max_dissipation": float(self.dissipation.max()),
            "min_dissipation": float(self.dissipation.min()),
            "max_relative_increase": self.max_relative_increase(),
            "monotone": self.is_monotone(),
            "forced": self.forced,
        }

    def write_csv(self, path) -> None:
        with open(Path(path), "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(TRACE_HEADER)
            for n in range(len(self.times)):
                writer.writerow([n] + [format(float(v), ".17g") for v in (
                    self.times[n], self.lyapunov[n], self.dissipation[n],
                    self.max_u[n], self.max_theta[n], self.max_phi[n])])


def _norm(a: np.ndarray) -> float:
    return float(np.abs(a).max()) if a.size else 0.0


def run(config: SimConfig, keep_history: bool = False) -> SimResult:
    """Gate the material, build the initial state and march ``config.steps`` steps."""
    gate_material(config)
    stepper = make_stepper(config)
    s = initial_state(config, stepper)
    n = config.steps + 1
    times, lyap, diss = np.empty(n), np.empty(n), np.empty(n)
    mu, mt, mp = np.empty(n), np.empty(n), np.empty(n)
    history = []
    for k in range(n):
        if k > 0:
            s = stepper.advance(s)
        times[k] = s.t
        lyap[k] = stepper.lyapunov(s)
        diss[k] = stepper.dissipation(s)
        mu[k], mt[k], mp[k] = _norm(s.u), _norm(s.theta), _norm(s.phi)
        if keep_history:
            history.append(s)
    return SimResult(times, lyap, diss, mu, mt, mp, s, config.dt, config.force, history)


# ---------------------------------------------------------------------------
# Uniqueness experiment


@dataclass
class UniquenessReport:
    null_max_u: float
    null_max_theta: float
    null_max_phi: float
    diff_lyapunov: np.ndarray
    epsilon: float

    @property
    def null_max(self) -> float:
        return max(self.null_max_u, self.null_max_theta, self.null_max_phi)

    @property
    def max_ratio(self) -> float:
        """``max_t L_diff(t) / L_diff(0)`` (0 when the difference vanishes)."""
        L0 = self.diff_lyapunov[0]
        if L0 == 0:
            return 0.0 if np.all(self.diff_lyapunov == 0) else math.inf
        return float(self.diff_lyapunov.max() / L0)

    def never_exceeds(self, rtol: float = MONOTONE_RTOL) -> bool:
        return bool(np.all(self.diff_lyapunov <= self.diff_lyapunov[0] * (1 + rtol)))

    def to_dict(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "null_max_u": self.null_max_u,
            "null_max_theta": self.null_max_theta,
            "null_max_phi": self.null_max_phi,
            "diff_lyapunov_initial": float(self.diff_lyapunov[0]),
            "diff_lyapunov_max_ratio": self.max_ratio,
            "never_exceeds": self.never_exceeds(),
        }


def uniqueness_experiment(config: SimConfig, epsilon: float) -> UniquenessReport:
    """Null-data run plus two runs whose initial displacements differ by
    ``epsilon * sin^2(pi x / L)``; tracks the Lyapunov functional of their difference."""
    gate_material(config)

    null_cfg = replace(config, u0=None, v0=None, theta0=None, eta0=None, theta_dot0=None,
                       f=None, g=None, r=None)
    null_stepper = make_stepper(null_cfg)
    s = initial_state(null_cfg, null_stepper)
    mu = mt = mp = 0.0
    for k in range(config.steps + 1):
        if k > 0:
            s = null_stepper.advance(s)
        mu, mt, mp = max(mu, _norm(s.u)), max(mt, _norm(s.theta)), max(mp, _norm(s.phi))

    bump = epsilon * np.sin(math.pi * config.grid.x / config.grid.L) ** 2
    cfg_b = replace(config, u0=config.field("u0") + bump)
    stepper = make_stepper(config)
    a = initial_state(config, stepper)
    b = initial_state(cfg_b, stepper)
    diff = np.empty(config.steps + 1)
    for k in range(config.steps + 1):
        if k > 0:
            a, b = stepper.advance(a), stepper.advance(b)
        diff[k] = null_stepper.lyapunov(b - a)
    return UniquenessReport(mu, mt, mp, diff, epsilon)


# ---------------------------------------------------------------------------
# Config files


def config_from_dict(data: dict, base_dir: Path | None = None) -> SimConfig:
    """Build a ``SimConfig`` from a decoded JSON object."""
    from .material import load_material, material_from_dict

    allowed = {"material", "grid", "dt", "steps", "initial", "sources", "boundary", "force"}
    for key in data:
        if key not in allowed:
            raise ConfigurationError(f"unknown config key {key!r}")
    for key in ("material", "grid", "dt", "steps"):
        if key not in data:
            raise ConfigurationError(f"missing config key {key!r}")
    mat = data["material"]
    if isinstance(mat, str):
        path = Path(mat)
        if not path.is_absolute() and base_dir is not None:
            path = base_dir / path
        material = load_material(path)
    elif isinstance(mat, dict):
        material = material_from_dict(mat, source="config material")
    else:
        raise ConfigurationError("material must be a path or an inline object")
    if not isinstance(material, IsoMaterial):
        raise ConfigurationError("the 1D simulator needs an isotropic material")
    grid_spec = data["grid"]
    if not isinstance(grid_spec, dict) or "N" not in grid_spec:
        raise ConfigurationError("grid must be an object with at least 'N'")
    unknown = set(grid_spec) - {"N", "L"}
    if unknown:
        raise ConfigurationError(f"unknown grid key {sorted(unknown)[0]!r}")
    grid = Grid1D(grid_spec["N"], float(grid_spec.get("L", 1.0)))

    init = data.get("initial", {})
    keys = {"u0": "u0", "v0": "v0", "theta0": "theta0", "eta0": "eta0", "thetaDot0": "theta_dot0"}
    for key in init:
        if key not in keys:
            raise ConfigurationError(f"unknown initial-data key {key!r}")
    src = data.get("sources", {})
    for key in src:
        if key not in ("f", "g", "r"):
            raise ConfigurationError(f"unknown source key {key!r}")
    return SimConfig(
        material=material, grid=grid, dt=float(data["dt"]), steps=data["steps"],
        **{attr: init.get(key) for key, attr in keys.items()},
        f=src.get("f"), g=src.get("g"), r=src.get("r"),
        boundary=data.get("boundary", "clamped"), force=bool(data.get("force", False)),
    )
