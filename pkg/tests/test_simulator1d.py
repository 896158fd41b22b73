from __future__ import annotations

import math
from dataclasses import replace
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_iso
from helpers import admissible_variants
from thermopiezo.constitutive import LocalState, evaluate
from thermopiezo.errors import (
    ConfigurationError,
    DegenerateCoefficientError,
    InadmissibleMaterialError,
)
from thermopiezo.fd1d import Grid1D, Operators
from thermopiezo.material import IsoMaterial
from thermopiezo.simulator1d import (
    TRACE_HEADER,
    SimConfig,
    SimState1D,
    config_from_dict,
    dissipation,
    entropy,
    init_theta_dot,
    initial_state,
    make_stepper,
    random_smooth,
    reduce_to_1d,
    run,
    solve_potential,
    step,
    uniqueness_experiment,
)
from thermopiezo.tensor_core import Kappa, Sym2

TESTS = Path(__file__).parent
BASE = dict(rho=1.0, T0=1.0, beta=1.0)
# admissible and decoupled: only the displacement carries dynamics
ELASTIC = IsoMaterial(rho=1.0, T0=1.0, beta=1.0, lam=1.0, lambda_tilde=-1.0, mu_tilde=-0.5,
                      alpha33=-1.0, a44=-2.0, gamma=1.0, alpha66=1.0)


def coupled_material() -> IsoMaterial:
    return admissible_variants(np.random.default_rng(3), 1)[0]


# ---------------------------------------------------------------------------
# coefficient reduction


def test_reduce_zero_material():
    c = reduce_to_1d(IsoMaterial(**BASE))
    assert (c.A, c.B, c.Cu, c.Cphi, c.Dphi) == (0.0,) * 5


def test_reduce_examples():
    assert reduce_to_1d(IsoMaterial(**BASE, lam=1.0, mu=1.0)).A == 3.0
    assert reduce_to_1d(IsoMaterial(**BASE, gamma3=1.0, gamma4=1.0)).B == 3.0


def _kappa111() -> Kappa:
    k = np.zeros((3, 3, 3))
    k[0, 0, 0] = 1.0
    return Kappa.from_full(k)


def _unit_sym11() -> Sym2:
    return Sym2(np.array([1.0, 0, 0, 0, 0, 0]))


def test_reduced_coefficients_follow_the_constitutive_map(rng):
    """Read each 1D coefficient off the 3D responses for u = (u(x), 0, 0).

    With e11 = u_x, kappa111 = u_xx, E1 = -phi_x, V11 = -phi_xx, the balance
    tau11_x - mu111_xx = rho u_tt and the charge equation
    sigma1_x - Q11_xx = g give the coefficients below.
    """
    for _ in range(10):
        m = random_iso(rng)
        c = reduce_to_1d(m)
        at = lambda **kw: evaluate(m, LocalState(**kw))  # noqa: E731
        r_e, r_k = at(e=_unit_sym11()), at(kappa=_kappa111())
        r_E, r_V = at(E=[1.0, 0, 0]), at(V=_unit_sym11())
        r_z = at(theta=1.0)
        assert c.A == pytest.approx(r_e.tau[0, 0])
        assert c.B == pytest.approx(r_k.mu.full()[0, 0, 0])
        assert c.Cu == pytest.approx(r_V.tau[0, 0] - r_E.mu.full()[0, 0, 0])
        assert c.Cphi == pytest.approx(r_k.sigma[0] - r_e.Q[0, 0])
        assert c.Dphi == pytest.approx(-r_V.Q[0, 0])
        assert c.alpha33 == pytest.approx(-r_E.sigma[0])
        assert c.alpha14 == pytest.approx(r_z.tau[0, 0])
        assert c.alpha47 == pytest.approx(-r_z.Q[0, 0])
        assert c.Cu == c.Cphi


# ---------------------------------------------------------------------------
# difference operators


@pytest.mark.parametrize("N", [9, 20, 47])
def test_operators_exact_on_polynomials(N, rng):
    ops = Operators(Grid1D(N, L=1.7))
    x = ops.grid.x
    for deg, D, deriv, rows in ((3, ops.D2, 2, slice(1, N - 1)), (2, ops.D1, 1, slice(1, N - 1)),
                                (5, ops.D4, 4, slice(2, N - 2)), (4, ops.D3u, 3, slice(2, N - 2)),
                                (4, ops.D3phi, 3, slice(2, N - 2))):
        p = np.polynomial.Polynomial(rng.normal(size=deg + 1))
        got = (D @ p(x))[rows]
        want = p.deriv(deriv)(x)[rows]
        assert np.abs(got - want).max() <= 1e-7 * max(np.abs(want).max(), 1.0)


def test_operator_symmetries():
    ops = Operators(Grid1D(12))
    D1, D2, D4 = (a.toarray() for a in (ops.D1, ops.D2, ops.D4))
    np.testing.assert_array_equal(D1, -D1.T)
    np.testing.assert_allclose(D2, D2.T)
    np.testing.assert_allclose(D4, D4.T)
    assert np.linalg.eigvalsh(-D2).min() > 0
    assert np.linalg.eigvalsh(D4).min() > 0


def test_grid_validation():
    with pytest.raises(ConfigurationError):
        Grid1D(7)
    with pytest.raises(ConfigurationError):
        Grid1D(10, L=0.0)
    g = Grid1D(9, L=2.0)
    assert g.dx == 0.2 and g.x[0] == pytest.approx(0.2) and g.x[-1] == pytest.approx(1.8)


# ---------------------------------------------------------------------------
# initial temperature rate


def test_init_theta_dot_consistency(fixture_material, rng):
    m = fixture_material
    grid = Grid1D(20)
    ops = Operators(grid)
    s = SimState1D(random_smooth(grid, 1), np.zeros(20), random_smooth(grid, 2),
                   np.zeros(20), random_smooth(grid, 3))
    eta0 = entropy(m, ops, s)
    np.testing.assert_allclose(init_theta_dot(m, s.u, s.theta, s.phi, eta0, grid), 0.0, atol=1e-12)
    s.w = random_smooth(grid, 4)
    got = init_theta_dot(m, s.u, s.theta, s.phi, entropy(m, ops, s), grid)
    np.testing.assert_allclose(got, s.w, atol=1e-12)


def test_init_theta_dot_example():
    m = IsoMaterial(rho=1.0, T0=1.0, beta=1.0, a44=-1.0)
    z = np.zeros(10)
    # -rho eta = a44 beta theta_dot, so rho eta = -1 gives theta_dot = -1
    np.testing.assert_allclose(init_theta_dot(m, z, z, z, -np.ones(10), Grid1D(10)), -1.0)
    np.testing.assert_allclose(init_theta_dot(m, z, z, z, np.ones(10), Grid1D(10)), 1.0)


def test_init_theta_dot_degenerate():
    m = IsoMaterial(**BASE)
    z = np.zeros(10)
    with pytest.raises(DegenerateCoefficientError):
        init_theta_dot(m, z, z, z, z, Grid1D(10))


# ---------------------------------------------------------------------------
# potential solve


def test_potential_zero(fixture_material):
    grid = Grid1D(16)
    phi = solve_potential(SimState1D.zeros(16), reduce_to_1d(fixture_material), grid)
    assert np.all(phi == 0.0)


def test_potential_linearity():
    c = reduce_to_1d(coupled_material())
    grid = Grid1D(24)
    s = SimState1D(random_smooth(grid, 1), np.zeros(24), random_smooth(grid, 2),
                   random_smooth(grid, 3), np.zeros(24))
    g = random_smooth(grid, 4)
    s2 = SimState1D(2 * s.u, s.v, 2 * s.theta, 2 * s.w, s.phi)
    np.testing.assert_allclose(solve_potential(s2, c, grid, 2 * g),
                               2 * solve_potential(s, c, grid, g), rtol=1e-12, atol=1e-14)


def test_potential_manufactured_residual():
    c = reduce_to_1d(coupled_material())
    grid = Grid1D(40)
    ops = Operators(grid)
    u = np.sin(math.pi * grid.x / grid.L)
    s = SimState1D(u, np.zeros(40), np.zeros(40), np.zeros(40), np.zeros(40))
    phi = solve_potential(s, c, grid)
    residual = c.Cphi * (ops.D3phi @ u) + c.alpha33 * (ops.D2 @ phi) - c.Dphi * (ops.D4 @ phi)
    assert np.abs(residual).max() < 1e-10


def test_potential_singular_operator():
    c = reduce_to_1d(IsoMaterial(**BASE))
    with pytest.raises(ConfigurationError):
        solve_potential(SimState1D.zeros(10), c, Grid1D(10))


# ---------------------------------------------------------------------------
# time stepping


def test_zero_data_stays_zero(fixture_material):
    r = run(SimConfig(fixture_material, Grid1D(16), 1e-2, 50), keep_history=True)
    assert all(np.all(s.vector() == 0.0) for s in r.history)
    assert np.all(r.lyapunov == 0) and np.all(r.dissipation == 0)


def test_zero_steps(fixture_material):
    r = run(SimConfig(fixture_material, Grid1D(16), 1e-2, 0, u0="sin2"))
    assert len(r.lyapunov) == 1 and r.lyapunov[0] > 0


def test_step_matches_stepper(fixture_material):
    cfg = SimConfig(fixture_material, Grid1D(16), 1e-2, 1, u0="sin2")
    s0 = initial_state(cfg)
    a = step(s0, cfg)
    b = make_stepper(cfg).advance(s0)
    np.testing.assert_array_equal(a.vector(), b.vector())
    assert a.step == 1 and a.t == pytest.approx(1e-2)


def test_standing_wave_period_second_order():
    """A pure elastic sine mode has period 2L/sqrt(A/rho); the discrete period is
    read off the three-term recurrence u[n+1] + u[n-1] = 2 cos(phase) u[n]."""
    errors = []
    for cells in (16, 32, 64, 128):
        dt = 0.04 * 16 / cells
        r = run(SimConfig(ELASTIC, Grid1D(cells - 1), dt, 3, u0="sine"), keep_history=True)
        u = [s.u[cells // 2 - 1] for s in r.history]
        period = 2 * math.pi * dt / math.acos((u[2] + u[0]) / (2 * u[1]))
        errors.append(abs(period - 2.0))
    orders = np.log2(np.array(errors[:-1]) / np.array(errors[1:]))
    assert orders.min() >= 1.9
    assert errors[-1] < 1e-4


MATERIALS = admissible_variants(np.random.default_rng(17), 10)
GRIDS = (9, 16, 31, 48, 64)


@pytest.mark.parametrize("index", range(len(MATERIALS)))
def test_decay_matrix(index):
    m = MATERIALS[index]
    for N in GRIDS:
        cfg = SimConfig(m, Grid1D(N), 2e-3, 150,
                        u0={"profile": "random_smooth", "seed": index},
                        v0={"profile": "random_smooth", "seed": index + 100, "amplitude": 0.5},
                        theta0={"profile": "random_smooth", "seed": index + 200},
                        eta0={"profile": "sin2", "amplitude": -0.3})
        r = run(cfg)
        assert r.is_monotone(), (index, N, r.max_relative_increase())
        assert r.max_relative_increase() <= 1e-8
        assert np.all(r.dissipation >= 0)
        assert r.lyapunov[-1] < r.lyapunov[0]


def test_discrete_energy_identity_is_exact():
    """With trapezoid-averaged fields the energy balance closes to roundoff."""
    m = MATERIALS[0]
    cfg = SimConfig(m, Grid1D(24), 5e-3, 40, u0={"profile": "random_smooth", "seed": 1},
                    theta0={"profile": "random_smooth", "seed": 2})
    r = run(cfg, keep_history=True)
    stepper = make_stepper(cfg)
    for a, b in zip(r.history[:-1], r.history[1:]):
        mid_w, mid_theta = 0.5 * (a.w + b.w), 0.5 * (a.theta + b.theta)
        balance = (stepper.lyapunov(b) - stepper.lyapunov(a)
                   + cfg.dt * dissipation(stepper.coeffs, stepper.ops, mid_w, mid_theta))
        assert abs(balance) <= 1e-11 * stepper.lyapunov(a)


@settings(max_examples=15, deadline=None)
@given(st.floats(-1.0, 1.0), st.floats(-1.0, 1.0))
def test_dissipation_nonnegative(a, b):
    c = reduce_to_1d(MATERIALS[1])
    ops = Operators(Grid1D(12))
    w = a * random_smooth(ops.grid, 3) + b
    theta = b * random_smooth(ops.grid, 4)
    assert dissipation(c, ops, w, theta) >= 0.0


def test_determinism(tmp_path):
    cfg = dict(material=MATERIALS[2], grid=Grid1D(20), dt=1e-2, steps=30,
               u0={"profile": "random_smooth", "seed": 9})
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    run(SimConfig(**cfg)).write_csv(p1)
    run(SimConfig(**cfg)).write_csv(p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_csv_format(tmp_path, fixture_material):
    r = run(SimConfig(fixture_material, Grid1D(12), 1e-2, 3, u0="sin2"))
    path = tmp_path / "trace.csv"
    r.write_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == ",".join(TRACE_HEADER)
    assert len(lines) == 5
    row = lines[1].split(",")
    assert row[0] == "0" and float(row[2]) == r.lyapunov[0]


# ---------------------------------------------------------------------------
# admissibility gate and configuration


def test_gate_rejects_inadmissible():
    bad = replace(ELASTIC, mu=-1.0)
    cfg = SimConfig(bad, Grid1D(10), 1e-2, 2)
    with pytest.raises(InadmissibleMaterialError) as info:
        run(cfg)
    assert not info.value.report.flags["theorem1_hypotheses"]
    forced = run(replace(cfg, force=True))
    assert forced.forced


def test_uniqueness_experiment(fixture_material):
    cfg = SimConfig(fixture_material, Grid1D(16), 1e-2, 100,
                    u0={"profile": "random_smooth", "seed": 4})
    rep = uniqueness_experiment(cfg, 1e-6)
    assert rep.null_max == 0.0
    assert rep.never_exceeds()
    zero = uniqueness_experiment(replace(cfg, steps=10), 0.0)
    assert np.all(zero.diff_lyapunov == 0.0)


def test_config_from_dict(tmp_path, fixture_material):
    cfg = config_from_dict({
        "material": "../configs/default_material.json", "grid": {"N": 12, "L": 2.0},
        "dt": 0.01, "steps": 5, "initial": {"u0": "sin2", "eta0": [0.0] * 12},
        "sources": {"g": {"profile": "sine", "amplitude": 0.1}},
    }, base_dir=TESTS)
    assert cfg.material == fixture_material
    assert cfg.grid.L == 2.0 and cfg.eta0.shape == (12,)
    for bad in ({"grid": {"N": 12}, "dt": 0.1, "steps": 1},
                {"material": {}, "grid": {"N": 12}, "dt": 0.1, "steps": 1, "extra": 1},
                {"material": "../configs/default_material.json", "grid": {"N": 12},
                 "dt": 0.1, "steps": 1, "initial": {"u1": "sine"}}):
        with pytest.raises(ConfigurationError):
            config_from_dict(bad, base_dir=TESTS)


@pytest.mark.parametrize("kwargs", [dict(dt=0.0), dict(dt=-1.0), dict(steps=-1),
                                    dict(boundary="free"), dict(u0=[0.0] * 3),
                                    dict(u0={"profile": "square"}),
                                    dict(eta0="zero", theta_dot0="zero")])
def test_config_validation(kwargs, fixture_material):
    base = dict(material=fixture_material, grid=Grid1D(10), dt=0.1, steps=1)
    with pytest.raises(ConfigurationError):
        SimConfig(**{**base, **kwargs})
