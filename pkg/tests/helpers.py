"""Shared oracles for the constitutive identity and random materials."""

from __future__ import annotations

import numpy as np

from thermopiezo.constitutive import LocalState, evaluate, form_F, form_W
from thermopiezo.material import TENSOR_RANKS, AnisoMaterial, symmetrize
from thermopiezo.tensor_core import Kappa, Sym2

# component counts of the path variables: e, kappa, E, theta, gradTheta, V
PATH_SIZES = {"e": 6, "kappa": 18, "E": 3, "theta": 1, "grad_theta": 3, "V": 6}


def random_aniso(rng: np.random.Generator, scale: float = 1.0) -> AnisoMaterial:
    tensors = {name: scale * symmetrize(name, rng.normal(size=(3,) * rank))
               for name, rank in TENSOR_RANKS.items()}
    return AnisoMaterial(rho=float(rng.uniform(0.5, 2)), T0=float(rng.uniform(0.5, 2)),
                         beta=float(rng.uniform(0.5, 2)), alpha4=float(rng.normal()),
                         gamma=float(rng.normal()), a44=float(rng.normal()), **tensors)


def random_path(rng: np.random.Generator, degree: int = 3) -> dict[str, np.ndarray]:
    """Polynomial coefficients, shape (degree + 1, size), for every path variable."""
    return {k: rng.normal(size=(degree + 1, n)) for k, n in PATH_SIZES.items()}


def _poly(c: np.ndarray, t: float, deriv: int = 0) -> np.ndarray:
    out = np.zeros(c.shape[1])
    for p in range(deriv, c.shape[0]):
        fac = np.prod(np.arange(p - deriv + 1, p + 1)) if deriv else 1.0
        out += fac * c[p] * t ** (p - deriv)
    return out


def state_at(path: dict[str, np.ndarray], t: float, deriv: int = 0) -> LocalState:
    """State (or its ``deriv``-th time derivative) along the path; theta_dot = d theta/dt."""
    return LocalState(
        e=Sym2(_poly(path["e"], t, deriv)),
        kappa=Kappa(_poly(path["kappa"], t, deriv)),
        E=_poly(path["E"], t, deriv),
        theta=float(_poly(path["theta"], t, deriv)[0]),
        theta_dot=float(_poly(path["theta"], t, deriv + 1)[0]),
        grad_theta=_poly(path["grad_theta"], t, deriv),
        V=Sym2(_poly(path["V"], t, deriv)),
    )


def identity_error(m: AnisoMaterial, path: dict[str, np.ndarray], t0: float, dt: float) -> float:
    """Difference of the two sides of the stress-power identity, with the
    response rates and the energy rate replaced by central differences."""
    s = state_at(path, t0)
    sd = state_at(path, t0, deriv=1)
    sdd = state_at(path, t0, deriv=2)
    r = evaluate(m, s)
    rp, rm = evaluate(m, state_at(path, t0 + dt)), evaluate(m, state_at(path, t0 - dt))
    z = s.z(m.beta)

    sigma_dot = (rp.sigma - rm.sigma) / (2 * dt)
    Q_dot = (rp.Q.full() - rm.Q.full()) / (2 * dt)
    rho_eta_dot = (rp.rho_eta - rm.rho_eta) / (2 * dt)
    lhs = (np.sum(r.tau.full() * sd.e.full())
           + np.sum(r.mu.full() * sd.kappa.full())
           + sigma_dot @ s.E
           + np.sum(Q_dot.T * s.V.full())
           + rho_eta_dot * z)

    def energy(t: float) -> float:
        st = state_at(path, t)
        zt = st.z(m.beta)
        return form_W(m, st.e, st.kappa) + form_F(m, st.E, st.V, zt) - 0.5 * m.a44 * zt**2

    energy_rate = (energy(t0 + dt) - energy(t0 - dt)) / (2 * dt)
    rhs = energy_rate - (m.gamma * sdd.theta + m.a56 @ sd.grad_theta) * z / m.beta
    return abs(lhs - rhs)


SAMPLE_TIMES = (-0.5, -0.25, 0.0, 0.25, 0.5)


def path_identity_error(m: AnisoMaterial, path: dict[str, np.ndarray], dt: float,
                        times=SAMPLE_TIMES) -> float:
    """Largest identity error over several times along the path.

    A single time can sit where the leading error coefficient vanishes, which
    hides the asymptotic order; the maximum over the path does not.
    """
    return max(identity_error(m, path, t, dt) for t in times)


def observed_orders(errors) -> np.ndarray:
    e = np.asarray(errors, dtype=float)
    return np.log2(e[:-1] / e[1:])


def admissible_variants(rng: np.random.Generator, count: int, spread: float = 0.5) -> list:
    """Admissible isotropic materials drawn around the default fixture, all with
    nonzero third-order coupling."""
    from dataclasses import replace

    from thermopiezo.admissibility import check_isotropic
    from thermopiezo.material import default_material
    from thermopiezo.simulator1d import reduce_to_1d

    base = default_material()
    names = ("lam", "mu", "gamma3", "gamma4", "lambda_star", "mu_star", "alpha0", "beta0",
             "lambda_tilde", "mu_tilde", "alpha33", "alpha47", "a44", "gamma", "alpha14",
             "alpha66", "rho", "beta")
    out = []
    while len(out) < count:
        kw = {n: getattr(base, n) * float(np.exp(rng.uniform(-spread, spread))) for n in names}
        kw["lambda_star"] += float(rng.uniform(0.05, 0.3))
        m = replace(base, **kw)
        if check_isotropic(m).all_passed and reduce_to_1d(m).Cu != 0:
            out.append(m)
    return out
