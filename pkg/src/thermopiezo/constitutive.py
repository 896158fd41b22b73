"""Reduced linear constitutive map and the quadratic forms of the energy method.

All contractions run over full index ranges on expanded tensors.  The
thermal variables enter the couplings only through ``z = theta + beta*theta_dot``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import DegenerateCoefficientError, InvalidInputError
from .material import AnisoMaterial, IsoMaterial, expand_isotropic
from .tensor_core import Kappa, Sym2, as_vec3


def _zero3() -> np.ndarray:
    return np.zeros(3)


@dataclass(frozen=True, eq=False)
class LocalState:
    """Independent constitutive variables at a material point."""

    e: Sym2 = field(default_factory=Sym2.zeros)
    kappa: Kappa = field(default_factory=Kappa.zeros)
    E: np.ndarray = field(default_factory=_zero3)
    theta: float = 0.0
    theta_dot: float = 0.0
    grad_theta: np.ndarray = field(default_factory=_zero3)
    V: Sym2 = field(default_factory=Sym2.zeros)
    u_dot: np.ndarray = field(default_factory=_zero3)

    def __post_init__(self):
        if not isinstance(self.e, Sym2) or not isinstance(self.V, Sym2):
            raise InvalidInputError("e and V must be Sym2")
        if not isinstance(self.kappa, Kappa):
            raise InvalidInputError("kappa must be Kappa")
        for name in ("E", "grad_theta", "u_dot"):
            object.__setattr__(self, name, as_vec3(getattr(self, name), name))
        for name in ("theta", "theta_dot"):
            value = float(getattr(self, name))
            if not np.isfinite(value):
                raise InvalidInputError(f"{name} must be finite")
            object.__setattr__(self, name, value)

    def z(self, beta: float) -> float:
        return self.theta + beta * self.theta_dot

    def __add__(self, other: LocalState) -> LocalState:
        return LocalState(
            self.e + other.e, self.kappa + other.kappa, self.E + other.E,
            self.theta + other.theta, self.theta_dot + other.theta_dot,
            self.grad_theta + other.grad_theta, self.V + other.V, self.u_dot + other.u_dot,
        )

    def __mul__(self, c: float) -> LocalState:
        return LocalState(
            self.e * c, self.kappa * c, c * self.E, c * self.theta, c * self.theta_dot,
            c * self.grad_theta, self.V * c, c * self.u_dot,
        )

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class Response:
    """Dependent fields returned by ``evaluate``."""

    tau: Sym2
    mu: Kappa
    sigma: np.ndarray
    rho_eta: float
    Q: Sym2
    q: np.ndarray

    def to_dict(self) -> dict:
        return {
            "tau": self.tau.full().tolist(),
            "mu": self.mu.full().tolist(),
            "sigma": self.sigma.tolist(),
            "rhoEta": self.rho_eta,
            "Q": self.Q.full().tolist(),
            "q": self.q.tolist(),
        }


@lru_cache(maxsize=64)
def _expanded(m: IsoMaterial) -> AnisoMaterial:
    return expand_isotropic(m)


def as_aniso(m: AnisoMaterial | IsoMaterial) -> AnisoMaterial:
    """Accept either material kind; isotropic ones are expanded (and cached)."""
    if isinstance(m, IsoMaterial):
        return _expanded(m)
    return m


def _inv_beta(m: AnisoMaterial) -> float:
    if m.beta == 0.0:
        raise DegenerateCoefficientError("beta = 0: the thermal relaxation coefficient must be nonzero")
    return 1.0 / m.beta


def _sym_pair(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + np.swapaxes(a, 0, 1))


def evaluate(m: AnisoMaterial | IsoMaterial, s: LocalState) -> Response:
    """Stress, hyperstress, electric response, entropy, quadrupole and heat flux."""
    m = as_aniso(m)
    inv_beta = _inv_beta(m)
    e = s.e.full()
    k = s.kappa.full()
    V = s.V.full()
    E = s.E
    z = s.z(m.beta)

    tau = (np.einsum("ijkl,kl->ij", m.a11, e)
           + np.einsum("ijklh,klh->ij", m.a12, k)
           + np.einsum("ijk,k->ij", m.a13, E)
           + m.a14 * z
           + np.einsum("ijkl,kl->ij", m.a17, V))
    mu = (np.einsum("lhijk,lh->ijk", m.a12, e)
          + np.einsum("ijklhm,lhm->ijk", m.a22, k)
          + np.einsum("ijkl,l->ijk", m.a23, E)
          + m.a24 * z
          + np.einsum("ijklh,lh->ijk", m.a27, V))
    minus_sigma = (np.einsum("jki,jk->i", m.a13, e)
                   + np.einsum("jkli,jkl->i", m.a23, k)
                   + m.a33 @ E
                   + m.a34 * z
                   + np.einsum("ijk,jk->i", m.a37, V))
    minus_rho_eta = (np.einsum("ij,ij->", m.a14, e)
                     + np.einsum("ijk,ijk->", m.a24, k)
                     + m.a34 @ E
                     + m.a44 * z
                     + np.einsum("ij,ij->", m.a47, V)
                     + inv_beta * (m.gamma * s.theta_dot + m.a56 @ s.grad_theta)
                     + m.alpha4)
    minus_Q = (np.einsum("klij,kl->ij", m.a17, e)
               + np.einsum("klmij,klm->ij", m.a27, k)
               + np.einsum("kij,k->ij", m.a37, E)
               + m.a47 * z
               + np.einsum("ijkl,kl->ij", m.a77, V))
    q = -m.T0 * inv_beta * (m.a56 * s.theta_dot + m.a66 @ s.grad_theta)

    return Response(
        tau=Sym2.from_full(_sym_pair(tau), tol=np.inf),
        mu=Kappa.from_full(_sym_pair(mu), tol=np.inf),
        sigma=-minus_sigma,
        rho_eta=-float(minus_rho_eta),
        Q=Sym2.from_full(-_sym_pair(minus_Q), tol=np.inf),
        q=q,
    )


def form_W(m: AnisoMaterial | IsoMaterial, e: Sym2, kappa: Kappa) -> float:
    """Strain energy ``½a11 ee + ½a22 κκ + a12 eκ``."""
    m = as_aniso(m)
    ef = e.full()
    kf = kappa.full()
    return float(
        0.5 * np.einsum("ijkl,ij,kl->", m.a11, ef, ef)
        + 0.5 * np.einsum("ijklhm,ijk,lhm->", m.a22, kf, kf)
        + np.einsum("ijklh,ij,klh->", m.a12, ef, kf)
    )


def form_F(m: AnisoMaterial | IsoMaterial, E, V: Sym2, z: float) -> float:
    m = as_aniso(m)
    E = as_vec3(E, "E")
    Vf = V.full()
    return float(
        -0.5 * E @ m.a33 @ E
        - 0.5 * np.einsum("ijkl,ij,kl->", m.a77, Vf, Vf)
        - np.einsum("ijk,i,jk->", m.a37, E, Vf)
        - (m.a34 @ E) * z
        - np.einsum("ij,ij->", m.a47, Vf) * z
    )


def thermal_capacity(m: AnisoMaterial | IsoMaterial) -> float:
    """The combination ``a44 + γ/β²`` multiplying ``-½z²`` in G."""
    inv_beta = _inv_beta(m)
    return m.a44 + m.gamma * inv_beta**2


def form_G(m: AnisoMaterial | IsoMaterial, E, V: Sym2, z: float) -> float:
    m = as_aniso(m)
    return form_F(m, E, V, z) - 0.5 * thermal_capacity(m) * z * z


def form_P(m: AnisoMaterial | IsoMaterial, xi: float, eta) -> float:
    """Dissipation form ``(γξ² + 2a56·ξη + a66 ηη)/β``."""
    m = as_aniso(m)
    inv_beta = _inv_beta(m)
    eta = as_vec3(eta, "eta")
    return float(inv_beta * (m.gamma * xi * xi + 2.0 * xi * (m.a56 @ eta) + eta @ m.a66 @ eta))


def lyapunov_density(m: AnisoMaterial | IsoMaterial, s: LocalState) -> float:
    """``W + G + ½ρ|u̇|² + ½βP(-θ/β, ∇θ)``."""
    m = as_aniso(m)
    inv_beta = _inv_beta(m)
    return (form_W(m, s.e, s.kappa)
            + form_G(m, s.E, s.V, s.z(m.beta))
            + 0.5 * m.rho * float(s.u_dot @ s.u_dot)
            + 0.5 * m.beta * form_P(m, -s.theta * inv_beta, s.grad_theta))
