"""Definiteness certification for the uniqueness hypotheses.

Two independent routes are provided:

* ``check_isotropic`` evaluates closed-form inequality lists on the scalar
  moduli of an isotropic material.
* ``check_numeric`` assembles the matrices of W, G and P for an arbitrary
  material and inspects their eigenvalues.

``cross_validate`` runs both on random isotropic materials and reports every
disagreement.  Matrices follow the convention ``f(x) = x^T M x``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .constitutive import as_aniso
from .errors import NonQuadraticError, SymmetryViolationError
from .material import (
    ISO_KEYS,
    AnisoMaterial,
    IsoMaterial,
    expand_isotropic,
    validate_symmetries,
)
from .tensor_core import KAPPA18_EMBED, KAPPA18_LABELS, SYM2_EMBED, SYM2_PAIRS

DEFAULT_TOL = 1e-10
BOUNDARY_BAND = 1e-6

SYM2_LABELS = tuple(f"{i + 1}{j + 1}" for i, j in SYM2_PAIRS)
W_LABELS = tuple("e" + s for s in SYM2_LABELS) + tuple("k" + s for s in KAPPA18_LABELS)
G_LABELS = ("E1", "E2", "E3") + tuple("V" + s for s in SYM2_LABELS) + ("z",)
P_LABELS = ("xi", "eta1", "eta2", "eta3")

A5_SLICES = (slice(0, 5), slice(5, 10), slice(10, 15))
A3_SLICE = slice(15, 18)


@dataclass(frozen=True, eq=False)
class QuadFormMatrix:
    """Symmetric matrix ``M`` of a quadratic form ``f(x) = x^T M x``."""

    matrix: np.ndarray
    ordering: str = ""
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        M = np.array(self.matrix, dtype=float)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise ValueError(f"quadratic-form matrix must be square, got {M.shape}")
        M = 0.5 * (M + M.T)
        M.flags.writeable = False
        object.__setattr__(self, "matrix", M)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def scale(self) -> float:
        return float(np.abs(self.matrix).max()) if self.matrix.size else 0.0

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    def min_eigenvalue(self) -> float:
        return float(self.eigenvalues()[0])

    def is_psd(self, tol: float = DEFAULT_TOL) -> bool:
        return self.min_eigenvalue() >= -tol * self.scale

    def is_pd(self, tol: float = DEFAULT_TOL) -> bool:
        return self.min_eigenvalue() > tol * self.scale

    def value(self, x) -> float:
        x = np.asarray(x, dtype=float)
        return float(x @ self.matrix @ x)


def assemble_quadform(dim: int, evaluator: Callable[[np.ndarray], float],
                      ordering: str = "", labels: Sequence[str] = (),
                      tol: float = 1e-10) -> QuadFormMatrix:
    """Recover ``M`` from a quadratic evaluator by polarization on unit vectors."""
    eye = np.eye(dim)
    diag = np.array([evaluator(eye[p]) for p in range(dim)], dtype=float)
    scale = max(float(np.abs(diag).max()) if dim else 0.0, 1.0)
    f0 = float(evaluator(np.zeros(dim)))
    if abs(f0) > tol * scale:
        raise NonQuadraticError(f"evaluator is not quadratic: f(0) = {f0!r}")
    for p in range(dim):
        f2 = float(evaluator(2.0 * eye[p]))
        fm = float(evaluator(-eye[p]))
        if abs(f2 - 4.0 * diag[p]) > tol * scale or abs(fm - diag[p]) > tol * scale:
            raise NonQuadraticError(f"evaluator is not quadratic along coordinate {p}")
    M = np.diag(diag)
    for p in range(dim):
        for q in range(p + 1, dim):
            M[p, q] = M[q, p] = 0.5 * (float(evaluator(eye[p] + eye[q])) - diag[p] - diag[q])
    return QuadFormMatrix(M, ordering, tuple(labels))


# ---------------------------------------------------------------------------
# Matrix assembly by direct embedding of the coefficient tensors


def w_matrix(m: AnisoMaterial) -> QuadFormMatrix:
    """W over (e: 6 components, kappa: 18 in the block ordering)."""
    A11 = m.a11.reshape(9, 9)
    A12 = m.a12.reshape(9, 27)
    A22 = m.a22.reshape(27, 27)
    Pe, Pk = SYM2_EMBED, KAPPA18_EMBED
    M = np.zeros((24, 24))
    M[:6, :6] = 0.5 * Pe.T @ A11 @ Pe
    M[:6, 6:] = 0.5 * Pe.T @ A12 @ Pk
    M[6:, :6] = M[:6, 6:].T
    M[6:, 6:] = 0.5 * Pk.T @ A22 @ Pk
    return QuadFormMatrix(M, "W-order: e(6)+kappa(18)", W_LABELS)


def w2_matrix(m: AnisoMaterial) -> QuadFormMatrix:
    Pk = KAPPA18_EMBED
    M = 0.5 * Pk.T @ m.a22.reshape(27, 27) @ Pk
    return QuadFormMatrix(M, "kappa18-block-order", W_LABELS[6:])


def g_matrix(m: AnisoMaterial) -> QuadFormMatrix:
    """G over (E: 3, V: 6, z: 1); requires beta != 0."""
    Pe = SYM2_EMBED
    c = m.a44 + m.gamma / m.beta**2
    M = np.zeros((10, 10))
    M[:3, :3] = -0.5 * m.a33
    M[3:9, 3:9] = -0.5 * Pe.T @ m.a77.reshape(9, 9) @ Pe
    M[:3, 3:9] = -0.5 * m.a37.reshape(3, 9) @ Pe
    M[3:9, :3] = M[:3, 3:9].T
    M[:3, 9] = M[9, :3] = -0.5 * m.a34
    M[3:9, 9] = M[9, 3:9] = -0.5 * Pe.T @ m.a47.ravel()
    M[9, 9] = -0.5 * c
    return QuadFormMatrix(M, "G-order: E(3)+V(6)+z(1)", G_LABELS)


def p_matrix(m: AnisoMaterial) -> QuadFormMatrix:
    """P over (xi, eta: 3); requires beta != 0."""
    M = np.zeros((4, 4))
    M[0, 0] = m.gamma
    M[0, 1:] = M[1:, 0] = m.a56
    M[1:, 1:] = m.a66
    return QuadFormMatrix(M / m.beta, "P-order: xi(1)+eta(3)", P_LABELS)


def assemble_W2_matrix(m: IsoMaterial) -> QuadFormMatrix:
    """18x18 strain-gradient matrix in the block ordering, diag(A5, A5, A5, A3)."""
    return w2_matrix(as_aniso(m))


def a3_block(M: QuadFormMatrix) -> np.ndarray:
    return M.matrix[A3_SLICE, A3_SLICE]


def a5_blocks(M: QuadFormMatrix) -> list[np.ndarray]:
    return [M.matrix[s, s] for s in A5_SLICES]


def off_block_max(M: QuadFormMatrix) -> float:
    mask = np.ones((18, 18), dtype=bool)
    for s in (*A5_SLICES, A3_SLICE):
        mask[s, s] = False
    return float(np.abs(M.matrix[mask]).max())


def a3_eigenvalues(gamma4: float, gamma5: float) -> tuple[float, float, float]:
    """Closed-form A3 eigenvalues in ascending order of formula: double root first."""
    d = 2.0 * (gamma4 - gamma5)
    return (d, d, 2.0 * (gamma4 + 2.0 * gamma5))


def a5_similar_matrix(gammas: Sequence[float]) -> tuple[np.ndarray, float, float]:
    """Coupled 3x3 block and the two decoupled eigenvalues of the matrix similar to A5."""
    g1, g2, g3, g4, g5 = gammas
    xi = 2.0 * (g1 + g2 + g5) + 0.5 * (g3 + 2.0 * g4)
    S = np.array([
        [g3 + g4, 0.5 * (2.0 * g1 + g3), 2.0 * (g1 + g5)],
        [2.0 * g1 + g3, xi, 2.0 * (g1 + 2.0 * g2)],
        [2.0 * (g1 + g5), g1 + 2.0 * g2, 2.0 * (2.0 * g2 + g4 + g5)],
    ])
    root = math.hypot(g4 + 2.0 * g5, 4.0 * g5)
    xi1 = 0.5 * (3.0 * g4 + 2.0 * g5 + root)
    xi2 = 0.5 * (3.0 * g4 + 2.0 * g5 - root)
    return S, xi1, xi2


@dataclass(frozen=True)
class A5Comparison:
    assembled: tuple[float, ...]
    similar: tuple[float, ...]
    max_rel_diff: float
    passed: bool


def a5_eigen_check(m: IsoMaterial, rtol: float = 1e-9) -> A5Comparison:
    """Compare eigenvalues of the assembled A5 block with those of the similar matrix."""
    block = a5_blocks(assemble_W2_matrix(m))[0]
    assembled = np.sort(np.linalg.eigvalsh(block))
    S, xi1, xi2 = a5_similar_matrix(m.gammas)
    # S is similar to a symmetric matrix, so any imaginary parts are roundoff
    similar = np.sort(np.concatenate([np.linalg.eigvals(S).real, [xi1, xi2]]))
    scale = max(float(np.abs(assembled).max()), float(np.abs(similar).max()))
    diff = float(np.abs(assembled - similar).max())
    rel = diff / scale if scale > 0 else diff
    return A5Comparison(tuple(assembled.tolist()), tuple(similar.tolist()), rel, rel <= rtol)


# ---------------------------------------------------------------------------
# Reports


@dataclass(frozen=True)
class Condition:
    """One inequality.  ``margin`` is signed: positive means satisfied with room."""

    name: str
    group: str
    expression: str
    strict: bool
    margin: float | None
    passed: bool

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "group": self.group,
            "expression": self.expression,
            "sense": "> 0" if self.strict else ">= 0",
            "margin": self.margin,
            "pass": self.passed,
        }


def _condition(name: str, group: str, expression: str, margin: float | None,
               strict: bool, tol: float) -> Condition:
    if margin is None or not math.isfinite(margin):
        return Condition(name, group, expression, strict, None, False)
    passed = margin > tol if strict else margin >= -tol
    return Condition(name, group, expression, strict, float(margin), passed)


@dataclass(frozen=True)
class AdmissibilityReport:
    method: str
    tolerance: float
    conditions: tuple[Condition, ...]
    flags: dict = field(default_factory=dict)
    eigenvalues: dict = field(default_factory=dict)

    def group_passed(self, group: str) -> bool:
        members = [c for c in self.conditions if c.group == group]
        return all(c.passed for c in members)

    def failures(self) -> list[Condition]:
        return [c for c in self.conditions if not c.passed]

    def __getitem__(self, name: str) -> Condition:
        for c in self.conditions:
            if c.name == name:
                return c
        raise KeyError(name)

    @property
    def all_passed(self) -> bool:
        """True when every uniqueness theorem that applies has its hypotheses met."""
        applicable = [v for k, v in self.flags.items()
                      if k.startswith("theorem") and v is not None]
        return bool(applicable) and all(applicable)

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "tolerance": self.tolerance,
            "flags": self.flags,
            "all_passed": self.all_passed,
            "conditions": [c.to_dict() for c in self.conditions],
            "eigenvalues": self.eigenvalues,
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True)


def _positivity(m, tol: float) -> list[Condition]:
    return [
        _condition("rho > 0", "positivity", "rho", m.rho, True, 0.0),
        _condition("T0 > 0", "positivity", "T0", m.T0, True, 0.0),
        _condition("beta > 0", "positivity", "beta", m.beta, True, 0.0),
    ]


def w2_margins(gammas: Sequence[float]) -> list[tuple[str, str, float]]:
    """Closed-form strain-gradient conditions as (name, expression, margin)."""
    g1, g2, g3, g4, g5 = gammas
    return [
        ("W2.1", "g3 + g4", g3 + g4),
        ("W2.2", "g4 - g5", g4 - g5),
        ("W2.3", "g4 + 2 g5", g4 + 2 * g5),
        ("W2.4", "2 g2 + g4 + g5", 2 * g2 + g4 + g5),
        ("W2.5", "4 (g1 + g2 + g5) + g3 + 2 g4", 4 * (g1 + g2 + g5) + g3 + 2 * g4),
        ("W2.6", "(g3 + g4)(4 g2 + 3 g4 + 4 g5) - (2 g1 - g4)^2",
         (g3 + g4) * (4 * g2 + 3 * g4 + 4 * g5) - (2 * g1 - g4) ** 2),
        ("W2.7", "(g3 + g4)(2 g2 + g4 + g5) - 2 (g1 + g5)^2",
         (g3 + g4) * (2 * g2 + g4 + g5) - 2 * (g1 + g5) ** 2),
        ("W2.8", "(2 g2 + g4 + g5)(g3 + 4 g4 + 6 g5) - 2 (g1 - g4 - g5)^2",
         (2 * g2 + g4 + g5) * (g3 + 4 * g4 + 6 * g5) - 2 * (g1 - g4 - g5) ** 2),
        ("W2.9", "(g4 + 2 g5)[(5 g3 + 4 g4 - 2 g5)(10 g2 + 3 g4 + g5) - 2 (5 g1 - g4 + 3 g5)^2]",
         (g4 + 2 * g5) * ((5 * g3 + 4 * g4 - 2 * g5) * (10 * g2 + 3 * g4 + g5)
                          - 2 * (5 * g1 - g4 + 3 * g5) ** 2)),
    ]


def check_isotropic(m: IsoMaterial, tol: float = DEFAULT_TOL) -> AdmissibilityReport:
    """Closed-form admissibility of an isotropic material.

    Non-strict conditions pass with margin >= -tol, strict ones need margin > tol.
    The electric-field condition requires alpha33 < 0, the sign under which
    -½ alpha33 |E|² is positive.
    """
    conds = _positivity(m, tol)
    conds += [
        _condition("W1.mu", "W1", "mu", m.mu, False, tol),
        _condition("W1.bulk", "W1", "3 lambda + 2 mu", 3 * m.lam + 2 * m.mu, False, tol),
    ]
    conds += [_condition(n, "W2", expr, v, False, tol) for n, expr, v in w2_margins(m.gammas)]

    c = m.a44 + m.gamma / m.beta**2 if m.beta != 0 else None
    bulk_t = 3 * m.lambda_tilde + 2 * m.mu_tilde
    conds += [
        _condition("G.mu_tilde", "G", "-mu_tilde", -m.mu_tilde, True, tol),
        _condition("G.bulk_tilde", "G", "-(3 lambda_tilde + 2 mu_tilde)", -bulk_t, True, tol),
        _condition("G.alpha33", "G", "-alpha33", -m.alpha33, True, tol),
        _condition("G.capacity", "G", "-(a44 + gamma/beta^2)",
                   None if c is None else -c, True, tol),
        _condition("G.coupling", "G",
                   "(3 lambda_tilde + 2 mu_tilde)(a44 + gamma/beta^2) - 3 alpha47^2",
                   None if c is None else bulk_t * c - 3 * m.alpha47**2, True, tol),
    ]
    inv_beta = 1.0 / m.beta if m.beta != 0 else None
    conds += [
        _condition("P.gamma", "P", "gamma/beta",
                   None if inv_beta is None else m.gamma * inv_beta, False, tol),
        _condition("P.alpha66", "P", "alpha66/beta",
                   None if inv_beta is None else m.alpha66 * inv_beta, False, tol),
        _condition("T2.gamma", "theorem2", "gamma", m.gamma, False, tol),
        _condition("T2.alpha66", "theorem2", "alpha66", m.alpha66, False, tol),
    ]
    report = AdmissibilityReport("closed-form isotropic", tol, tuple(conds))
    ok = report.group_passed
    w_psd = ok("W1") and ok("W2")
    t1 = ok("positivity") and w_psd and ok("G") and ok("P")
    report.flags.update(
        W1_psd=ok("W1"), W2_psd=ok("W2"), W_psd=w_psd, G_pd=ok("G"), P_psd=ok("P"),
        theorem1_hypotheses=t1,
        theorem2_hypotheses=ok("positivity") and ok("theorem2") and w_psd and ok("G"),
    )
    return report


def _eig_condition(name: str, group: str, M: QuadFormMatrix | None, strict: bool,
                   tol: float) -> Condition:
    if M is None:
        return Condition(name, group, "min eigenvalue (beta = 0)", strict, None, False)
    lam = M.min_eigenvalue()
    thresh = tol * M.scale
    margin = lam - thresh if strict else lam + thresh
    passed = margin > 0 if strict else margin >= 0
    sense = f"min eig {'>' if strict else '>='} {'+' if strict else '-'}tol*max|M|"
    return Condition(name, group, sense, strict, margin, passed)


def check_numeric(m: AnisoMaterial | IsoMaterial, tol: float = DEFAULT_TOL) -> AdmissibilityReport:
    """Eigenvalue-based admissibility for any symmetry-valid material."""
    m = as_aniso(m)
    sym = validate_symmetries(m)
    if not sym.passed:
        worst = max(sym.failures(), key=lambda r: r.max_violation)
        raise SymmetryViolationError(
            f"material violates {worst.relation!r} by {worst.max_violation:.3e}",
            worst_index=worst.relation, violation=worst.max_violation,
        )
    W = w_matrix(m)
    G = g_matrix(m) if m.beta != 0 else None
    P = p_matrix(m) if m.beta != 0 else None
    conds = _positivity(m, tol)
    conds += [
        _eig_condition("W psd", "W", W, False, tol),
        _eig_condition("G pd", "G", G, True, tol),
        _eig_condition("P psd", "P", P, False, tol),
    ]
    eig = {"W": W.eigenvalues().tolist()}
    if G is not None:
        eig["G"] = G.eigenvalues().tolist()
        eig["P"] = P.eigenvalues().tolist()
    report = AdmissibilityReport("numeric eigenvalue", tol, tuple(conds), eigenvalues=eig)
    ok = report.group_passed
    report.flags.update(
        W_psd=ok("W"), G_pd=ok("G"), P_psd=ok("P"),
        theorem1_hypotheses=ok("positivity") and ok("W") and ok("G") and ok("P"),
        theorem2_hypotheses=None,
    )
    return report


def check(m: AnisoMaterial | IsoMaterial, tol: float = DEFAULT_TOL) -> AdmissibilityReport:
    """Closed-form check for isotropic materials, eigenvalue check otherwise."""
    if isinstance(m, IsoMaterial):
        return check_isotropic(m, tol)
    return check_numeric(m, tol)


# ---------------------------------------------------------------------------
# Cross-validation of the closed-form lists against the eigenvalue oracle

CROSS_FORMS = ("W", "W2", "G", "P")


def random_isotropic(rng: np.random.Generator, range_: float) -> IsoMaterial:
    """Isotropic material with every scalar uniform in [-range_, range_]; rho, T0, beta > 0."""
    values = {attr: float(rng.uniform(-range_, range_)) for attr in ISO_KEYS.values()}
    for attr in ("rho", "T0", "beta"):
        values[attr] = abs(values[attr]) or range_
    return IsoMaterial(**values)


def _closed_verdicts(rep: AdmissibilityReport) -> dict[str, bool]:
    return {"W": rep.flags["W_psd"], "W2": rep.flags["W2_psd"],
            "G": rep.flags["G_pd"], "P": rep.flags["P_psd"]}


def cross_validate(samples: int, range_: float = 2.0, seed: int = 1,
                   forms: Sequence[str] = CROSS_FORMS, tol: float = DEFAULT_TOL,
                   band: float = BOUNDARY_BAND) -> dict:
    """Compare ``check_isotropic`` with eigenvalue verdicts on random materials.

    Samples whose minimum eigenvalue lies within ``band * max|M|`` of zero are
    counted as boundary cases and left out of the comparison.
    """
    if samples < 0:
        raise ValueError("samples must be non-negative")
    for f in forms:
        if f not in CROSS_FORMS:
            raise ValueError(f"unknown form {f!r}; choose from {CROSS_FORMS}")
    rng = np.random.default_rng(seed)
    tested = {f: 0 for f in forms}
    boundary = {f: 0 for f in forms}
    agree = {f: 0 for f in forms}
    positive = {f: 0 for f in forms}
    disagreements = []
    for index in range(samples):
        iso = random_isotropic(rng, range_)
        closed = _closed_verdicts(check_isotropic(iso, tol))
        aniso = expand_isotropic(iso)
        matrices = {"W": lambda: w_matrix(aniso), "W2": lambda: w2_matrix(aniso),
                    "G": lambda: g_matrix(aniso), "P": lambda: p_matrix(aniso)}
        for f in forms:
            M = matrices[f]()
            lam = M.min_eigenvalue()
            if abs(lam) < band * M.scale:
                boundary[f] += 1
                continue
            numeric = M.is_pd(tol) if f == "G" else M.is_psd(tol)
            tested[f] += 1
            positive[f] += int(numeric)
            if numeric == closed[f]:
                agree[f] += 1
            else:
                disagreements.append({
                    "sample": index, "form": f, "closed_form": closed[f],
                    "numeric": numeric, "min_eigenvalue": lam,
                    "material": iso.to_dict(),
                })
    fraction = {f: (agree[f] / tested[f] if tested[f] else 1.0) for f in forms}
    return {
        "samples": samples,
        "range": range_,
        "seed": seed,
        "tolerance": tol,
        "boundary_band": band,
        "forms": list(forms),
        "tested": tested,
        "boundary_excluded": boundary,
        "numeric_positive": positive,
        "agreement": fraction,
        "disagreements": disagreements,
        "all_agree": not disagreements,
    }
