"""Material coefficient containers, symmetry validation and file loading.

Two kinds of material are supported:

* ``AnisoMaterial`` carries every coefficient tensor of the reduced linear
  theory over full index ranges.
* ``IsoMaterial`` carries the scalar moduli of an isotropic material with a
  centre of symmetry; ``expand_isotropic`` turns it into an ``AnisoMaterial``.

The scalar ``gamma`` is the combination that survives the thermodynamic
reduction of the thermal coefficients; the pieces it is built from are
never needed at runtime.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, fields, replace
from functools import lru_cache
from pathlib import Path

import numpy as np

from .errors import (
    InvalidInputError,
    MaterialFileError,
    MissingFieldError,
    SymmetryViolationError,
    UnknownFieldError,
)

DEFAULT_SYMMETRY_TOL = 1e-10

TENSOR_RANKS: dict[str, int] = {
    "a11": 4, "a12": 5, "a13": 3, "a14": 2, "a17": 4,
    "a22": 6, "a23": 4, "a24": 3, "a27": 5,
    "a33": 2, "a34": 1, "a37": 3,
    "a47": 2, "a56": 1, "a66": 2, "a77": 4,
}

ANISO_SCALARS = ("rho", "T0", "beta", "alpha4", "gamma", "a44")


def _zeros(name: str) -> np.ndarray:
    return np.zeros((3,) * TENSOR_RANKS[name])


def _check_positive(name: str, value: float) -> None:
    if not (math.isfinite(value) and value > 0):
        raise InvalidInputError(f"{name} must be a positive finite number, got {value!r}")


@dataclass(frozen=True, eq=False)
class AnisoMaterial:
    """Full coefficient set of the reduced linear theory."""

    rho: float
    T0: float
    beta: float
    alpha4: float = 0.0
    gamma: float = 0.0
    a44: float = 0.0
    a11: np.ndarray = field(default_factory=lambda: _zeros("a11"))
    a12: np.ndarray = field(default_factory=lambda: _zeros("a12"))
    a13: np.ndarray = field(default_factory=lambda: _zeros("a13"))
    a14: np.ndarray = field(default_factory=lambda: _zeros("a14"))
    a17: np.ndarray = field(default_factory=lambda: _zeros("a17"))
    a22: np.ndarray = field(default_factory=lambda: _zeros("a22"))
    a23: np.ndarray = field(default_factory=lambda: _zeros("a23"))
    a24: np.ndarray = field(default_factory=lambda: _zeros("a24"))
    a27: np.ndarray = field(default_factory=lambda: _zeros("a27"))
    a33: np.ndarray = field(default_factory=lambda: _zeros("a33"))
    a34: np.ndarray = field(default_factory=lambda: _zeros("a34"))
    a37: np.ndarray = field(default_factory=lambda: _zeros("a37"))
    a47: np.ndarray = field(default_factory=lambda: _zeros("a47"))
    a56: np.ndarray = field(default_factory=lambda: _zeros("a56"))
    a66: np.ndarray = field(default_factory=lambda: _zeros("a66"))
    a77: np.ndarray = field(default_factory=lambda: _zeros("a77"))

    def __post_init__(self):
        for name in ANISO_SCALARS:
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise InvalidInputError(f"{name} must be finite")
            object.__setattr__(self, name, value)
        _check_positive("rho", self.rho)
        _check_positive("T0", self.T0)
        for name, rank in TENSOR_RANKS.items():
            arr = np.array(getattr(self, name), dtype=float)
            if arr.shape != (3,) * rank:
                raise InvalidInputError(
                    f"{name} must have shape {(3,) * rank}, got {arr.shape}"
                )
            if not np.all(np.isfinite(arr)):
                raise InvalidInputError(f"{name} contains non-finite values")
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    def tensors(self) -> dict[str, np.ndarray]:
        return {name: getattr(self, name) for name in TENSOR_RANKS}

    def scaled(self, factor: float) -> AnisoMaterial:
        """Copy with every coefficient (gamma and a44 included) multiplied by ``factor``."""
        changes = {name: factor * arr for name, arr in self.tensors().items()}
        changes.update(gamma=factor * self.gamma, a44=factor * self.a44)
        return replace(self, **changes)


# JSON key -> attribute name
ISO_KEYS: dict[str, str] = {
    "rho": "rho", "T0": "T0", "beta": "beta", "alpha4": "alpha4", "gamma": "gamma",
    "lambda": "lam", "mu": "mu",
    "gamma1": "gamma1", "gamma2": "gamma2", "gamma3": "gamma3",
    "gamma4": "gamma4", "gamma5": "gamma5",
    "lambdaStar": "lambda_star", "muStar": "mu_star",
    "alpha0": "alpha0", "beta0": "beta0",
    "lambdaTilde": "lambda_tilde", "muTilde": "mu_tilde",
    "alpha14": "alpha14", "alpha33": "alpha33", "alpha47": "alpha47",
    "alpha66": "alpha66", "a44": "a44",
}
ISO_OPTIONAL = {"alpha4"}


@dataclass(frozen=True)
class IsoMaterial:
    """Isotropic, centro-symmetric material described by scalar moduli."""

    rho: float
    T0: float
    beta: float
    alpha4: float = 0.0
    gamma: float = 0.0
    lam: float = 0.0
    mu: float = 0.0
    gamma1: float = 0.0
    gamma2: float = 0.0
    gamma3: float = 0.0
    gamma4: float = 0.0
    gamma5: float = 0.0
    lambda_star: float = 0.0
    mu_star: float = 0.0
    alpha0: float = 0.0
    beta0: float = 0.0
    lambda_tilde: float = 0.0
    mu_tilde: float = 0.0
    alpha14: float = 0.0
    alpha33: float = 0.0
    alpha47: float = 0.0
    alpha66: float = 0.0
    a44: float = 0.0

    def __post_init__(self):
        for f in fields(self):
            value = float(getattr(self, f.name))
            if not math.isfinite(value):
                raise InvalidInputError(f"{f.name} must be finite")
            object.__setattr__(self, f.name, value)
        _check_positive("rho", self.rho)
        _check_positive("T0", self.T0)

    @property
    def gammas(self) -> tuple[float, float, float, float, float]:
        return (self.gamma1, self.gamma2, self.gamma3, self.gamma4, self.gamma5)

    def to_dict(self) -> dict:
        out = {"kind": "isotropic"}
        out.update({key: getattr(self, attr) for key, attr in ISO_KEYS.items()})
        return out


def default_material() -> IsoMaterial:
    """Dimensionless admissible material used by the simulator tests and examples."""
    return IsoMaterial(
        rho=1.0, T0=1.0, beta=1.0, alpha4=0.0, gamma=1.0,
        lam=1.0, mu=1.0,
        gamma1=0.0, gamma2=0.0, gamma3=1.0, gamma4=1.0, gamma5=0.0,
        lambda_star=0.1, mu_star=0.1, alpha0=0.1, beta0=0.1,
        lambda_tilde=-1.0, mu_tilde=-0.5,
        alpha14=0.2, alpha33=-1.0, alpha47=0.1, alpha66=1.0, a44=-2.0,
    )


# ---------------------------------------------------------------------------
# Isotropic expansion


@lru_cache(maxsize=1)
def _iso_basis():
    d = np.eye(3)

    def e(spec: str) -> np.ndarray:
        return np.einsum(spec, d, d, d)

    # indices (i, j, k, m, n, r) of a22_{ijkmnr}
    g1 = (e("ij,km,nr->ijkmnr") + e("ij,kn,mr->ijkmnr")
          + e("ik,jr,mn->ijkmnr") + e("ir,jk,mn->ijkmnr"))
    g2 = (e("ik,jm,nr->ijkmnr") + e("ik,jn,mr->ijkmnr")
          + e("im,jk,nr->ijkmnr") + e("in,jk,mr->ijkmnr"))
    g3 = e("ij,kr,mn->ijkmnr")
    g4 = e("im,jn,kr->ijkmnr") + e("in,jm,kr->ijkmnr")
    g5 = (e("im,jr,kn->ijkmnr") + e("in,jr,km->ijkmnr")
          + e("ir,jm,kn->ijkmnr") + e("ir,jn,km->ijkmnr"))
    trace4 = np.einsum("ij,kl->ijkl", d, d)
    sym4 = np.einsum("ik,jl->ijkl", d, d) + np.einsum("il,jk->ijkl", d, d)
    for arr in (g1, g2, g3, g4, g5, trace4, sym4):
        arr.flags.writeable = False
    return (g1, g2, g3, g4, g5), trace4, sym4


def expand_isotropic(m: IsoMaterial) -> AnisoMaterial:
    """Full coefficient tensors of an isotropic centro-symmetric material."""
    g_basis, trace4, sym4 = _iso_basis()
    d = np.eye(3)
    a22 = sum(g * b for g, b in zip(m.gammas, g_basis))
    return AnisoMaterial(
        rho=m.rho, T0=m.T0, beta=m.beta, alpha4=m.alpha4, gamma=m.gamma, a44=m.a44,
        a11=m.lam * trace4 + m.mu * sym4,
        a17=m.lambda_star * trace4 + m.mu_star * sym4,
        a22=a22,
        a23=m.alpha0 * trace4 + m.beta0 * sym4,
        a77=m.lambda_tilde * trace4 + m.mu_tilde * sym4,
        a14=m.alpha14 * d,
        a33=m.alpha33 * d,
        a47=m.alpha47 * d,
        a66=m.alpha66 * d,
    )


# ---------------------------------------------------------------------------
# Symmetry validation

# (relation name, tensor, axis permutation that must leave the tensor unchanged).
# Second-pair relations of the rank-4 tensors follow from the other two but are
# listed so that a swap inside the second pair is reported under its own name.
SYMMETRY_RELATIONS: tuple[tuple[str, str, tuple[int, ...]], ...] = (
    ("a11 first-pair symmetry", "a11", (1, 0, 2, 3)),
    ("a11 major symmetry", "a11", (2, 3, 0, 1)),
    ("a11 second-pair symmetry", "a11", (0, 1, 3, 2)),
    ("a12 first-pair symmetry", "a12", (1, 0, 2, 3, 4)),
    ("a12 second-pair symmetry", "a12", (0, 1, 3, 2, 4)),
    ("a13 first-pair symmetry", "a13", (1, 0, 2)),
    ("a14 symmetry", "a14", (1, 0)),
    ("a17 first-pair symmetry", "a17", (1, 0, 2, 3)),
    ("a17 major symmetry", "a17", (2, 3, 0, 1)),
    ("a17 second-pair symmetry", "a17", (0, 1, 3, 2)),
    ("a22 first-pair symmetry", "a22", (1, 0, 2, 3, 4, 5)),
    ("a22 major symmetry", "a22", (3, 4, 5, 0, 1, 2)),
    ("a23 first-pair symmetry", "a23", (1, 0, 2, 3)),
    ("a24 first-pair symmetry", "a24", (1, 0, 2)),
    ("a27 first-pair symmetry", "a27", (1, 0, 2, 3, 4)),
    ("a27 last-pair symmetry", "a27", (0, 1, 2, 4, 3)),
    ("a33 symmetry", "a33", (1, 0)),
    ("a37 last-pair symmetry", "a37", (0, 2, 1)),
    ("a47 symmetry", "a47", (1, 0)),
    ("a66 symmetry", "a66", (1, 0)),
    ("a77 first-pair symmetry", "a77", (1, 0, 2, 3)),
    ("a77 major symmetry", "a77", (2, 3, 0, 1)),
    ("a77 second-pair symmetry", "a77", (0, 1, 3, 2)),
)


@dataclass(frozen=True)
class SymmetryRecord:
    relation: str
    max_violation: float
    tolerance: float
    passed: bool


@dataclass(frozen=True)
class SymmetryReport:
    records: tuple[SymmetryRecord, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def failures(self) -> list[SymmetryRecord]:
        return [r for r in self.records if not r.passed]

    def __getitem__(self, relation: str) -> SymmetryRecord:
        for r in self.records:
            if r.relation == relation:
                return r
        raise KeyError(relation)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "relations": [
                {"relation": r.relation, "max_violation": r.max_violation,
                 "tolerance": r.tolerance, "passed": r.passed}
                for r in self.records
            ],
        }


def validate_symmetries(m: AnisoMaterial, tol: float = DEFAULT_SYMMETRY_TOL) -> SymmetryReport:
    """Check every index symmetry of the coefficient tensors.

    The tolerance is relative to the largest component magnitude of the
    tensor under test, so an all-zero tensor passes with threshold 0.
    """
    records = []
    for relation, name, perm in SYMMETRY_RELATIONS:
        a = getattr(m, name)
        violation = float(np.abs(a - a.transpose(perm)).max())
        threshold = tol * float(np.abs(a).max())
        records.append(SymmetryRecord(relation, violation, threshold, violation <= threshold))
    return SymmetryReport(tuple(records))


def symmetrize(name: str, a: np.ndarray) -> np.ndarray:
    """Average ``a`` over the group generated by the symmetry relations of ``name``."""
    perms = [p for _, n, p in SYMMETRY_RELATIONS if n == name]
    rank = a.ndim
    group = {tuple(range(rank))}
    frontier = list(group)
    while frontier:
        g = frontier.pop()
        for p in perms:
            h = tuple(g[i] for i in p)
            if h not in group:
                group.add(h)
                frontier.append(h)
    return sum(a.transpose(g) for g in group) / len(group)


# ---------------------------------------------------------------------------
# File I/O


def _number(value, key: str, source: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise MaterialFileError(f"field {key!r} in {source} must be a number, got {value!r}")
    if not math.isfinite(value):
        raise MaterialFileError(f"field {key!r} in {source} must be finite")
    return float(value)


def parse_json_text(text: str, source: str) -> dict:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MaterialFileError(
            f"{source}: JSON parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(data, dict):
        raise MaterialFileError(f"{source}: top-level JSON value must be an object")
    return data


def material_from_dict(data: dict, kind: str | None = None, source: str = "<dict>",
                       sym_tol: float = DEFAULT_SYMMETRY_TOL):
    """Build a material from a decoded JSON object (see ``load_material``)."""
    file_kind = data.get("kind")
    if file_kind is None:
        raise MissingFieldError("kind", source)
    aliases = {"iso": "isotropic", "aniso": "anisotropic"}
    file_kind = aliases.get(file_kind, file_kind)
    if file_kind not in ("isotropic", "anisotropic"):
        raise MaterialFileError(f"{source}: unknown material kind {data['kind']!r}")
    if kind is not None and aliases.get(kind, kind) != file_kind:
        raise MaterialFileError(f"{source}: expected {kind} material, file says {file_kind}")

    if file_kind == "isotropic":
        for key in data:
            if key != "kind" and key not in ISO_KEYS:
                raise UnknownFieldError(key, source)
        values = {}
        for key, attr in ISO_KEYS.items():
            if key not in data:
                if key in ISO_OPTIONAL:
                    continue
                raise MissingFieldError(key, source)
            values[attr] = _number(data[key], key, source)
        return IsoMaterial(**values)

    allowed = set(ANISO_SCALARS) | set(TENSOR_RANKS)
    for key in data:
        if key != "kind" and key not in allowed:
            raise UnknownFieldError(key, source)
    values = {}
    for key in ANISO_SCALARS:
        if key in data:
            values[key] = _number(data[key], key, source)
        elif key in ("rho", "T0", "beta"):
            raise MissingFieldError(key, source)
    for key, rank in TENSOR_RANKS.items():
        if key not in data:
            continue
        raw = data[key]
        if not isinstance(raw, list):
            raise MaterialFileError(f"field {key!r} in {source} must be a flat array")
        if len(raw) != 3 ** rank:
            raise MaterialFileError(
                f"field {key!r} in {source} must hold {3 ** rank} numbers, got {len(raw)}"
            )
        flat = [_number(v, f"{key}[{n}]", source) for n, v in enumerate(raw)]
        values[key] = np.array(flat).reshape((3,) * rank)
    m = AnisoMaterial(**values)
    report = validate_symmetries(m, sym_tol)
    if not report.passed:
        worst = max(report.failures(), key=lambda r: r.max_violation)
        raise SymmetryViolationError(
            f"{source}: relation {worst.relation!r} violated by {worst.max_violation:.3e}",
            worst_index=worst.relation,
            violation=worst.max_violation,
        )
    return m


def load_material(path, kind: str | None = None, sym_tol: float = DEFAULT_SYMMETRY_TOL):
    """Read an isotropic or anisotropic material from a UTF-8 JSON file.

    ``kind`` may be ``"iso"``/``"isotropic"`` or ``"aniso"``/``"anisotropic"``;
    when given it must match the file's ``"kind"`` entry.
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    return material_from_dict(parse_json_text(text, str(path)), kind, str(path), sym_tol)


def aniso_to_dict(m: AnisoMaterial) -> dict:
    out: dict = {"kind": "anisotropic"}
    out.update({key: getattr(m, key) for key in ANISO_SCALARS})
    out.update({key: arr.ravel().tolist() for key, arr in m.tensors().items()})
    return out


def save_material(m, path) -> None:
    data = m.to_dict() if isinstance(m, IsoMaterial) else aniso_to_dict(m)
    Path(path).write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")
