"""Index conventions and storage for the symmetric tensors of the theory.

Storage keeps independent components only:

* ``Sym2`` -- six components in the order (11, 22, 33, 23, 13, 12).
* ``Kappa`` -- eighteen components of a rank-3 tensor symmetric in its first
  two indices, ordered as (pair, k) with the pair running over the ``Sym2``
  order and ``k`` over 1..3.

Contractions are never done on the packed data.  Callers expand with
``full()`` and sum over complete index ranges, so no Voigt weights appear.

Indices in code are 0-based; the component names in docstrings follow the
usual 1-based notation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, SymmetryViolationError

SYM2_PAIRS: tuple[tuple[int, int], ...] = ((0, 0), (1, 1), (2, 2), (1, 2), (0, 2), (0, 1))

# (i, j, k) triples in canonical Kappa order
KAPPA_TRIPLES: tuple[tuple[int, int, int], ...] = tuple(
    (i, j, k) for (i, j) in SYM2_PAIRS for k in range(3)
)

# Grouping used for the strain-gradient quadratic form: three 5-component
# blocks followed by the 3-component block of fully mixed indices.
KAPPA18_LABELS: tuple[str, ...] = (
    "221", "331", "111", "122", "133",
    "332", "112", "222", "233", "211",
    "113", "223", "333", "311", "322",
    "123", "231", "312",
)

DEFAULT_SYM_TOL = 1e-12


def _pair_slot(i: int, j: int) -> int:
    a, b = (i, j) if i <= j else (j, i)
    if a == b:
        return a
    return {(1, 2): 3, (0, 2): 4, (0, 1): 5}[(a, b)]


def _kappa_slot(i: int, j: int, k: int) -> int:
    return 3 * _pair_slot(i, j) + k


# permutation: block-ordering position -> canonical slot
_BLOCK_TO_CANON = np.array(
    [_kappa_slot(int(s[0]) - 1, int(s[1]) - 1, int(s[2]) - 1) for s in KAPPA18_LABELS]
)
assert sorted(_BLOCK_TO_CANON.tolist()) == list(range(18))


def _check_finite(a: np.ndarray, what: str) -> None:
    if not np.all(np.isfinite(a)):
        raise InvalidInputError(f"{what} contains non-finite values")


def _as_array(a, shape: tuple[int, ...], what: str) -> np.ndarray:
    arr = np.asarray(a, dtype=float)
    if arr.shape != shape:
        raise InvalidInputError(f"{what} must have shape {shape}, got {arr.shape}")
    _check_finite(arr, what)
    return arr


def as_vec3(v, what: str = "vector") -> np.ndarray:
    """Validate and copy a 3-vector."""
    return _as_array(v, (3,), what).copy()


@dataclass(frozen=True, eq=False)
class Sym2:
    """Symmetric rank-2 tensor stored by its six independent components."""

    data: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "data", _as_array(self.data, (6,), "Sym2 data").copy())

    @classmethod
    def zeros(cls) -> Sym2:
        return cls(np.zeros(6))

    @classmethod
    def identity(cls) -> Sym2:
        return cls(np.array([1.0, 1.0, 1.0, 0.0, 0.0, 0.0]))

    @classmethod
    def from_full(cls, a, tol: float = DEFAULT_SYM_TOL) -> Sym2:
        a = _as_array(a, (3, 3), "rank-2 tensor")
        scale = np.abs(a).max()
        asym = np.abs(a - a.T).max()
        if asym > 0 and asym > tol * scale:
            i, j = np.unravel_index(np.argmax(np.abs(a - a.T)), a.shape)
            raise SymmetryViolationError(
                f"rank-2 tensor not symmetric: |a[{i},{j}] - a[{j},{i}]| = {asym:.3e}",
                worst_index=(int(i), int(j)),
                violation=float(asym),
            )
        s = 0.5 * (a + a.T)
        return cls(np.array([s[i, j] for i, j in SYM2_PAIRS]))

    def full(self) -> np.ndarray:
        out = np.empty((3, 3))
        for slot, (i, j) in enumerate(SYM2_PAIRS):
            out[i, j] = out[j, i] = self.data[slot]
        return out

    def __getitem__(self, idx: tuple[int, int]) -> float:
        i, j = idx
        return float(self.data[_pair_slot(i, j)])

    def __add__(self, other: Sym2) -> Sym2:
        return Sym2(self.data + other.data)

    def __sub__(self, other: Sym2) -> Sym2:
        return Sym2(self.data - other.data)

    def __mul__(self, c: float) -> Sym2:
        return Sym2(c * self.data)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"Sym2({self.data.tolist()})"


@dataclass(frozen=True, eq=False)
class Kappa:
    """Rank-3 tensor symmetric in its first two indices (18 components)."""

    data: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "data", _as_array(self.data, (18,), "Kappa data").copy())

    @classmethod
    def zeros(cls) -> Kappa:
        return cls(np.zeros(18))

    @classmethod
    def from_full(cls, h, tol: float = DEFAULT_SYM_TOL) -> Kappa:
        return kappa_from_second_gradient(h, tol)

    def full(self) -> np.ndarray:
        out = np.empty((3, 3, 3))
        for slot, (i, j, k) in enumerate(KAPPA_TRIPLES):
            out[i, j, k] = out[j, i, k] = self.data[slot]
        return out

    def __getitem__(self, idx: tuple[int, int, int]) -> float:
        i, j, k = idx
        return float(self.data[_kappa_slot(i, j, k)])

    def __add__(self, other: Kappa) -> Kappa:
        return Kappa(self.data + other.data)

    def __sub__(self, other: Kappa) -> Kappa:
        return Kappa(self.data - other.data)

    def __mul__(self, c: float) -> Kappa:
        return Kappa(c * self.data)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"Kappa({self.data.tolist()})"


def strain_from_gradient(g) -> Sym2:
    """Infinitesimal strain: symmetric part of the displacement gradient ``g[i, j] = u_{i,j}``."""
    g = _as_array(g, (3, 3), "displacement gradient")
    return Sym2.from_full(0.5 * (g + g.T))


def second_gradient_asymmetry(h) -> tuple[float, tuple[int, int, int]]:
    """Largest ``|h_ijk - h_jik|`` and the triple where it occurs."""
    h = np.asarray(h, dtype=float)
    diff = np.abs(h - h.transpose(1, 0, 2))
    idx = np.unravel_index(np.argmax(diff), diff.shape)
    return float(diff[idx]), tuple(int(i) for i in idx)


def kappa_from_second_gradient(h, sym_tol: float = DEFAULT_SYM_TOL) -> Kappa:
    """Build ``Kappa`` from ``h[i, j, k] = u_{k,ij}``.

    Raises ``SymmetryViolationError`` when the asymmetry in (i, j) exceeds
    ``sym_tol`` times the largest component magnitude.
    """
    h = _as_array(h, (3, 3, 3), "second gradient")
    asym, where = second_gradient_asymmetry(h)
    if asym > 0 and asym > sym_tol * np.abs(h).max():
        i, j, k = where
        raise SymmetryViolationError(
            f"second gradient not symmetric in its first two indices: "
            f"|h[{i},{j},{k}] - h[{j},{i},{k}]| = {asym:.3e}",
            worst_index=where,
            violation=asym,
        )
    hs = 0.5 * (h + h.transpose(1, 0, 2))
    return Kappa(np.array([hs[i, j, k] for i, j, k in KAPPA_TRIPLES]))


def pack18(kappa: Kappa) -> np.ndarray:
    """Flatten ``kappa`` into the 18-vector grouped as (A5, A5, A5, A3) blocks."""
    return kappa.data[_BLOCK_TO_CANON].copy()


def unpack18(v) -> Kappa:
    v = _as_array(v, (18,), "Kappa18 vector")
    data = np.empty(18)
    data[_BLOCK_TO_CANON] = v
    return Kappa(data)


def field_from_potential(grad_phi, hess_phi: Sym2) -> tuple[np.ndarray, Sym2]:
    """Electric field ``E = -grad(phi)`` and its gradient ``V = -grad grad(phi)``."""
    grad_phi = as_vec3(grad_phi, "potential gradient")
    return -grad_phi, Sym2(-hess_phi.data)


# Embedding matrices from packed components to flattened full tensors.
# SYM2_EMBED @ s.data == s.full().ravel()
SYM2_EMBED = np.zeros((9, 6))
for _slot, (_i, _j) in enumerate(SYM2_PAIRS):
    SYM2_EMBED[3 * _i + _j, _slot] = 1.0
    SYM2_EMBED[3 * _j + _i, _slot] = 1.0

# KAPPA18_EMBED @ pack18(k) == k.full().ravel()
KAPPA18_EMBED = np.zeros((27, 18))
for _pos, _slot in enumerate(_BLOCK_TO_CANON):
    _i, _j, _k = KAPPA_TRIPLES[_slot]
    KAPPA18_EMBED[9 * _i + 3 * _j + _k, _pos] = 1.0
    KAPPA18_EMBED[9 * _j + 3 * _i + _k, _pos] = 1.0
