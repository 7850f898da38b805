"""Metrics, symplectic forms and complex units on finite phase spaces.

Conventions used throughout the package:

* the symplectic form is evaluated as ``w2(x, y) = x^T W y`` with ``W``
  antisymmetric and nondegenerate;
* the complex unit is fixed by ``w2(x, y) = (x, J y)_G``, i.e. ``J = G^{-1} W``;
* the complex pairing ``<x, y> = (x, y)_G + i w2(x, y)`` is linear in its
  *first* argument: ``<J x, y> = i <x, y>``.

All structures are plain dense matrices; instances are frozen after
construction and safe to share between threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateFormError,
    DimensionMismatchError,
    MetricError,
    NotNaturallyComplexError,
)
from .oscillator import PhaseSpacePoint, _freeze

#: Condition-number ceiling beyond which a form is treated as degenerate.
MAX_FORM_CONDITION = 1e12

#: Relative tolerance for the structural (anti)symmetry checks at construction.
STRUCTURE_TOL = 1e-13


def _fro(a: np.ndarray) -> float:
    return float(np.linalg.norm(a))


@dataclass(frozen=True)
class Metric:
    """Symmetric positive definite scalar product, optionally weight-carrying.

    ``weights`` records per-coordinate quadrature weights for specs with a
    continuous band; they are already folded into ``entries`` and are kept
    only so downstream consumers never re-derive them.
    """

    entries: np.ndarray = field(repr=False)
    weights: np.ndarray | None = None

    def __post_init__(self) -> None:
        G = np.asarray(self.entries, dtype=float)
        if G.ndim != 2 or G.shape[0] != G.shape[1]:
            raise MetricError(f"metric must be square, got shape {G.shape}")
        if _fro(G - G.T) > STRUCTURE_TOL * max(_fro(G), 1e-300):
            raise MetricError("metric is not symmetric")
        evals = np.linalg.eigvalsh(G)
        if evals[0] <= 0:
            raise MetricError(f"metric is not positive definite (min eigenvalue {evals[0]:.3e})")
        object.__setattr__(self, "entries", _freeze(G))
        if self.weights is not None:
            object.__setattr__(self, "weights", _freeze(self.weights))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def inner(self, x, y) -> float:
        """Scalar product ``(x, y)_G``."""
        x, y = _as_vector(x), _as_vector(y)
        return float(x @ self.entries @ y)

    def norm(self, x) -> float:
        return float(np.sqrt(max(self.inner(x, x), 0.0)))


@dataclass(frozen=True)
class SymplecticForm:
    """Antisymmetric nondegenerate bilinear form ``w2(x, y) = x^T W y``."""

    entries: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        W = np.asarray(self.entries, dtype=float)
        if W.ndim != 2 or W.shape[0] != W.shape[1]:
            raise DegenerateFormError(f"form must be square, got shape {W.shape}")
        if _fro(W + W.T) > STRUCTURE_TOL * max(_fro(W), 1e-300):
            raise DegenerateFormError("form is not antisymmetric")
        object.__setattr__(self, "entries", _freeze(W))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def evaluate(self, x, y) -> float:
        x, y = _as_vector(x), _as_vector(y)
        return float(x @ self.entries @ y)

    def condition(self) -> float:
        s = np.linalg.svd(self.entries, compute_uv=False)
        if s[-1] == 0:
            return np.inf
        return float(s[0] / s[-1])


@dataclass(frozen=True)
class ComplexUnit:
    """Candidate complex structure ``J``; call :func:`is_naturally_complex`
    to test whether ``J^2 = -I`` actually holds."""

    entries: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", _freeze(self.entries))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def _as_vector(x) -> np.ndarray:
    if isinstance(x, PhaseSpacePoint):
        return x.as_vector()
    v = np.asarray(x, dtype=float)
    if v.ndim != 1:
        raise DimensionMismatchError(f"expected a vector, got shape {v.shape}")
    return v


def _entries(obj) -> np.ndarray:
    return np.asarray(getattr(obj, "entries", obj), dtype=float)


def complex_unit_from(G, W) -> ComplexUnit:
    """Complex unit ``J = G^{-1} W`` determined by metric and form.

    The result satisfies ``(x, J y)_G = w2(x, y)`` and is antiselfadjoint
    with respect to ``G`` by construction; it squares to ``-I`` only when the
    pair ``(G, W)`` is naturally complex.

    Raises
    ------
    MetricError
        If ``G`` is numerically singular.
    DegenerateFormError
        If ``W`` has condition number above ``MAX_FORM_CONDITION``.
    """
    Gm, Wm = _entries(G), _entries(W)
    if Gm.shape != Wm.shape:
        raise DimensionMismatchError(f"shape mismatch: {Gm.shape} vs {Wm.shape}")
    sG = np.linalg.svd(Gm, compute_uv=False)
    if sG[-1] == 0 or sG[0] / sG[-1] > MAX_FORM_CONDITION:
        raise MetricError("metric is singular or numerically singular")
    sW = np.linalg.svd(Wm, compute_uv=False)
    if sW[-1] == 0 or sW[0] / sW[-1] > MAX_FORM_CONDITION:
        raise DegenerateFormError(
            f"form condition number exceeds {MAX_FORM_CONDITION:.0e}"
        )
    return ComplexUnit(np.linalg.solve(Gm, Wm))


def is_naturally_complex(J, tol: float = 1e-10) -> tuple[bool, float]:
    """Test ``J^2 = -I``; returns ``(verdict, residual)``.

    The residual is the Frobenius norm ``||J^2 + I||_F``.
    """
    Jm = _entries(J)
    res = _fro(Jm @ Jm + np.eye(Jm.shape[0]))
    return bool(res <= tol), res


def poisson_bracket_canonical(W, i: int, j: int, kind: str) -> float:
    """Canonical bracket of coordinate functions under the form ``W``.

    ``kind`` selects the pair: ``"QP"`` evaluates ``w2((e_i, 0), (0, e_j))``
    (delta for the standard form), ``"PP"`` and ``"QQ"`` evaluate same-sector
    pairs (zero for the standard form).
    """
    Wm = _entries(W)
    n = Wm.shape[0] // 2
    if not (0 <= i < n and 0 <= j < n):
        raise DimensionMismatchError(f"indices ({i}, {j}) out of range for n={n}")
    x = np.zeros(2 * n)
    y = np.zeros(2 * n)
    if kind == "QP":
        x[i] = 1.0
        y[n + j] = 1.0
    elif kind == "PP":
        x[i] = 1.0
        y[j] = 1.0
    elif kind == "QQ":
        x[n + i] = 1.0
        y[n + j] = 1.0
    else:
        raise ValueError(f"kind must be 'PP', 'QQ' or 'QP', got {kind!r}")
    return float(x @ Wm @ y)


def _block_sqrt(B: np.ndarray) -> np.ndarray:
    # symmetric positive definite square root via eigendecomposition
    evals, vecs = np.linalg.eigh(B)
    if evals[0] <= 0:
        raise NotNaturallyComplexError("upper-right block is not positive definite")
    return (vecs * np.sqrt(evals)) @ vecs.T


def complexify(J, x, tol: float = 1e-10) -> np.ndarray:
    """Complex coordinates ``z`` with ``complexify(J x) = i complexify(x)``.

    For a block anti-diagonal unit ``J = [[0, B], [-B^{-1}, 0]]`` the map is
    ``z = B^{-1/2} p - i B^{1/2} q`` (the ``p - i q`` recipe in the frame where
    ``J`` becomes the standard unit).  For the standard structure this is
    literally ``z = p - i q``.

    Raises
    ------
    NotNaturallyComplexError
        If ``J`` fails ``J^2 = -I`` beyond ``tol`` or is not block
        anti-diagonal with a symmetric positive upper-right block.
    """
    Jm = _entries(J)
    ok, res = is_naturally_complex(Jm, tol)
    if not ok:
        raise NotNaturallyComplexError(f"J^2 + I has norm {res:.3e} (tol {tol:.1e})")
    m = Jm.shape[0]
    if m % 2:
        raise DimensionMismatchError("complex unit must act on an even-dimensional space")
    n = m // 2
    B = Jm[:n, n:]
    scale = max(_fro(Jm), 1e-300)
    if _fro(Jm[:n, :n]) > tol * scale or _fro(Jm[n:, n:]) > tol * scale:
        raise NotNaturallyComplexError("J is not block anti-diagonal in (p, q) coordinates")
    if _fro(B - B.T) > tol * max(_fro(B), 1e-300):
        raise NotNaturallyComplexError("upper-right block of J is not symmetric")
    v = _as_vector(x)
    if v.size != m:
        raise DimensionMismatchError(f"expected vector of length {m}, got {v.size}")
    S = _block_sqrt(B)
    p, q = v[:n], v[n:]
    return np.linalg.solve(S, p) - 1j * (S @ q)


def complex_pairing(G, W, x, y) -> complex:
    """Sesquilinear pairing ``<x, y> = (x, y)_G + i w2(x, y)``.

    Linear in the first argument (multiplication by ``i`` acts as ``J`` on
    ``x``), conjugate-symmetric, and ``<x, x> = ||x||_G^2``.
    """
    Gm, Wm = _entries(G), _entries(W)
    xv, yv = _as_vector(x), _as_vector(y)
    return complex(xv @ Gm @ yv, xv @ Wm @ yv)
