"""The unique unitary realization of an oscillator system.

For frequencies ``Omega`` (with quadrature weights ``w`` on continuous
coordinates, ``w = 1`` on discrete ones) the structure in ``(p, q)`` block
form is::

    G = diag(w / Omega, w * Omega)          metric
    W = [[0, diag(w)], [-diag(w), 0]]       symplectic form (dP ^ dQ)
    J = [[0, Omega], [-Omega^{-1}, 0]]      complex unit, J = G^{-1} W
    H = diag(Omega, Omega)                  Hamiltonian, H = J A

For purely discrete spectra the weights are all 1 and ``W`` is the standard
block form.  The one-parameter family of canonical transforms
``U(alpha) = [[Omega^{1/2} cos a, -Omega^{1/2} sin a],
[Omega^{-1/2} sin a, Omega^{-1/2} cos a]]`` maps the standard phase space
isometrically onto the realization and intertwines the complex units.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError, InconsistencyError
from .oscillator import FrequencySpec, GeneratorMatrix, _freeze, build_generator
from .symplectic import ComplexUnit, Metric, SymplecticForm, _entries, _fro


def standard_symplectic_form(spec: FrequencySpec) -> SymplecticForm:
    """The discretized form ``dP ^ dQ``: ``[[0, diag(w)], [-diag(w), 0]]``."""
    n = spec.n
    w = spec.quad_weights
    W = np.zeros((2 * n, 2 * n))
    W[:n, n:] = np.diag(w)
    W[n:, :n] = -np.diag(w)
    return SymplecticForm(W)


def standard_space_metric(spec: FrequencySpec) -> np.ndarray:
    """Metric of the standard (pre-transform) space: ``diag(w, w)``.

    Identity for purely discrete spectra; the quadrature-weighted euclidean
    product otherwise.
    """
    w = spec.quad_weights
    return np.diag(np.concatenate([w, w]))


@dataclass(frozen=True)
class Realization:
    """Bundle of the realization data for one spec."""

    spec: FrequencySpec
    metric: Metric
    form: SymplecticForm
    unit: ComplexUnit
    hamiltonian: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "hamiltonian", _freeze(self.hamiltonian))

    # matrix shorthands used heavily in tests and demos
    @property
    def G(self) -> np.ndarray:
        return self.metric.entries

    @property
    def W(self) -> np.ndarray:
        return self.form.entries

    @property
    def J(self) -> np.ndarray:
        return self.unit.entries

    @property
    def H(self) -> np.ndarray:
        return self.hamiltonian

    @property
    def generator(self) -> GeneratorMatrix:
        return build_generator(self.spec)

    def energy(self, x) -> float:
        """Quadratic form ``(x, H x)_G / 2`` (equals the classical energy)."""
        from .symplectic import _as_vector

        v = _as_vector(x)
        return float(0.5 * v @ self.G @ self.H @ v)


def construct_unique_realization(spec: FrequencySpec) -> Realization:
    """Build ``(G, W, J, H)`` for ``spec`` from the closed-form solution."""
    n = spec.n
    om = spec.omegas
    w = spec.quad_weights

    G = np.diag(np.concatenate([w / om, w * om]))
    J = np.zeros((2 * n, 2 * n))
    J[:n, n:] = np.diag(om)
    J[n:, :n] = -np.diag(1.0 / om)
    H = np.diag(np.concatenate([om, om]))

    return Realization(
        spec=spec,
        metric=Metric(G, weights=w),
        form=standard_symplectic_form(spec),
        unit=ComplexUnit(J),
        hamiltonian=H,
    )


@dataclass(frozen=True)
class CanonicalTransform:
    """Canonical isomorphism ``U(alpha)`` from the standard space onto the
    realization; ``alpha`` parametrizes the circle of such maps."""

    alpha: float
    entries: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", _freeze(self.entries))

    def apply(self, x) -> np.ndarray:
        from .symplectic import _as_vector

        return self.entries @ _as_vector(x)


def canonical_transform(spec: FrequencySpec, alpha: float) -> CanonicalTransform:
    """The transform ``U(alpha)``; ``U(0) = diag(Omega^{1/2}, Omega^{-1/2})``.

    Pullback identities (weighted euclidean metric ``diag(w, w)`` and the
    discretized ``dP ^ dQ`` as the standard-space structures)::

        U^T G U = diag(w, w)      U^T W U = W

    and the group law ``U(alpha) R_S(beta) = U(alpha + beta)`` against
    standard-space rotations ``R_S``.
    """
    alpha = float(alpha)
    if not np.isfinite(alpha):
        raise DimensionMismatchError(f"alpha must be finite, got {alpha!r}")
    n = spec.n
    root = np.sqrt(spec.omegas)
    c, s = np.cos(alpha), np.sin(alpha)
    U = np.zeros((2 * n, 2 * n))
    U[:n, :n] = np.diag(root * c)
    U[:n, n:] = np.diag(-root * s)
    U[n:, :n] = np.diag(s / root)
    U[n:, n:] = np.diag(c / root)
    return CanonicalTransform(alpha=alpha, entries=U)


def standard_rotation(n: int, beta: float) -> np.ndarray:
    """Standard-space rotation ``[[cos b, -sin b], [sin b, cos b]]`` blockwise."""
    c, s = np.cos(beta), np.sin(beta)
    R = np.zeros((2 * n, 2 * n))
    R[:n, :n] = c * np.eye(n)
    R[:n, n:] = -s * np.eye(n)
    R[n:, :n] = s * np.eye(n)
    R[n:, n:] = c * np.eye(n)
    return R


def hamiltonian_from_generator(real: Realization, A, tol: float = 1e-10) -> np.ndarray:
    """Recover the Hamiltonian ``H = J A`` from the generator.

    Checks that the product is symmetric and commutes with the complex unit.
    (``A = -J H`` is automatic from ``J^2 = -I`` and so carries no
    information; commutation is what fails when ``A`` belongs to a different
    frequency content than ``real``.)

    Raises
    ------
    InconsistencyError
        If ``J A`` is not symmetric within ``tol`` (relative Frobenius) or
        ``[J, H] != 0``.
    """
    Am = _entries(A)
    J = real.J
    if Am.shape != J.shape:
        raise DimensionMismatchError(f"generator shape {Am.shape} != {J.shape}")
    H = J @ Am
    scale = max(_fro(H), 1e-300)
    if _fro(H - H.T) > tol * scale:
        raise InconsistencyError(
            f"J A is not symmetric (relative residual {_fro(H - H.T) / scale:.3e}); "
            "generator is inconsistent with this realization"
        )
    JH = J @ H
    comm = _fro(JH - H @ J)
    if comm > tol * max(_fro(JH), 1e-300):
        raise InconsistencyError(
            f"J A does not commute with J (relative residual {comm / max(_fro(JH), 1e-300):.3e}); "
            "generator is inconsistent with this realization"
        )
    return H


def realization_to_dict(real: Realization, include_matrices: bool = True) -> dict:
    """Serializable dictionary form (dense row-major matrices + the spec)."""
    out: dict = {"spec": real.spec.to_dict(), "dim": 2 * real.spec.n}
    if include_matrices:
        out["G"] = real.G.tolist()
        out["W"] = real.W.tolist()
        out["J"] = real.J.tolist()
        out["H"] = real.H.tolist()
    return out
