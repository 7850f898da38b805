"""Time evolution: closed-form flow, matrix-exponential oracle, invariant
tracking and the weighted sup-norm domain conditions.

The flow of ``dx/dt = A x`` with ``A = [[0, -Omega^2], [I, 0]]`` acts
blockwise per frequency as::

    phi_t = [[cos(wt), -w sin(wt)], [sin(wt)/w, cos(wt)]]

The lower-left entry ``sin(wt)/w`` is the unique choice consistent with
``d(phi_t)/dt = A phi_t`` and ``phi_0 = I``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .errors import DimensionMismatchError, RangeError, SpecError
from .oscillator import FrequencySpec, _freeze, classical_hamiltonian
from .realization import Realization
from .symplectic import _as_vector, _entries


@dataclass(frozen=True)
class FlowOperator:
    """The propagator ``phi_t`` at a fixed time."""

    t: float
    entries: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", _freeze(self.entries))

    def apply(self, x) -> np.ndarray:
        return self.entries @ _as_vector(x)


def _sin_over_omega(om: np.ndarray, t: float) -> np.ndarray:
    """``sin(om t) / om`` with a series branch where ``|om t|`` is tiny."""
    arg = om * t
    out = np.empty_like(arg)
    small = np.abs(arg) < 1e-4
    # 5th-order Taylor keeps the truncation error below double rounding here
    a2 = arg[small] ** 2
    out[small] = t * (1.0 - a2 / 6.0 + a2 * a2 / 120.0)
    out[~small] = np.sin(arg[~small]) / om[~small]
    return out


def flow_closed_form(spec: FrequencySpec, t: float) -> FlowOperator:
    """Exact propagator, per-frequency trigonometric blocks."""
    t = float(t)
    if not np.isfinite(t):
        raise RangeError(f"time must be finite, got {t!r}")
    n = spec.n
    om = spec.omegas
    c = np.cos(om * t)
    F = np.zeros((2 * n, 2 * n))
    F[:n, :n] = np.diag(c)
    F[:n, n:] = np.diag(-om * np.sin(om * t))
    F[n:, :n] = np.diag(_sin_over_omega(om, t))
    F[n:, n:] = np.diag(c)
    return FlowOperator(t=t, entries=F)


def flow_expm(A, t: float) -> FlowOperator:
    """Propagator by scaling-and-squaring matrix exponential of ``A t``.

    Accepts any square matrix, so it doubles as an independent oracle for
    :func:`flow_closed_form` and handles non-oscillator generators (e.g.
    nilpotent test cases).
    """
    Am = _entries(A)
    t = float(t)
    if Am.ndim != 2 or Am.shape[0] != Am.shape[1]:
        raise DimensionMismatchError(f"generator must be square, got {Am.shape}")
    if not np.isfinite(t) or not np.all(np.isfinite(Am)):
        raise RangeError("t * A must be finite")
    scaled = Am * t
    if not np.all(np.isfinite(scaled)):
        raise RangeError(f"t * A overflows for t = {t!r}")
    return FlowOperator(t=t, entries=expm(scaled))


@dataclass(frozen=True)
class InvariantLog:
    """Per-time-step drifts of the conserved quantities along a trajectory."""

    t: np.ndarray
    norm_drift: np.ndarray
    symplectic_drift: np.ndarray
    energy_drift: np.ndarray

    def max_drifts(self) -> dict:
        return {
            "norm": float(np.max(self.norm_drift)),
            "symplectic": float(np.max(self.symplectic_drift)),
            "energy": float(np.max(self.energy_drift)),
        }


def _default_probe(n2: int) -> np.ndarray:
    # fixed deterministic probe for the symplectic-pairing invariant
    probe = np.ones(n2)
    probe[1::2] = -0.5
    return probe / np.linalg.norm(probe)


def evolve(real: Realization, x0, t_grid, probe=None) -> tuple[np.ndarray, InvariantLog]:
    """Propagate ``x0`` over ``t_grid`` and log invariant drifts.

    Returns
    -------
    trajectory : ndarray, shape (len(t_grid), 2n)
    log : InvariantLog
        Absolute drifts of the metric norm ``||x(t)||_G``, the symplectic
        pairing ``w2(x(t), y(t))`` against the co-evolved probe ``y``, and the
        classical energy.
    """
    x0 = _as_vector(x0)
    n2 = 2 * real.spec.n
    if x0.size != n2:
        raise DimensionMismatchError(f"x0 has length {x0.size}, expected {n2}")
    t_grid = np.atleast_1d(np.asarray(t_grid, dtype=float))
    if t_grid.ndim != 1 or t_grid.size == 0:
        raise RangeError("t_grid must be a nonempty 1-d array")
    y0 = _default_probe(n2) if probe is None else _as_vector(probe)

    G, W = real.G, real.W
    norm0 = float(np.sqrt(x0 @ G @ x0))
    pair0 = float(x0 @ W @ y0)
    energy0 = classical_hamiltonian(real.spec, x0)

    traj = np.empty((t_grid.size, n2))
    norm_d = np.empty(t_grid.size)
    pair_d = np.empty(t_grid.size)
    energy_d = np.empty(t_grid.size)
    for k, t in enumerate(t_grid):
        F = flow_closed_form(real.spec, t).entries
        xt = F @ x0
        yt = F @ y0
        traj[k] = xt
        norm_d[k] = abs(float(np.sqrt(xt @ G @ xt)) - norm0)
        pair_d[k] = abs(float(xt @ W @ yt) - pair0)
        energy_d[k] = abs(classical_hamiltonian(real.spec, xt) - energy0)
    log = InvariantLog(
        t=_freeze(t_grid),
        norm_drift=_freeze(norm_d),
        symplectic_drift=_freeze(pair_d),
        energy_drift=_freeze(energy_d),
    )
    return traj, log


def complex_evolution(real: Realization, x0, t: float) -> np.ndarray:
    """Evolution in the complex picture: ``z(t) = exp(-i Omega t) z(0)``.

    ``z(0)`` is the standard complexification ``p - i q`` of ``U(0)^{-1} x0``.
    The diagram with the real flow commutes:
    ``complex_evolution(x0, t) == complexify(U(0)^{-1} phi_t x0)``.
    """
    x0 = _as_vector(x0)
    om = real.spec.omegas
    n = real.spec.n
    if x0.size != 2 * n:
        raise DimensionMismatchError(f"x0 has length {x0.size}, expected {2 * n}")
    root = np.sqrt(om)
    p_std = x0[:n] / root
    q_std = x0[n:] * root
    z0 = p_std - 1j * q_std
    return np.exp(-1j * om * float(t)) * z0


@dataclass(frozen=True)
class FlowDomainCheck:
    """Weighted sup-norm check of the flow's off-diagonal blocks.

    ``sup1`` bounds ``|k sin(kt) rho(k) / sigma(k)|`` (upper-right block
    measured from the sigma-weighted to the rho-weighted space), ``sup2``
    bounds ``|sin(kt)/k * sigma(k) / rho(k)|`` (lower-left block).  Finite
    sups mean the flow stays bounded between the weighted spaces; the choice
    ``sigma = rho * Omega`` makes both quantities ``|sin(kt)| <= 1``.
    """

    sup1: float
    sup2: float
    node1: float
    t1: float
    node2: float
    t2: float
    grid: np.ndarray = field(repr=False)

    def passes(self, bound: float, tol: float = 1e-12) -> bool:
        return self.sup1 <= bound + tol and self.sup2 <= bound + tol


def check_flow_domain(rho, sigma, spec: FrequencySpec, t_grid) -> FlowDomainCheck:
    """Evaluate the two weighted sup norms over ``spec`` nodes x ``t_grid``.

    ``rho`` and ``sigma`` are either arrays of samples aligned with
    ``spec.omegas`` or callables evaluated on them; both must be strictly
    positive.
    """
    om = spec.omegas
    rho_s = np.asarray(rho(om) if callable(rho) else rho, dtype=float)
    sig_s = np.asarray(sigma(om) if callable(sigma) else sigma, dtype=float)
    if rho_s.shape != om.shape or sig_s.shape != om.shape:
        raise DimensionMismatchError(
            f"weight samples must have shape {om.shape}, got {rho_s.shape} and {sig_s.shape}"
        )
    if np.any(rho_s <= 0) or np.any(sig_s <= 0):
        raise SpecError("weight functions must be strictly positive on the grid")
    t_grid = np.atleast_1d(np.asarray(t_grid, dtype=float))
    if t_grid.size == 0 or not np.all(np.isfinite(t_grid)):
        raise RangeError("t_grid must be a nonempty finite 1-d array")

    sin_kt = np.sin(np.outer(t_grid, om))            # (nt, n)
    q1 = np.abs(sin_kt) * (om * rho_s / sig_s)       # k sin(kt) rho / sigma
    q2 = np.abs(sin_kt) * (sig_s / (om * rho_s))     # sin(kt)/k sigma / rho
    i1 = np.unravel_index(np.argmax(q1), q1.shape)
    i2 = np.unravel_index(np.argmax(q2), q2.shape)
    return FlowDomainCheck(
        sup1=float(q1[i1]),
        sup2=float(q2[i2]),
        node1=float(om[i1[1]]),
        t1=float(t_grid[i1[0]]),
        node2=float(om[i2[1]]),
        t2=float(t_grid[i2[0]]),
        grid=om,
    )


def format_trajectory_table(t_grid, trajectory: np.ndarray, log: InvariantLog) -> str:
    """Plain-text table: t, p..., q..., norm-drift, energy-drift."""
    t_grid = np.atleast_1d(np.asarray(t_grid, dtype=float))
    n = trajectory.shape[1] // 2
    header = (
        ["t"]
        + [f"p{i + 1}" for i in range(n)]
        + [f"q{i + 1}" for i in range(n)]
        + ["norm-drift", "energy-drift"]
    )
    rows = [header]
    for k, t in enumerate(t_grid):
        row = [f"{t:.6g}"]
        row += [f"{v:.10g}" for v in trajectory[k]]
        row += [f"{log.norm_drift[k]:.3e}", f"{log.energy_drift[k]:.3e}"]
        rows.append(row)
    widths = [max(len(r[c]) for r in rows) for c in range(len(header))]
    lines = ["  ".join(cell.rjust(w) for cell, w in zip(row, widths)) for row in rows]
    return "\n".join(lines)
