"""Decoupled harmonic oscillator systems.

A system is described by a :class:`FrequencySpec`: strictly positive discrete
frequencies with multiplicities, optionally followed by a quadrature
discretization (nodes and weights) of a continuous frequency band.  Phase
space is ``R^{2n}`` with coordinates ordered ``(p_1..p_n, q_1..q_n)``;
repeated frequencies occupy consecutive coordinates and quadrature nodes
follow the discrete block.

The equations of motion ``dp/dt = -omega^2 q``, ``dq/dt = p`` are encoded in
the block generator ``A = [[0, -Omega^2], [I, 0]]``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import DimensionMismatchError, SpecError

#: Frequencies below this threshold are rejected: the metric entries 1/omega
#: blow up and the realization loses numerical meaning.
MIN_FREQUENCY = 1e-8


def gauss_legendre_band(lo: float, hi: float, num: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights for a frequency band ``[lo, hi]``.

    Parameters
    ----------
    lo, hi : float
        Band endpoints, ``0 <= lo < hi``.
    num : int
        Number of quadrature nodes.

    Returns
    -------
    nodes, weights : ndarray
        Nodes lie strictly inside ``(lo, hi)``; weights are positive and sum
        to ``hi - lo``.
    """
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi <= lo:
        raise SpecError(f"invalid band [{lo}, {hi}]")
    if lo < 0:
        raise SpecError("band endpoints must be nonnegative")
    if num < 1:
        raise SpecError("need at least one quadrature node")
    x, w = leggauss(num)
    nodes = 0.5 * (hi + lo) + 0.5 * (hi - lo) * x
    weights = 0.5 * (hi - lo) * w
    return nodes, weights


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class FrequencySpec:
    """Frequency content of a decoupled oscillator system.

    Attributes
    ----------
    discrete : tuple of (omega, mult)
        Discrete frequencies with integer multiplicities.
    nodes, weights : tuple of float
        Optional quadrature discretization of a continuous band.  Discrete
        coordinates implicitly carry weight 1.
    """

    discrete: tuple[tuple[float, int], ...] = ()
    nodes: tuple[float, ...] = ()
    weights: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        disc = tuple((float(w), int(m)) for w, m in self.discrete)
        nodes = tuple(float(k) for k in self.nodes)
        weights = tuple(float(w) for w in self.weights)
        object.__setattr__(self, "discrete", disc)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

        for om, mult in disc:
            if not math.isfinite(om) or om <= MIN_FREQUENCY:
                raise SpecError(f"nonpositive frequency {om!r} (threshold {MIN_FREQUENCY})")
            if mult < 1:
                raise SpecError(f"multiplicity must be a positive integer, got {mult}")
        if len(nodes) != len(weights):
            raise SpecError("nodes and weights must have equal length")
        for k in nodes:
            if not math.isfinite(k) or k <= MIN_FREQUENCY:
                raise SpecError(f"nonpositive frequency {k!r} (threshold {MIN_FREQUENCY})")
        for w in weights:
            if not math.isfinite(w) or w <= 0:
                raise SpecError(f"quadrature weights must be positive, got {w!r}")
        if len(set(nodes)) != len(nodes):
            raise SpecError("quadrature nodes must be pairwise distinct")
        if not disc and not nodes:
            raise SpecError("empty frequency specification")

        om = [w for w, m in disc for _ in range(m)] + list(nodes)
        qw = [1.0 for w, m in disc for _ in range(m)] + list(weights)
        object.__setattr__(self, "_omegas", _freeze(om))
        object.__setattr__(self, "_quad_weights", _freeze(qw))

    # -- derived views ----------------------------------------------------

    @property
    def n(self) -> int:
        """Number of oscillator coordinates (discrete expanded + nodes)."""
        return self._omegas.size

    @property
    def omegas(self) -> np.ndarray:
        """Per-coordinate frequency vector, shape ``(n,)``."""
        return self._omegas

    @property
    def quad_weights(self) -> np.ndarray:
        """Per-coordinate quadrature weights (1 on discrete coordinates)."""
        return self._quad_weights

    @property
    def multiplicity_pattern(self) -> tuple[int, ...]:
        """Multiplicities of the distinct frequency values, in value order."""
        values, counts = np.unique(self._omegas, return_counts=True)
        return tuple(int(c) for c in counts)

    # -- serialization ----------------------------------------------------

    @classmethod
    def from_dict(cls, data: dict) -> "FrequencySpec":
        """Build a spec from its JSON dictionary form.

        Accepted shape::

            {"discrete": [{"omega": 2.0, "mult": 1}, ...],
             "continuous": {"interval": [a, b], "nodes": N}}

        The continuous block may alternatively give explicit samples:
        ``{"nodes": [...], "weights": [...]}``.  Unknown keys are rejected.
        """
        if not isinstance(data, dict):
            raise SpecError("frequency spec must be a JSON object")
        unknown = set(data) - {"discrete", "continuous"}
        if unknown:
            raise SpecError(f"unknown frequency spec keys: {sorted(unknown)}")
        discrete = []
        for entry in data.get("discrete", []):
            if not isinstance(entry, dict) or set(entry) - {"omega", "mult"}:
                raise SpecError(f"bad discrete entry {entry!r}")
            if "omega" not in entry:
                raise SpecError(f"discrete entry missing 'omega': {entry!r}")
            discrete.append((float(entry["omega"]), int(entry.get("mult", 1))))
        nodes: tuple[float, ...] = ()
        weights: tuple[float, ...] = ()
        cont = data.get("continuous")
        if cont is not None:
            if not isinstance(cont, dict):
                raise SpecError("continuous block must be an object")
            if set(cont) == {"interval", "nodes"}:
                lo, hi = cont["interval"]
                ns, ws = gauss_legendre_band(float(lo), float(hi), int(cont["nodes"]))
                nodes, weights = tuple(ns), tuple(ws)
            elif set(cont) == {"nodes", "weights"}:
                nodes = tuple(float(x) for x in cont["nodes"])
                weights = tuple(float(x) for x in cont["weights"])
            else:
                raise SpecError(
                    "continuous block must be {'interval': [a,b], 'nodes': N} "
                    "or {'nodes': [...], 'weights': [...]}"
                )
        return cls(discrete=tuple(discrete), nodes=nodes, weights=weights)

    @classmethod
    def from_json(cls, text: str) -> "FrequencySpec":
        return cls.from_dict(json.loads(text))

    def to_dict(self) -> dict:
        """Dictionary form; continuous parts are emitted as explicit samples."""
        out: dict = {"discrete": [{"omega": om, "mult": m} for om, m in self.discrete]}
        if self.nodes:
            out["continuous"] = {"nodes": list(self.nodes), "weights": list(self.weights)}
        return out


@dataclass(frozen=True)
class PhaseSpacePoint:
    """A phase-space point ``x = (p, q)`` with momentum block first."""

    p: np.ndarray
    q: np.ndarray

    def __post_init__(self) -> None:
        p = _freeze(np.atleast_1d(self.p))
        q = _freeze(np.atleast_1d(self.q))
        if p.ndim != 1 or q.ndim != 1 or p.size != q.size:
            raise DimensionMismatchError(
                f"p and q must be equal-length vectors, got {p.shape} and {q.shape}"
            )
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @classmethod
    def from_vector(cls, x: np.ndarray) -> "PhaseSpacePoint":
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if x.ndim != 1 or x.size % 2:
            raise DimensionMismatchError(f"phase-space vector must have even length, got {x.shape}")
        n = x.size // 2
        return cls(p=x[:n], q=x[n:])

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.p, self.q])

    @property
    def n(self) -> int:
        return self.p.size


@dataclass(frozen=True)
class GeneratorMatrix:
    """Dense equations-of-motion generator ``[[0, -Omega^2], [I, 0]]``."""

    entries: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", _freeze(self.entries))

    @property
    def n(self) -> int:
        return self.entries.shape[0] // 2


def _coerce_point(spec: FrequencySpec, x) -> PhaseSpacePoint:
    if isinstance(x, PhaseSpacePoint):
        pt = x
    else:
        pt = PhaseSpacePoint.from_vector(np.asarray(x, dtype=float))
    if pt.n != spec.n:
        raise DimensionMismatchError(f"point has {pt.n} modes, spec has {spec.n}")
    return pt


def omega_apply(spec: FrequencySpec, v) -> np.ndarray:
    """Apply the diagonal frequency operator: ``(Omega v)_i = omega_i v_i``."""
    v = np.asarray(v, dtype=float)
    if v.shape != (spec.n,):
        raise DimensionMismatchError(f"expected vector of shape ({spec.n},), got {v.shape}")
    return spec.omegas * v


def build_generator(spec: FrequencySpec) -> GeneratorMatrix:
    """Assemble the dense ``2n x 2n`` generator ``A = [[0, -Omega^2], [I, 0]]``.

    Applied to ``x = (p, q)`` it returns ``(-Omega^2 q, p)``, the right-hand
    side of the oscillator equations of motion.
    """
    n = spec.n
    A = np.zeros((2 * n, 2 * n))
    A[:n, n:] = -np.diag(spec.omegas**2)
    A[n:, :n] = np.eye(n)
    return GeneratorMatrix(A)


def classical_hamiltonian(spec: FrequencySpec, x) -> float:
    """Conserved oscillator energy ``sum_i w_i (p_i^2 + omega_i^2 q_i^2) / 2``.

    Quadrature weights ``w_i`` are 1 on discrete coordinates, so for purely
    discrete spectra this is the plain euclidean form
    ``(|p|^2 + |Omega q|^2) / 2``.  Including the weights on continuous
    coordinates keeps the identity with the realization's quadratic form
    ``(x, H x)_G / 2`` valid for every spec.
    """
    pt = _coerce_point(spec, x)
    w = spec.quad_weights
    om = spec.omegas
    return float(0.5 * (np.sum(w * pt.p**2) + np.sum(w * (om * pt.q) ** 2)))
