"""Truncated Fock lift of the oscillator realization.

The bosonic Fock space over an ``n``-mode system is truncated by total
occupation number: the basis holds every occupation vector with
``sum_i n_i <= cutoff``, ordered by total occupation and lexicographically
within a shell.  Ladder operators are dense real matrices in that basis;
annihilation never leaves the space, creation out of the top shell is
truncated (so canonical commutators hold exactly below the top shell and the
deviation on the top shell is reported, never hidden).

The lifted Hamiltonian is diagonal with eigenvalues ``sum_i n_i omega_i``
(no zero-point offset) and the lifted flow is the diagonal phase group
``exp(-i t sum_i n_i omega_i)``; its one-particle block reproduces the
complexified classical flow.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np

from .errors import DimensionMismatchError, ResourceLimitError, SpecError
from .oscillator import FrequencySpec, _freeze

#: Default ceiling on the truncated basis dimension (dense matrices scale
#: as dimension squared).
MAX_BASIS_DIM = 2000


def _occupations(modes: int, total: int):
    """Occupation vectors of ``modes`` modes summing to ``total``, ascending lex."""
    if modes == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _occupations(modes - 1, total - first):
            yield (first,) + rest


@dataclass(frozen=True)
class FockBasis:
    """Occupation-number basis truncated at total occupation ``cutoff``."""

    modes: int
    cutoff: int
    states: np.ndarray = field(repr=False)  # (dim, modes) integer occupations

    def __post_init__(self) -> None:
        states = np.asarray(self.states, dtype=np.int64)
        states.flags.writeable = False
        object.__setattr__(self, "states", states)
        object.__setattr__(
            self, "_index", {tuple(row): k for k, row in enumerate(states.tolist())}
        )

    @property
    def dim(self) -> int:
        return self.states.shape[0]

    def index(self, occupation) -> int:
        """Basis index of an occupation vector."""
        key = tuple(int(v) for v in occupation)
        try:
            return self._index[key]
        except KeyError:
            raise KeyError(f"occupation {key} not in basis (cutoff {self.cutoff})") from None

    def totals(self) -> np.ndarray:
        return self.states.sum(axis=1)

    def single_particle_indices(self) -> np.ndarray:
        """Indices of the one-particle states, ordered by mode number."""
        out = np.empty(self.modes, dtype=np.int64)
        for mode in range(self.modes):
            occ = [0] * self.modes
            occ[mode] = 1
            out[mode] = self.index(occ)
        return out


@dataclass(frozen=True)
class LadderPair:
    """Annihilation/creation matrices for one mode (``adag = a^T``)."""

    mode: int
    a: np.ndarray = field(repr=False)
    adag: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", _freeze(self.a))
        object.__setattr__(self, "adag", _freeze(self.adag))


def build_fock(spec: FrequencySpec, cutoff: int,
               max_dim: int = MAX_BASIS_DIM) -> tuple[FockBasis, list[LadderPair]]:
    """Enumerate the truncated basis and assemble ladder matrices.

    Parameters
    ----------
    spec : FrequencySpec
    cutoff : int
        Maximum total occupation; basis dimension is ``C(n + cutoff, n)``.
    max_dim : int
        Memory guard; exceeding it raises :class:`ResourceLimitError` with the
        computed dimension.
    """
    n = spec.n
    cutoff = int(cutoff)
    if cutoff < 0:
        raise SpecError(f"cutoff must be nonnegative, got {cutoff}")
    dim = comb(n + cutoff, n)
    if dim > max_dim:
        raise ResourceLimitError(
            f"truncated Fock dimension {dim} exceeds the budget {max_dim} "
            f"(modes={n}, cutoff={cutoff})"
        )
    states = [occ for total in range(cutoff + 1) for occ in _occupations(n, total)]
    basis = FockBasis(modes=n, cutoff=cutoff, states=np.array(states, dtype=np.int64))

    ladders: list[LadderPair] = []
    occ_arr = basis.states
    for mode in range(n):
        a = np.zeros((dim, dim))
        for col in range(dim):
            ni = occ_arr[col, mode]
            if ni == 0:
                continue
            lowered = occ_arr[col].copy()
            lowered[mode] -= 1
            a[basis.index(lowered), col] = np.sqrt(float(ni))
        ladders.append(LadderPair(mode=mode, a=a, adag=a.T.copy()))
    return basis, ladders


def second_quantized_hamiltonian(spec: FrequencySpec, basis: FockBasis) -> np.ndarray:
    """Diagonal lifted Hamiltonian with eigenvalues ``sum_i n_i omega_i``."""
    if basis.modes != spec.n:
        raise DimensionMismatchError(f"basis has {basis.modes} modes, spec has {spec.n}")
    energies = basis.states.astype(float) @ spec.omegas
    return np.diag(energies)


def evolution_group(spec: FrequencySpec, basis: FockBasis, t: float) -> np.ndarray:
    """Diagonal unitary ``exp(-i t sum_i n_i omega_i)`` on the truncated basis."""
    if basis.modes != spec.n:
        raise DimensionMismatchError(f"basis has {basis.modes} modes, spec has {spec.n}")
    energies = basis.states.astype(float) @ spec.omegas
    return np.diag(np.exp(-1j * float(t) * energies))


def one_particle_block(basis: FockBasis, op: np.ndarray) -> np.ndarray:
    """Restriction of ``op`` to the one-particle states, in mode order."""
    idx = basis.single_particle_indices()
    return op[np.ix_(idx, idx)]


def ccr_residuals(basis: FockBasis, ladders: list[LadderPair]) -> tuple[float, float]:
    """Canonical-commutator defect split by shell.

    Returns ``(safe, top)``: the Frobenius norm of ``[a_i, adag_j] - delta_ij``
    restricted to columns with total occupation below the top shell (should
    vanish to rounding), and the largest deviation entry on top-shell columns
    (an artifact of truncation, reported for transparency).
    """
    totals = basis.totals()
    safe_cols = totals < basis.cutoff
    top_cols = ~safe_cols
    eye = np.eye(basis.dim)
    safe = 0.0
    top = 0.0
    for li in ladders:
        for lj in ladders:
            comm = li.a @ lj.adag - lj.adag @ li.a
            if li.mode == lj.mode:
                comm = comm - eye
            safe += float(np.sum(comm[:, safe_cols] ** 2))
            if np.any(top_cols):
                top = max(top, float(np.max(np.abs(comm[:, top_cols]))))
    return float(np.sqrt(safe)), top
