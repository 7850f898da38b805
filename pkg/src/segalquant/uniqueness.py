"""Re-derive the realization from its defining constraints and verify
uniqueness numerically.

The pipeline: (1) :func:`solve_metric_constraint` computes the linear space
of symmetric ``S`` making the generator antisymmetric (``S A + A^T S = 0``);
(2) :func:`uniqueness_scan` searches the positive-definite cone of that space
for metrics ``G`` whose induced unit ``J = G^{-1} W`` (with ``W`` pinned by
the canonical commutation relations) squares to ``-I``, via multi-start
damped Gauss-Newton root finding; (3) converged positive-definite solutions
are clustered, so a singleton cluster is a numerical uniqueness certificate.

:func:`verify_axioms` is the common report card: eight named residuals that
a valid realization must drive below tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConstraintStructureError, ScanFailureError
from .oscillator import FrequencySpec, build_generator
from .realization import standard_symplectic_form
from .symplectic import _entries, _fro


def _symmetric_basis(m: int) -> np.ndarray:
    """Frobenius-orthonormal basis of symmetric ``m x m`` matrices."""
    basis = np.zeros((m * (m + 1) // 2, m, m))
    k = 0
    for i in range(m):
        basis[k, i, i] = 1.0
        k += 1
        for j in range(i + 1, m):
            basis[k, i, j] = basis[k, j, i] = 1.0 / np.sqrt(2.0)
            k += 1
    return basis


def solve_metric_constraint(A, tol: float = 1e-10) -> np.ndarray:
    """Orthonormal basis of ``{S symmetric : S A + A^T S = 0}``.

    Returns a tensor of shape ``(d, m, m)`` whose slices are
    Frobenius-orthonormal symmetric matrices spanning the solution space.

    For the oscillator generator the space splits per distinct frequency of
    multiplicity ``mu`` into block-diagonal solutions
    ``diag(L, Omega^2 L)`` with ``L`` symmetric (``mu (mu+1) / 2``
    dimensions) plus antisymmetric cross-couplings ``[[0, M], [-M, 0]]``
    commuting with ``Omega^2`` (``mu (mu-1) / 2`` dimensions), for a total of
    ``sum mu^2``.  With all frequencies distinct that is exactly ``n``; the
    cross-coupling directions appear only for repeated frequencies and are
    eliminated later by the nonlinear step of the scan.

    Raises
    ------
    ConstraintStructureError
        If the solution space is empty (invalid generator).
    """
    Am = _entries(A)
    m = Am.shape[0]
    basis = _symmetric_basis(m)
    # linear map S -> S A + A^T S, one flattened image per basis element;
    # left-singular vectors of the (d, m^2) image matrix with zero singular
    # value are the coefficient combinations spanning the null space
    images = (basis @ Am + Am.T @ basis).reshape(len(basis), -1)
    U_full, s_full, _ = np.linalg.svd(images, full_matrices=True)
    smax = s_full[0] if s_full.size else 0.0
    if smax == 0.0:
        rank = 0
    else:
        rank = int(np.sum(s_full > tol * smax))
    coeffs = U_full[:, rank:]  # (d_sym, d_null), orthonormal columns
    if coeffs.shape[1] == 0:
        raise ConstraintStructureError("metric constraint system has no symmetric solutions")
    return np.tensordot(coeffs.T, basis, axes=(1, 0))


def constraint_space_dimension(spec: FrequencySpec) -> int:
    """Predicted dimension of the metric constraint space: ``sum mu^2``
    over the multiplicities ``mu`` of distinct frequencies."""
    return int(sum(m * m for m in spec.multiplicity_pattern))


@dataclass(frozen=True)
class ConstraintProblem:
    """Inputs of the uniqueness scan."""

    A: np.ndarray = field(repr=False)
    ccr_target: np.ndarray = field(repr=False)
    tol_linear: float = 1e-10
    tol_nonlinear: float = 1e-9
    restarts: int = 64
    seed: int = 0
    cluster_radius: float = 1e-6

    @classmethod
    def from_spec(cls, spec: FrequencySpec, restarts: int = 64, seed: int = 0,
                  tol_linear: float = 1e-10, tol_nonlinear: float = 1e-9,
                  cluster_radius: float = 1e-6) -> "ConstraintProblem":
        return cls(
            A=build_generator(spec).entries,
            ccr_target=standard_symplectic_form(spec).entries,
            tol_linear=tol_linear,
            tol_nonlinear=tol_nonlinear,
            restarts=restarts,
            seed=seed,
            cluster_radius=cluster_radius,
        )


@dataclass(frozen=True)
class ScanSolution:
    """One converged positive-definite root of ``||J^2 + I|| = 0``."""

    G: np.ndarray = field(repr=False)
    J: np.ndarray = field(repr=False)
    residual: float
    basin_size: int = 1


@dataclass(frozen=True)
class SolutionSet:
    """Clustered scan output plus per-restart diagnostics."""

    solutions: tuple[ScanSolution, ...]
    cluster_radius: float
    diagnostics: dict

    def __len__(self) -> int:
        return len(self.solutions)


def _lm_root(c0: np.ndarray, basis: np.ndarray, W: np.ndarray,
             target: float, max_iter: int = 200) -> tuple[np.ndarray, float]:
    """Damped Gauss-Newton root finding for ``r(c) = vec(J(c)^2 + I)``.

    ``G(c) = sum_k c_k basis_k``, ``J = G^{-1} W``.  Steps leaving the
    positive-definite cone (min eigenvalue <= 0) are rejected by raising the
    damping, never by adding a barrier term.  The Jacobian is analytic:
    ``dJ/dc_k = -G^{-1} B_k J``.
    """
    d = len(basis)
    m = W.shape[0]
    eye = np.eye(m)

    def split(c):
        G = np.tensordot(c, basis, axes=(0, 0))
        J = np.linalg.solve(G, W)
        R = J @ J + eye
        return G, J, R

    c = c0.copy()
    try:
        G, J, R = split(c)
    except np.linalg.LinAlgError:
        return c, np.inf
    cost = _fro(R)
    lam = 1e-3
    for _ in range(max_iter):
        if cost <= target:
            break
        dJ = -np.linalg.solve(G, basis @ J)
        jac = (dJ @ J + J @ dJ).reshape(d, -1)      # rows: d residual / d c_k
        JTJ = jac @ jac.T
        grad = jac @ R.ravel()
        diag = np.diag(JTJ).copy()
        diag[diag <= 0] = 1.0
        moved = False
        for _ in range(50):
            try:
                step = np.linalg.solve(JTJ + lam * np.diag(diag), -grad)
            except np.linalg.LinAlgError:
                lam *= 10.0
                continue
            c_new = c + step
            G_new = np.tensordot(c_new, basis, axes=(0, 0))
            if np.linalg.eigvalsh(G_new)[0] <= 0:   # reject: leaves the cone
                lam *= 10.0
                continue
            J_new = np.linalg.solve(G_new, W)
            R_new = J_new @ J_new + eye
            cost_new = _fro(R_new)
            if cost_new < cost:
                c, G, J, R, cost = c_new, G_new, J_new, R_new, cost_new
                lam = max(lam / 3.0, 1e-14)
                moved = True
                break
            lam *= 10.0
        if not moved:
            break
    return c, cost


def _start_point(rng: np.random.Generator, basis: np.ndarray, W: np.ndarray,
                 c_anchor: np.ndarray, ev_anchor: float) -> np.ndarray:
    """Random positive-definite start in the constraint space.

    Pushes a random ray from the anchor (the identity's projection onto the
    space) towards the cone boundary by bisection on the minimum eigenvalue,
    backs off by a random fraction, then rescales the result so that a scalar
    multiple brings ``J(c)^2`` as close to ``-I`` as possible.  Consumes a
    fixed number of variates (one normal vector, one uniform) per call.
    """
    ray = rng.standard_normal(len(basis))
    ray *= np.linalg.norm(c_anchor) / np.linalg.norm(ray)
    back_off = float(rng.uniform(0.2, 0.999))

    def eigmin(c: np.ndarray) -> float:
        return float(np.linalg.eigvalsh(np.tensordot(c, basis, axes=(0, 0)))[0])

    floor = 0.02 * ev_anchor
    hi = 1.0
    while eigmin(c_anchor + hi * ray) > floor and hi < 64.0:
        hi *= 2.0
    lo = 0.0
    for _ in range(30):
        mid = 0.5 * (lo + hi)
        if eigmin(c_anchor + mid * ray) > floor:
            lo = mid
        else:
            hi = mid
    c = c_anchor + lo * back_off * ray
    J = np.linalg.solve(np.tensordot(c, basis, axes=(0, 0)), W)
    u = (J @ J).ravel()
    trace = float(np.trace(J @ J))
    if trace < 0.0:
        c = c * np.sqrt(-(u @ u) / trace)
    return c


def uniqueness_scan(problem: ConstraintProblem) -> SolutionSet:
    """Multi-start search for all positive-definite realizations.

    Start points radiate from the identity's Frobenius projection onto the
    constraint space -- positive definite for every oscillator generator,
    because the cross-coupling directions are traceless against the identity
    -- along random rays pushed to the cone boundary (see
    :func:`_start_point`); should the anchor ever fail to be positive the
    scan falls back to rejection sampling.  All draws come from one
    ``default_rng(seed)`` stream with a fixed number of variates per restart,
    so doubling ``restarts`` extends rather than reshuffles the start
    sequence.  Each start is polished by damped Gauss-Newton; converged roots
    are kept only if ``G`` is positive definite and the residual is below
    ``tol_nonlinear``, and representatives are clustered by Frobenius
    distance.

    Raises
    ------
    ScanFailureError
        If no restart converges; the message carries per-restart diagnostics.
    """
    A = np.asarray(problem.A, dtype=float)
    W = np.asarray(problem.ccr_target, dtype=float)
    basis = solve_metric_constraint(A, tol=problem.tol_linear)
    d = len(basis)
    m = A.shape[0]
    rng = np.random.default_rng(problem.seed)
    target = min(problem.tol_nonlinear, 1e-12)

    c_anchor = basis.reshape(d, -1) @ np.eye(m).ravel()
    ev_anchor = float(np.linalg.eigvalsh(np.tensordot(c_anchor, basis, axes=(0, 0)))[0])

    roots: list[tuple[np.ndarray, np.ndarray, float]] = []
    n_nonconverged = 0
    n_nonspd = 0
    for _ in range(int(problem.restarts)):
        if ev_anchor > 0.0:
            c0 = _start_point(rng, basis, W, c_anchor, ev_anchor)
        else:
            c0 = None
            for _ in range(200):
                cand = rng.standard_normal(d)
                cand *= np.sqrt(m) / np.linalg.norm(cand)
                if np.linalg.eigvalsh(np.tensordot(cand, basis, axes=(0, 0)))[0] > 0:
                    c0 = cand
                    break
            if c0 is None:
                n_nonconverged += 1
                continue
        c, cost = _lm_root(c0, basis, W, target)
        if not np.isfinite(cost) or cost > problem.tol_nonlinear:
            n_nonconverged += 1
            continue
        G = np.tensordot(c, basis, axes=(0, 0))
        evmin = np.linalg.eigvalsh(G)[0]
        if evmin <= 1e-10 * _fro(G):
            n_nonspd += 1
            continue
        roots.append((G, np.linalg.solve(G, W), cost))

    diagnostics = {
        "restarts": int(problem.restarts),
        "converged": len(roots),
        "nonconverged": n_nonconverged,
        "rejected_nonpositive": n_nonspd,
        "space_dimension": d,
    }
    if not roots:
        raise ScanFailureError(f"no restart converged; diagnostics: {diagnostics}")

    # greedy clustering, then a merge pass so representatives stay separated
    # by well over the cluster radius
    clusters: list[list[tuple[np.ndarray, np.ndarray, float]]] = []
    for G, J, cost in roots:
        for members in clusters:
            if np.linalg.norm(G - members[0][0]) <= problem.cluster_radius:
                members.append((G, J, cost))
                break
        else:
            clusters.append([(G, J, cost)])
    merged = True
    while merged:
        merged = False
        for a in range(len(clusters)):
            for b in range(a + 1, len(clusters)):
                if np.linalg.norm(clusters[a][0][0] - clusters[b][0][0]) <= 10 * problem.cluster_radius:
                    clusters[a].extend(clusters.pop(b))
                    merged = True
                    break
            if merged:
                break

    solutions = []
    for members in clusters:
        best = min(members, key=lambda item: item[2])
        solutions.append(
            ScanSolution(G=best[0], J=best[1], residual=best[2], basin_size=len(members))
        )
    solutions.sort(key=lambda s: s.residual)
    return SolutionSet(
        solutions=tuple(solutions),
        cluster_radius=problem.cluster_radius,
        diagnostics=diagnostics,
    )


@dataclass(frozen=True)
class AxiomCheck:
    name: str
    residual: float
    tolerance: float
    passed: bool


@dataclass(frozen=True)
class AxiomReport:
    """Eight named residuals; a realization is valid iff all pass."""

    checks: tuple[AxiomCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def max_residual(self) -> float:
        return max(c.residual for c in self.checks)

    def __getitem__(self, name: str) -> AxiomCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failed_names(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def as_dicts(self) -> list[dict]:
        return [
            {"name": c.name, "residual": c.residual, "tolerance": c.tolerance, "pass": c.passed}
            for c in self.checks
        ]


def verify_axioms(G, W, A, tol: float = 1e-10, ccr_target=None) -> AxiomReport:
    """Report card of the defining identities for a candidate ``(G, W, A)``.

    Residuals (relative Frobenius where the reference is nonzero):

    1. ``metric-symmetry``        ``||G - G^T|| / ||G||``
    2. ``metric-positivity``      ``max(0, -min eigenvalue)`` (must be > 0)
    3. ``generator-antisymmetry`` ``||G A + A^T G|| / ||G A||``
    4. ``form-antisymmetry``      ``||W + W^T|| / ||W||``
    5. ``ccr-standard-form``      ``||W - W_std|| / ||W_std||``
    6. ``complex-unit-square``    ``||J^2 + I||`` with ``J = G^{-1} W``
    7. ``unit-metric-compat``     ``||G J - W|| / ||W||``
    8. ``hamiltonian-commutation`` ``||[J, H]|| / ||J H||`` with ``H = J A``

    Failures never raise: every defect lands in the report.
    """
    Gm = np.asarray(_entries(G), dtype=float)
    Wm = np.asarray(_entries(W), dtype=float)
    Am = np.asarray(_entries(A), dtype=float)
    m = Gm.shape[0]
    if ccr_target is None:
        n = m // 2
        ccr_target = np.zeros((m, m))
        ccr_target[:n, n:] = np.eye(n)
        ccr_target[n:, :n] = -np.eye(n)
    else:
        ccr_target = np.asarray(_entries(ccr_target), dtype=float)

    def rel(num: float, den: float) -> float:
        return num / max(den, 1e-300)

    checks: list[AxiomCheck] = []

    def add(name: str, residual: float, passed=None) -> None:
        residual = float(residual)
        checks.append(
            AxiomCheck(
                name=name,
                residual=residual,
                tolerance=tol,
                passed=bool(residual <= tol) if passed is None else bool(passed),
            )
        )

    add("metric-symmetry", rel(_fro(Gm - Gm.T), _fro(Gm)))
    evmin = float(np.linalg.eigvalsh(0.5 * (Gm + Gm.T))[0])
    add("metric-positivity", max(0.0, -evmin), passed=evmin > 0)
    GA = Gm @ Am
    add("generator-antisymmetry", rel(_fro(GA + Am.T @ Gm), _fro(GA)))
    add("form-antisymmetry", rel(_fro(Wm + Wm.T), _fro(Wm)))
    add("ccr-standard-form", rel(_fro(Wm - ccr_target), _fro(ccr_target)))
    try:
        J = np.linalg.solve(Gm, Wm)
    except np.linalg.LinAlgError:
        add("complex-unit-square", np.inf, passed=False)
        add("unit-metric-compat", np.inf, passed=False)
        add("hamiltonian-commutation", np.inf, passed=False)
        return AxiomReport(checks=tuple(checks))
    add("complex-unit-square", _fro(J @ J + np.eye(m)))
    add("unit-metric-compat", rel(_fro(Gm @ J - Wm), _fro(Wm)))
    H = J @ Am
    add("hamiltonian-commutation", rel(_fro(J @ H - H @ J), _fro(J @ H)))
    return AxiomReport(checks=tuple(checks))
