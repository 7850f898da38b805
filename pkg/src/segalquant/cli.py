"""Command-line driver: ``segal-quant <command> --config <path>``.

Commands
--------
verify        construct the realization and check axioms + flow invariants
uniqueness    multi-start constraint scan; certifies the solution is unique
evolve        propagate a state, tabulate trajectory and invariant drifts
fock          truncated Fock lift: commutators, spectrum, phase group
domain-check  weighted sup-norm conditions on the flow blocks

Every command reads a JSON config (see README), writes a JSON report to
stdout or ``--out``, and exits 0 when all checks pass, 1 when a mathematical
check fails, 2 on invalid input.  Reports are deterministic for a fixed
config and seed, apart from the ``timings`` block.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from . import __version__
from .dynamics import (
    check_flow_domain,
    complex_evolution,
    evolve,
    flow_closed_form,
    flow_expm,
)
from .errors import ConfigError, SegalQuantError
from .fock import build_fock, ccr_residuals, evolution_group, one_particle_block, second_quantized_hamiltonian
from .oscillator import FrequencySpec, build_generator, classical_hamiltonian
from .realization import construct_unique_realization, realization_to_dict
from .symplectic import complexify
from .uniqueness import ConstraintProblem, uniqueness_scan, verify_axioms

REPORT_VERSION = "1"
MATRIX_GATE = 64
TOL_ENV_VAR = "SEGALQUANT_TOL"
DEFAULT_TOLERANCE = 1e-10


def _default_tolerance() -> float:
    raw = os.environ.get(TOL_ENV_VAR)
    if raw is None:
        return DEFAULT_TOLERANCE
    try:
        val = float(raw)
    except ValueError as exc:
        raise ConfigError(f"{TOL_ENV_VAR} must be a float, got {raw!r}") from exc
    if not (val > 0 and np.isfinite(val)):
        raise ConfigError(f"{TOL_ENV_VAR} must be positive and finite, got {raw!r}")
    return val


def _require_keys(block: dict, allowed: set[str], where: str) -> None:
    if not isinstance(block, dict):
        raise ConfigError(f"{where} must be a JSON object")
    unknown = set(block) - allowed
    if unknown:
        raise ConfigError(f"unknown keys in {where}: {sorted(unknown)}")


def _load_config(path: str, command: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path!r} is not valid JSON: {exc}") from exc

    allowed = {"spec", "tolerance"}
    per_command = {
        "verify": {"t_grid", "metric_override"},
        "uniqueness": {"scan"},
        "evolve": {"t_grid", "x0", "probe"},
        "fock": {"fock"},
        "domain-check": {"domain_check"},
    }
    allowed |= per_command[command]
    _require_keys(cfg, allowed, "config")
    if "spec" not in cfg:
        raise ConfigError("config is missing the 'spec' block")
    return cfg


def _tolerance(cfg: dict) -> float:
    tol = cfg.get("tolerance", _default_tolerance())
    tol = float(tol)
    if not (tol > 0 and np.isfinite(tol)):
        raise ConfigError(f"tolerance must be positive and finite, got {tol!r}")
    return tol


def _vector_block(block, n: int, where: str) -> np.ndarray:
    _require_keys(block, {"p", "q"}, where)
    if "p" not in block or "q" not in block:
        raise ConfigError(f"{where} needs 'p' and 'q' arrays")
    p = np.asarray(block["p"], dtype=float)
    q = np.asarray(block["q"], dtype=float)
    if p.shape != (n,) or q.shape != (n,):
        raise ConfigError(f"{where} arrays must have length {n}")
    return np.concatenate([p, q])


def _check(name: str, residual: float, tolerance: float, passed=None) -> dict:
    residual = float(residual)
    return {
        "name": name,
        "residual": residual,
        "tolerance": float(tolerance),
        "pass": bool(residual <= tolerance) if passed is None else bool(passed),
    }


def _finish(report: dict, t0: float) -> dict:
    failed = [c["name"] for c in report["checks"] if not c["pass"]]
    report["summary"] = {"pass": not failed, "failed": failed}
    report["timings"] = {"total_s": time.perf_counter() - t0}
    return report


def _maybe_matrices(report: dict, real, full_matrices: bool) -> None:
    dim = 2 * real.spec.n
    if dim <= MATRIX_GATE or full_matrices:
        report["matrices"] = realization_to_dict(real)
    else:
        report["matrices"] = {
            "omitted": f"dimension {dim} exceeds {MATRIX_GATE}; rerun with --full-matrices"
        }


def cmd_verify(cfg: dict, full_matrices: bool = False, seed=None) -> dict:
    t0 = time.perf_counter()
    spec = FrequencySpec.from_dict(cfg["spec"])
    tol = _tolerance(cfg)
    t_grid = np.asarray(cfg.get("t_grid", [0.25, 1.0, 2.0, 5.0]), dtype=float)
    real = construct_unique_realization(spec)
    A = build_generator(spec).entries

    override = cfg.get("metric_override")
    if override is None:
        G = real.G
    elif override == "identity":
        G = np.eye(2 * spec.n)
    else:
        G = np.asarray(override, dtype=float)
        if G.shape != (2 * spec.n, 2 * spec.n):
            raise ConfigError(f"metric_override must be {2 * spec.n} x {2 * spec.n}")

    report: dict = {
        "version": REPORT_VERSION,
        "package": __version__,
        "command": "verify",
        "config": {
            "spec": spec.to_dict(),
            "tolerance": tol,
            "t_grid": t_grid.tolist(),
            "metric_override": "identity" if override == "identity" else
                               (None if override is None else "explicit"),
        },
        "checks": [],
    }

    axioms = verify_axioms(G, real.W, A, tol=tol, ccr_target=real.W)
    report["checks"].extend(axioms.as_dicts())

    unit = sympl = oracle = energy = 0.0
    x0 = np.ones(2 * spec.n) / np.sqrt(2 * spec.n)
    e0 = classical_hamiltonian(spec, x0)
    for t in t_grid:
        F = flow_closed_form(spec, float(t)).entries
        unit = max(unit, float(np.linalg.norm(F.T @ G @ F - G) / max(np.linalg.norm(G), 1e-300)))
        sympl = max(sympl, float(np.linalg.norm(F.T @ real.W @ F - real.W) / np.linalg.norm(real.W)))
        Fe = flow_expm(A, float(t)).entries
        oracle = max(oracle, float(np.linalg.norm(F - Fe) / np.linalg.norm(F)))
        energy = max(energy, abs(classical_hamiltonian(spec, F @ x0) - e0))
    report["checks"].append(_check("flow-unitarity", unit, tol))
    report["checks"].append(_check("flow-symplecticity", sympl, tol))
    report["checks"].append(_check("flow-oracle-agreement", oracle, tol))
    report["checks"].append(_check("flow-energy-drift", energy, tol))

    _maybe_matrices(report, real, full_matrices)
    return _finish(report, t0)


def cmd_uniqueness(cfg: dict, full_matrices: bool = False, seed=None) -> dict:
    t0 = time.perf_counter()
    spec = FrequencySpec.from_dict(cfg["spec"])
    tol = _tolerance(cfg)
    scan_cfg = cfg.get("scan", {})
    _require_keys(scan_cfg, {"restarts", "seed", "cluster_radius", "tol_nonlinear", "match_tol"},
                  "config.scan")
    restarts = int(scan_cfg.get("restarts", 64))
    eff_seed = int(seed if seed is not None else scan_cfg.get("seed", 0))
    problem = ConstraintProblem.from_spec(
        spec,
        restarts=restarts,
        seed=eff_seed,
        tol_nonlinear=float(scan_cfg.get("tol_nonlinear", 1e-9)),
        cluster_radius=float(scan_cfg.get("cluster_radius", 1e-6)),
    )
    match_tol = float(scan_cfg.get("match_tol", 1e-8))
    result = uniqueness_scan(problem)
    real = construct_unique_realization(spec)
    dist_G = min(float(np.linalg.norm(s.G - real.G)) for s in result.solutions)
    dist_J = min(float(np.linalg.norm(s.J - real.J)) for s in result.solutions)

    report: dict = {
        "version": REPORT_VERSION,
        "package": __version__,
        "command": "uniqueness",
        "config": {
            "spec": spec.to_dict(),
            "tolerance": tol,
            "scan": {
                "restarts": restarts,
                "seed": eff_seed,
                "cluster_radius": problem.cluster_radius,
                "tol_nonlinear": problem.tol_nonlinear,
                "match_tol": match_tol,
            },
        },
        "checks": [
            _check("cluster-count-is-one", abs(len(result) - 1), 0.5,
                   passed=len(result) == 1),
            _check("closed-form-metric-distance", dist_G, match_tol),
            _check("closed-form-unit-distance", dist_J, match_tol),
            _check("scan-best-residual", result.solutions[0].residual, problem.tol_nonlinear),
        ],
        "scan": {
            "clusters": len(result),
            "diagnostics": result.diagnostics,
            "residuals": [s.residual for s in result.solutions],
            "basin_sizes": [s.basin_size for s in result.solutions],
        },
    }
    if 2 * spec.n <= MATRIX_GATE or full_matrices:
        report["scan"]["G"] = [s.G.tolist() for s in result.solutions]
    _maybe_matrices(report, real, full_matrices)
    return _finish(report, t0)


def cmd_evolve(cfg: dict, full_matrices: bool = False, seed=None) -> dict:
    t0 = time.perf_counter()
    spec = FrequencySpec.from_dict(cfg["spec"])
    tol = _tolerance(cfg)
    if "x0" not in cfg:
        raise ConfigError("evolve needs an 'x0' block")
    x0 = _vector_block(cfg["x0"], spec.n, "config.x0")
    probe = _vector_block(cfg["probe"], spec.n, "config.probe") if "probe" in cfg else None
    t_grid = np.asarray(cfg.get("t_grid", np.linspace(0.0, 10.0, 101)), dtype=float)

    real = construct_unique_realization(spec)
    traj, log = evolve(real, x0, t_grid, probe=probe)
    drifts = log.max_drifts()

    report: dict = {
        "version": REPORT_VERSION,
        "package": __version__,
        "command": "evolve",
        "config": {
            "spec": spec.to_dict(),
            "tolerance": tol,
            "t_grid": t_grid.tolist(),
            "x0": {"p": x0[: spec.n].tolist(), "q": x0[spec.n:].tolist()},
        },
        "checks": [
            _check("norm-drift", drifts["norm"], tol),
            _check("symplectic-drift", drifts["symplectic"], tol),
            _check("energy-drift", drifts["energy"], tol),
        ],
        "table": {
            "columns": ["t"]
            + [f"p{i + 1}" for i in range(spec.n)]
            + [f"q{i + 1}" for i in range(spec.n)]
            + ["norm_drift", "symplectic_drift", "energy_drift"],
            "rows": [
                [float(t)] + traj[k].tolist()
                + [float(log.norm_drift[k]), float(log.symplectic_drift[k]),
                   float(log.energy_drift[k])]
                for k, t in enumerate(t_grid)
            ],
        },
    }
    _maybe_matrices(report, real, full_matrices)
    return _finish(report, t0)


def cmd_fock(cfg: dict, full_matrices: bool = False, seed=None) -> dict:
    t0 = time.perf_counter()
    spec = FrequencySpec.from_dict(cfg["spec"])
    tol = _tolerance(cfg)
    fock_cfg = cfg.get("fock", {})
    _require_keys(fock_cfg, {"cutoff", "t", "max_dim"}, "config.fock")
    if "cutoff" not in fock_cfg:
        raise ConfigError("config.fock needs a 'cutoff'")
    cutoff = int(fock_cfg["cutoff"])
    t = float(fock_cfg.get("t", 1.0))
    max_dim = int(fock_cfg.get("max_dim", 2000))

    basis, ladders = build_fock(spec, cutoff, max_dim=max_dim)
    H = second_quantized_hamiltonian(spec, basis)
    U = evolution_group(spec, basis, t)
    safe, top = ccr_residuals(basis, ladders)

    number_comm = 0.0
    for lad in ladders:
        num = lad.adag @ lad.a
        number_comm = max(number_comm, float(np.linalg.norm(H @ num - num @ H)))

    unitarity = float(np.linalg.norm(U.conj().T @ U - np.eye(basis.dim)))

    # one-particle functoriality against the complexified classical flow
    real = construct_unique_realization(spec)
    block = one_particle_block(basis, U)
    func = 0.0
    rng = np.random.default_rng(0)
    for mode in range(spec.n):
        x0 = np.zeros(2 * spec.n)
        x0[mode] = rng.uniform(0.5, 1.5)
        x0[spec.n + mode] = rng.uniform(-1.0, 1.0)
        z0 = complexify(real.J, x0)
        zt = complex_evolution(real, x0, t)
        func = max(func, abs(block[mode, mode] * z0[mode] - zt[mode]))
    off_diag = float(np.linalg.norm(block - np.diag(np.diag(block))))

    spectrum = np.diag(H)
    phases = np.diag(one_particle_block(basis, U))
    report: dict = {
        "version": REPORT_VERSION,
        "package": __version__,
        "command": "fock",
        "config": {
            "spec": spec.to_dict(),
            "tolerance": tol,
            "fock": {"cutoff": cutoff, "t": t, "max_dim": max_dim},
        },
        "checks": [
            _check("ccr-below-top-shell", safe, tol),
            _check("number-operator-commutation", number_comm, tol),
            _check("phase-group-unitarity", unitarity, tol),
            _check("one-particle-functoriality", func, tol),
            _check("one-particle-off-diagonal", off_diag, tol),
        ],
        "fock": {
            "dimension": basis.dim,
            "top_shell_ccr_deviation": top,
            "spectrum": spectrum.tolist(),
            "one_particle_phases": [[z.real, z.imag] for z in phases],
        },
    }
    if basis.dim <= MATRIX_GATE or full_matrices:
        report["fock"]["hamiltonian_diagonal"] = spectrum.tolist()
    return _finish(report, t0)


def cmd_domain_check(cfg: dict, full_matrices: bool = False, seed=None) -> dict:
    t0 = time.perf_counter()
    spec = FrequencySpec.from_dict(cfg["spec"])
    tol = _tolerance(cfg)
    dc = cfg.get("domain_check", {})
    _require_keys(dc, {"rho", "sigma", "t_grid", "bound"}, "config.domain_check")
    if "rho" not in dc or "sigma" not in dc:
        raise ConfigError("config.domain_check needs 'rho' and 'sigma'")

    def resolve(entry, name):
        if isinstance(entry, str):
            if not entry.startswith("omega_pow:"):
                raise ConfigError(f"{name} must be samples or 'omega_pow:<exponent>'")
            try:
                expo = float(entry.split(":", 1)[1])
            except ValueError as exc:
                raise ConfigError(f"bad exponent in {name}: {entry!r}") from exc
            return spec.omegas**expo
        return np.asarray(entry, dtype=float)

    rho = resolve(dc["rho"], "rho")
    sigma = resolve(dc["sigma"], "sigma")
    t_grid = np.asarray(dc.get("t_grid", [1.0]), dtype=float)
    bound = float(dc.get("bound", 1.0))

    result = check_flow_domain(rho, sigma, spec, t_grid)
    report: dict = {
        "version": REPORT_VERSION,
        "package": __version__,
        "command": "domain-check",
        "config": {
            "spec": spec.to_dict(),
            "tolerance": tol,
            "domain_check": {
                "rho": dc["rho"] if isinstance(dc["rho"], str) else list(map(float, rho)),
                "sigma": dc["sigma"] if isinstance(dc["sigma"], str) else list(map(float, sigma)),
                "t_grid": t_grid.tolist(),
                "bound": bound,
            },
        },
        "checks": [
            _check("sup-upper-right", result.sup1, bound + 1e-12),
            _check("sup-lower-left", result.sup2, bound + 1e-12),
        ],
        "domain": {
            "sup1": result.sup1,
            "sup1_node": result.node1,
            "sup1_t": result.t1,
            "sup2": result.sup2,
            "sup2_node": result.node2,
            "sup2_t": result.t2,
            "n_nodes": int(spec.n),
        },
    }
    return _finish(report, t0)


_COMMANDS = {
    "verify": cmd_verify,
    "uniqueness": cmd_uniqueness,
    "evolve": cmd_evolve,
    "fock": cmd_fock,
    "domain-check": cmd_domain_check,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="segal-quant",
        description="Construct, verify and stress-test oscillator realizations.",
    )
    parser.add_argument("command", choices=sorted(_COMMANDS))
    parser.add_argument("--config", required=True, help="path to the JSON run configuration")
    parser.add_argument("--full-matrices", action="store_true",
                        help="include matrices larger than 64 x 64 in the report")
    parser.add_argument("--seed", type=int, default=None,
                        help="override the scan seed from the config")
    parser.add_argument("--out", default=None, help="write the report here instead of stdout")
    args = parser.parse_args(argv)

    try:
        cfg = _load_config(args.config, args.command)
        report = _COMMANDS[args.command](cfg, full_matrices=args.full_matrices, seed=args.seed)
    except SegalQuantError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    text = json.dumps(report, indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0 if report["summary"]["pass"] else 1


def entrypoint() -> None:
    sys.exit(main())
