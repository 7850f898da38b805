import numpy as np
import pytest

from segalquant import (
    DimensionMismatchError,
    FrequencySpec,
    RangeError,
    SpecError,
    build_generator,
    canonical_transform,
    check_flow_domain,
    complex_evolution,
    complexify,
    construct_unique_realization,
    evolve,
    flow_closed_form,
    flow_expm,
    format_trajectory_table,
)


def spec_from(omegas):
    return FrequencySpec(discrete=tuple((float(om), 1) for om in omegas))


class TestClosedForm:
    def test_quarter_period(self):
        F = flow_closed_form(spec_from([1.0]), np.pi / 2).entries
        assert np.allclose(F, [[0.0, -1.0], [1.0, 0.0]], atol=1e-15)

    def test_identity_at_zero(self):
        F = flow_closed_form(spec_from([0.5, 3.0]), 0.0).entries
        assert np.array_equal(F, np.eye(4))

    def test_maps_example_point(self):
        F = flow_closed_form(spec_from([2.0]), np.pi / 4).entries
        out = F @ np.array([2.0, 0.0])
        assert np.allclose(out, [0.0, 1.0], atol=1e-15)

    def test_determinant_and_group_law(self):
        rng = np.random.default_rng(3)
        spec = spec_from([0.3, 1.7, 6.0])
        for _ in range(15):
            s, t = rng.uniform(-10, 10, size=2)
            Fs = flow_closed_form(spec, s).entries
            Ft = flow_closed_form(spec, t).entries
            Fst = flow_closed_form(spec, s + t).entries
            assert np.linalg.norm(Fs @ Ft - Fst) <= 1e-11 * max(1.0, np.linalg.norm(Fst))
            assert np.linalg.det(Ft) == pytest.approx(1.0, rel=1e-11)

    def test_solves_equations_of_motion(self):
        # d(phi)/dt = A phi via central differences
        spec = spec_from([0.9, 4.2])
        A = build_generator(spec).entries
        h = 1e-6
        for t in (0.0, 0.8, 3.3):
            Fp = flow_closed_form(spec, t + h).entries
            Fm = flow_closed_form(spec, t - h).entries
            F = flow_closed_form(spec, t).entries
            assert np.allclose((Fp - Fm) / (2 * h), A @ F, atol=1e-7)

    def test_tiny_phase_branch_matches_series(self):
        # the sin(wt)/w entry must stay accurate where sin cancels
        spec = spec_from([1e-7 + 1e-3, 2.0])  # small but valid frequency
        t = 1e-9
        F = flow_closed_form(spec, t).entries
        assert F[2, 0] == pytest.approx(t, rel=1e-12)
        # derivative identity also pins the entry near t = 0
        assert flow_closed_form(spec, 0.0).entries[2, 0] == 0.0

    def test_rejects_nonfinite_time(self):
        with pytest.raises(RangeError):
            flow_closed_form(spec_from([1.0]), np.inf)


class TestExpmOracle:
    def test_half_turn(self):
        F = flow_expm(build_generator(spec_from([1.0])), np.pi).entries
        assert np.allclose(F, -np.eye(2), atol=1e-12)

    def test_nilpotent_generator(self):
        F = flow_expm(np.array([[0.0, 0.0], [1.0, 0.0]]), 1.0).entries
        assert np.allclose(F, [[1.0, 0.0], [1.0, 1.0]], atol=1e-15)

    def test_matches_closed_form_spot(self):
        spec = spec_from([2.0])
        F1 = flow_closed_form(spec, 0.3).entries
        F2 = flow_expm(build_generator(spec), 0.3).entries
        assert np.linalg.norm(F1 - F2) <= 1e-12

    def test_oracle_equivalence_random(self):
        rng = np.random.default_rng(77)
        for _ in range(50):
            n = int(rng.integers(1, 9))
            spec = spec_from(10.0 ** rng.uniform(-1, 1, size=n))
            t = rng.uniform(-20, 20)
            F1 = flow_closed_form(spec, t).entries
            F2 = flow_expm(build_generator(spec), t).entries
            assert np.linalg.norm(F1 - F2) <= 1e-10 * np.linalg.norm(F1)

    def test_rejects_nonfinite(self):
        with pytest.raises(RangeError):
            flow_expm(np.array([[0.0, np.inf], [1.0, 0.0]]), 1.0)
        with pytest.raises(RangeError):
            flow_expm(np.eye(2), np.nan)
        with pytest.raises(DimensionMismatchError):
            flow_expm(np.zeros((2, 3)), 1.0)


class TestUnitarity:
    def test_flow_preserves_realization_metric(self):
        spec = spec_from([2.0])
        real = construct_unique_realization(spec)
        F = flow_closed_form(spec, 1.0).entries
        assert np.linalg.norm(F.T @ real.G @ F - real.G) <= 1e-10

    def test_flow_is_not_euclidean_unitary(self):
        # falsification: with G = I and omega != 1 the flow fails unitarity
        F = flow_closed_form(spec_from([2.0]), 1.0).entries
        assert np.linalg.norm(F.T @ F - np.eye(2)) > 0.5

    def test_flow_preserves_symplectic_form(self):
        spec = spec_from([0.5, 2.0, 2.0])
        real = construct_unique_realization(spec)
        for t in (0.4, 1.9, 13.0):
            F = flow_closed_form(spec, t).entries
            assert np.linalg.norm(F.T @ real.W @ F - real.W) <= 1e-11


class TestEvolve:
    def test_example_trajectory(self):
        spec = spec_from([2.0])
        real = construct_unique_realization(spec)
        traj, log = evolve(real, np.array([2.0, 0.0]), [np.pi / 4])
        assert np.allclose(traj[0], [0.0, 1.0], atol=1e-14)
        assert log.max_drifts()["energy"] <= 1e-13

    def test_conservation_triple(self):
        rng = np.random.default_rng(31)
        spec = spec_from([0.5, 1.1, 3.0])
        real = construct_unique_realization(spec)
        t_grid = np.linspace(0.0, 10.0, 40)
        for _ in range(10):
            x0 = rng.standard_normal(2 * spec.n)
            x0 /= np.sqrt(x0 @ real.G @ x0)
            traj, log = evolve(real, x0, t_grid)
            drifts = log.max_drifts()
            assert drifts["norm"] <= 1e-10
            assert drifts["symplectic"] <= 1e-10
            assert drifts["energy"] <= 1e-10

    def test_full_period_return(self):
        spec = spec_from([1.0, 2.0])
        real = construct_unique_realization(spec)
        x0 = np.array([1.0, 0.0, 0.0, 0.0])
        traj, _ = evolve(real, x0, [2.0 * np.pi])
        assert np.linalg.norm(traj[0] - x0) <= 1e-10

    def test_trajectory_table_format(self):
        spec = spec_from([1.0])
        real = construct_unique_realization(spec)
        traj, log = evolve(real, np.array([1.0, 0.0]), [0.0, 0.5])
        table = format_trajectory_table([0.0, 0.5], traj, log)
        lines = table.splitlines()
        assert lines[0].split() == ["t", "p1", "q1", "norm-drift", "energy-drift"]
        assert len(lines) == 3

    def test_input_validation(self):
        spec = spec_from([1.0])
        real = construct_unique_realization(spec)
        with pytest.raises(DimensionMismatchError):
            evolve(real, np.array([1.0, 0.0, 0.0]), [0.1])
        with pytest.raises(RangeError):
            evolve(real, np.array([1.0, 0.0]), [])


class TestComplexEvolution:
    def test_example_unit_frequency(self):
        real = construct_unique_realization(spec_from([1.0]))
        z = complex_evolution(real, np.array([1.0, 0.0]), np.pi / 2)
        assert z[0] == pytest.approx(-1.0j, abs=1e-14)

    def test_example_scaling(self):
        real = construct_unique_realization(spec_from([2.0]))
        z0 = complex_evolution(real, np.array([2.0, 0.0]), 0.0)
        assert z0[0] == pytest.approx(np.sqrt(2.0), abs=1e-14)
        zt = complex_evolution(real, np.array([2.0, 0.0]), 0.9)
        assert zt[0] == pytest.approx(np.sqrt(2.0) * np.exp(-2.0j * 0.9), abs=1e-13)

    def test_diagram_commutes(self):
        rng = np.random.default_rng(12)
        for _ in range(20):
            n = int(rng.integers(1, 5))
            spec = spec_from(10.0 ** rng.uniform(-1, 1, size=n))
            real = construct_unique_realization(spec)
            x0 = rng.standard_normal(2 * n)
            t = rng.uniform(-7, 7)
            direct = complex_evolution(real, x0, t)
            U0_inv = np.linalg.inv(canonical_transform(spec, 0.0).entries)
            xt = flow_closed_form(spec, t).entries @ x0
            J_std = np.block([[np.zeros((n, n)), np.eye(n)],
                              [-np.eye(n), np.zeros((n, n))]])
            via_flow = complexify(J_std, U0_inv @ xt)
            assert np.max(np.abs(direct - via_flow)) <= 1e-11


class TestFlowDomain:
    def test_matched_weights_bounded_by_one(self):
        spec = spec_from([0.5, 1.0, 8.0, 40.0])
        rho = spec.omegas**-0.5
        sigma = rho * spec.omegas
        res = check_flow_domain(rho, sigma, spec, [0.3, 1.0, 4.7])
        assert res.sup1 <= 1.0 + 1e-12
        assert res.sup2 <= 1.0 + 1e-12
        assert res.passes(1.0)

    def test_callable_weights(self):
        spec = spec_from([1.0, 5.0])
        res = check_flow_domain(lambda k: k**-0.5, lambda k: k**0.5, spec, [1.0])
        assert res.sup1 <= 1.0 + 1e-12

    def test_unmatched_weights_grow_with_frequency(self):
        nodes = tuple(float(k) for k in range(1, 201))
        spec = FrequencySpec(nodes=nodes, weights=(1.0,) * 200)
        rho = np.ones(spec.n)
        res = check_flow_domain(rho, rho, spec, [1.0])
        assert res.sup1 >= 100.0
        assert res.node1 > 100.0  # achieved at a high-frequency node
        assert not res.passes(1.0)

    def test_rejects_bad_weights(self):
        spec = spec_from([1.0, 2.0])
        with pytest.raises(SpecError):
            check_flow_domain(np.array([1.0, -1.0]), np.ones(2), spec, [1.0])
        with pytest.raises(DimensionMismatchError):
            check_flow_domain(np.ones(3), np.ones(2), spec, [1.0])
        with pytest.raises(RangeError):
            check_flow_domain(np.ones(2), np.ones(2), spec, [])
