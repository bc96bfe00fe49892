"""
Profile Tests
Tests for the traveling-wave system, end-state linearizations, the doubled
boundary value problem, continuation and profile validation
"""
import dataclasses
import math

import numpy as np
from django.test import SimpleTestCase, tag
from scipy.interpolate import CubicSpline

from detonation.engine.bvp import evaluate
from detonation.engine.model import end_states
from detonation.engine.profile import (
    MINUS,
    PLUS,
    TravelingWaveSystem,
    continue_family,
    double,
    end_linearization,
    explicit_tail,
    initial_guess,
    projective_conditions,
    solve_profile,
    solve_with_continuation,
    tail_beta,
    tame_anchor,
    validate_profile,
    vector_field,
)
from detonation.exceptions import ValidationFailed
from detonation.models import Mesh, ProfileOptions, SolverSettings, TailSolution

from .test_utils import ParamsFactory, ProfileFactory


class VectorFieldTests(SimpleTestCase):
    """Test the inflated traveling-wave vector field"""

    def setUp(self):
        self.params = ParamsFactory.tame()
        self.ends = end_states(self.params)

    def test_reference_value(self):
        """✅ Field at (0.5, 0.5, 0, 1)"""
        field = vector_field([0.5, 0.5, 0.0, 1.0], self.params, self.ends)
        np.testing.assert_allclose(field, [-0.1255001, 0.0, 0.0410425, 0.0], atol=1e-6)

    def test_equilibria(self):
        """✅ Both end states are equilibria for any k"""
        for k in (0.5, 8.177, 100.0):
            burned = vector_field([self.ends.u_minus, 0.0, 0.0, k], self.params, self.ends)
            unburned = vector_field([0.0, 1.0, 0.0, k], self.params, self.ends)
            np.testing.assert_allclose(burned, 0.0, atol=1e-15)
            np.testing.assert_allclose(unburned, 0.0, atol=1e-15)

    def test_jacobian_matches_differences(self):
        """✅ Analytic Jacobian against centred differences"""
        system = TravelingWaveSystem(self.params, self.ends)
        point = np.array([0.6, 0.4, 0.05, 8.0])
        J = system.jacobian(None, point.reshape(4, 1))[:, :, 0]
        h = 1e-6
        for j in range(4):
            step = np.zeros(4)
            step[j] = h
            column = (system.rhs(None, (point + step).reshape(4, 1)) - system.rhs(None, (point - step).reshape(4, 1)))
            np.testing.assert_allclose(J[:, j], column[:, 0] / (2 * h), atol=1e-7)


class EndLinearizationTests(SimpleTestCase):
    """Test eigenvalue splitting and invariant subspaces at the end states"""

    def setUp(self):
        self.params = ParamsFactory.tame()
        self.ends = end_states(self.params)

    def test_eigenvalue_signs(self):
        """✅ (+, -, -) at the burned end and (0, -, -) at the unburned end"""
        minus = end_linearization(MINUS, self.params, self.ends, 8.177)
        plus = end_linearization(PLUS, self.params, self.ends, 8.177)
        minus_real = np.sort(np.linalg.eigvals(minus.matrix[:3, :3]).real)
        plus_real = np.sort(np.linalg.eigvals(plus.matrix[:3, :3]).real)
        self.assertTrue(minus_real[0] < 0 and minus_real[1] < 0 and minus_real[2] > 0)
        self.assertTrue(plus_real[0] < 0 and plus_real[1] < 0 and abs(plus_real[2]) < 1e-12)

    def test_eigenvalues_match_dense_solver(self):
        """✅ Stored eigenvalues agree with a direct eigensolve"""
        lin = end_linearization(MINUS, self.params, self.ends, 8.177)
        direct = np.linalg.eigvals(lin.matrix)
        direct = direct[np.argsort(direct.real)]
        np.testing.assert_allclose(lin.eigenvalues, direct, atol=1e-10)

    def test_subspace_is_invariant(self):
        """✅ The hyperbolic columns span an invariant subspace"""
        for which in (MINUS, PLUS):
            lin = end_linearization(which, self.params, self.ends, 8.177)
            hyperbolic = lin.subspace[:, :-1]
            image = lin.matrix @ hyperbolic
            residual = image - hyperbolic @ (hyperbolic.T @ image)
            self.assertLess(np.linalg.norm(residual), 1e-10)

    def test_complement_is_orthonormal(self):
        """✅ Complement is orthonormal and orthogonal to the subspace"""
        lin = end_linearization(MINUS, self.params, self.ends, 8.177)
        np.testing.assert_allclose(lin.complement.T @ lin.complement, np.eye(2), atol=1e-12)
        np.testing.assert_allclose(lin.complement.T @ lin.subspace, 0.0, atol=1e-12)


class ProjectiveConditionTests(SimpleTestCase):
    """Test the projective boundary conditions"""

    def setUp(self):
        self.params = ParamsFactory.tame()
        self.ends = end_states(self.params)
        self.burned = np.array([self.ends.u_minus, 0.0, 0.0, 8.177])

    def test_zero_at_end_state(self):
        """✅ Residual vanishes at the end state"""
        np.testing.assert_array_equal(projective_conditions(self.burned, MINUS, self.params, self.ends), 0.0)

    def test_zero_along_subspace(self):
        """✅ Residual vanishes along the unstable direction"""
        lin = end_linearization(MINUS, self.params, self.ends, 8.177)
        shifted = self.burned + 1e-3 * lin.subspace[:, 0]
        self.assertLess(np.linalg.norm(projective_conditions(shifted, MINUS, self.params, self.ends)), 1e-12)

    def test_detects_complement(self):
        """✅ Residual equals the offset along the complement"""
        lin = end_linearization(MINUS, self.params, self.ends, 8.177)
        shifted = self.burned + 1e-3 * lin.complement[:, 0]
        residual = projective_conditions(shifted, MINUS, self.params, self.ends)
        self.assertAlmostEqual(float(np.linalg.norm(residual)), 1e-3, places=12)

    def test_condition_counts(self):
        """✅ Two conditions at the burned end, one at the unburned end"""
        unburned = np.array([0.0, 1.0, 0.0, 8.177])
        self.assertEqual(projective_conditions(self.burned, MINUS, self.params, self.ends).size, 2)
        self.assertEqual(projective_conditions(unburned, PLUS, self.params, self.ends).size, 1)


class DoubledProblemTests(SimpleTestCase):
    """Test the folded boundary value problem"""

    def setUp(self):
        self.params = ParamsFactory.tame()
        self.ends = end_states(self.params)
        self.system = TravelingWaveSystem(self.params, self.ends)

    def test_dimensions(self):
        """✅ Eight unknowns and eight boundary conditions"""
        problem = double(self.system, 20.0, 30.0, 0.5)
        self.assertEqual(problem.dimension, 8)
        ya = np.concatenate([[0.5, 0.5, 0.0, 8.0]] * 2)
        yb = np.concatenate([[0.0, 1.0, 0.0, 8.0], [self.ends.u_minus, 0.0, 0.0, 8.0]])
        self.assertEqual(problem.bc(ya, yb).size, 8)

    def test_conditions_at_exact_ends(self):
        """✅ Matching and projective conditions vanish on matched data at the end states"""
        phase = 0.5 * (self.ends.u_plus + self.ends.u_minus)
        problem = double(self.system, 20.0, 30.0, phase)
        ya = np.concatenate([[phase, 0.5, 0.1, 8.0]] * 2)
        yb = np.concatenate([[0.0, 1.0, 0.0, 8.0], [self.ends.u_minus, 0.0, 0.0, 8.0]])
        np.testing.assert_allclose(problem.bc(ya, yb), 0.0, atol=1e-14)

    def test_reflected_half_is_scaled(self):
        """✅ Reflected half runs the field backwards with the domain ratio"""
        problem = double(self.system, 20.0, 40.0, 0.5)
        Y = np.array([0.6, 0.4, 0.05, 8.0, 0.6, 0.4, 0.05, 8.0]).reshape(8, 1)
        out = problem.rhs(np.array([1.0]), Y)
        np.testing.assert_allclose(out[4:], -0.5 * out[:4])


class InitialGuessTests(SimpleTestCase):
    """Test the logistic initial guess"""

    def test_phase_and_limits(self):
        """✅ Midpoint at xi = 0 and end states at the boundaries"""
        params = ParamsFactory.tame()
        ends = end_states(params)
        mesh = initial_guess(params, ends, 20.0, 20.0, k_guess=1.0)
        midpoint = 0.5 * (ends.u_plus + ends.u_minus)
        self.assertAlmostEqual(float(evaluate(mesh, 0.0)[0]), midpoint, places=12)
        self.assertAlmostEqual(float(mesh.values[0, 0]), ends.u_minus, places=8)
        self.assertAlmostEqual(float(mesh.values[1, -1]), 1.0, places=8)
        np.testing.assert_array_equal(mesh.values[3], 1.0)


class ExplicitTailTests(SimpleTestCase):
    """Test the closed-form tail"""

    def test_beta_is_one(self):
        """✅ beta = 1 whenever u_plus = 0"""
        for q in (0.1, 0.25, 0.499):
            params = ParamsFactory.tame(q=q)
            self.assertAlmostEqual(tail_beta(params, end_states(params)), 1.0, places=12)

    def test_tail_limits_and_derivative(self):
        """✅ Tail tends to the unburned state and y = z'"""
        params = ParamsFactory.tame(D=2.0)
        tail = TailSolution(beta=1.0, C_u=-1.0, C_z=0.3, xi_ref=2.0)
        u, z, y = explicit_tail(np.array([200.0]), tail, params)
        self.assertAlmostEqual(float(u[0]), 0.0, places=12)
        self.assertAlmostEqual(float(z[0]), 1.0, places=12)
        self.assertAlmostEqual(float(y[0]), 0.0, places=12)
        xi = np.linspace(2.0, 10.0, 9)
        h = 1e-6
        _, z_plus, _ = explicit_tail(xi + h, tail, params)
        _, z_minus, _ = explicit_tail(xi - h, tail, params)
        _, _, y = explicit_tail(xi, tail, params)
        np.testing.assert_allclose((z_plus - z_minus) / (2 * h), y, atol=1e-8)

    def test_tail_solves_the_reaction_free_system(self):
        """✅ Tail satisfies the vector field where phi = 0"""
        params = ParamsFactory.tame()
        ends = end_states(params)
        tail = TailSolution(beta=tail_beta(params, ends), C_u=-2.0, C_z=0.05, xi_ref=0.0)
        xi = np.linspace(1.0, 6.0, 6)
        h = 1e-6
        u_p, _, _ = explicit_tail(xi + h, tail, params)
        u_m, _, _ = explicit_tail(xi - h, tail, params)
        u, z, y = explicit_tail(xi, tail, params)
        self.assertTrue(np.all(u < params.u_ig))
        field = np.array([vector_field([ui, zi, yi, 8.0], params, ends) for ui, zi, yi in zip(u, z, y)])
        np.testing.assert_allclose((u_p - u_m) / (2 * h), field[:, 0], atol=1e-7)


class TameProfileTests(SimpleTestCase):
    """Test the converged tame profile"""

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.profile = ProfileFactory.solved()

    def test_reaction_rate(self):
        """✅ k_found within 5% of 8.177"""
        self.assertAlmostEqual(self.profile.k_found, 8.177, delta=0.05 * 8.177)

    def test_k_is_constant(self):
        """✅ k row constant across the mesh"""
        k_row = self.profile.mesh.values[3]
        self.assertLess(np.ptp(k_row) / self.profile.k_found, 1e-10)

    def test_phase_condition(self):
        """✅ u(0) equals the phase value"""
        self.assertAlmostEqual(float(evaluate(self.profile.mesh, 0.0)[0]), self.profile.phase_value, delta=1e-6)

    def test_matching_jump(self):
        """✅ Both halves meet continuously at xi = 0"""
        self.assertLess(self.profile.matching_jump, 1e-10)

    def test_boundary_residuals(self):
        """✅ Boundary residuals below 1e-3"""
        self.assertLess(max(self.profile.boundary_residuals), 1e-3)

    def test_validation_passes(self):
        """✅ Monotone, below the burned state, decaying, tail fits"""
        diagnostics = validate_profile(self.profile)
        self.assertTrue(diagnostics.passed)
        self.assertTrue(diagnostics.monotone)
        self.assertTrue(all(s is None or s < 0 for s in diagnostics.decay_slopes))
        if diagnostics.tail_error is not None:
            self.assertLess(diagnostics.tail_error, 1e-4)

    def test_validation_rejects_bump(self):
        """❌ A bump in u fails the monotonicity check"""
        values = np.array(self.profile.mesh.values)
        middle = len(self.profile.mesh) // 2
        values[0, middle] += 0.05
        bumped = dataclasses.replace(
            self.profile,
            mesh=Mesh(nodes=self.profile.xi, values=values, derivatives=self.profile.mesh.derivatives),
        )
        with self.assertRaises(ValidationFailed) as ctx:
            validate_profile(bumped)
        self.assertEqual(ctx.exception.prop, "monotonicity")
        self.assertIn("monotonicity", validate_profile(bumped, raise_on_failure=False).failures)

    def test_continuation_to_self(self):
        """✅ Continuing to the profile's own parameters returns it unchanged"""
        self.assertIs(continue_family(self.profile, self.profile.params), self.profile)

    def test_defect_from_solution(self):
        """✅ The derivative of the stored (u, z, y) matches the vector field at every node"""
        values = np.array(self.profile.mesh.values)
        slope = CubicSpline(self.profile.xi, values[:3], axis=1).derivative()(self.profile.xi)
        field = np.column_stack([
            vector_field(values[:, i], self.profile.params, self.profile.end_states)[:3]
            for i in range(values.shape[1])
        ])
        defect = np.max(np.abs(slope - field))
        self.assertLess(defect, 1e-4 * max(1.0, float(np.max(np.abs(field)))))

    @tag("slow")
    def test_tighter_tolerance(self):
        """✅ A tenfold tighter collocation tolerance moves k by less than 0.1%"""
        options = ProfileOptions(solver=SolverSettings(residual_tolerance=1e-9))
        refined = solve_profile(self.profile.params, options=options)
        self.assertLess(abs(refined.k_found - self.profile.k_found) / self.profile.k_found, 1e-3)

    @tag("slow")
    def test_translation_gauge(self):
        """✅ Pinning u(0) to another value shifts the profile but leaves k unchanged"""
        for phase_value in (0.2, 0.4, 0.8):
            with self.subTest(phase_value=phase_value):
                shifted = solve_profile(self.profile.params, options=ProfileOptions(phase_value=phase_value))
                self.assertAlmostEqual(float(evaluate(shifted.mesh, 0.0)[0]), phase_value, delta=1e-6)
                self.assertLess(abs(shifted.k_found - self.profile.k_found) / self.profile.k_found, 1e-6)

    def test_phase_value_outside_states(self):
        """❌ A phase value outside (u_plus, u_minus) is rejected"""
        with self.assertRaises(ValueError):
            solve_profile(self.profile.params, options=ProfileOptions(phase_value=0.99))


class ContinuationTests(SimpleTestCase):
    """Test continuation to the extreme parameters"""

    def test_tame_anchor(self):
        """✅ Anchor keeps u_plus and u_ig and moves D, E_A to 1"""
        anchor = tame_anchor(ParamsFactory.tame(q=0.25, D=15.0, E_A=1e-3))
        self.assertEqual((anchor.q, anchor.D, anchor.E_A), (0.499, 1.0, 1.0))

    @tag("slow")
    def test_small_activation_energy(self):
        """✅ E_A = 1e-3 gives k within 5% of 0.236"""
        profile = solve_with_continuation(ParamsFactory.tame(E_A=1e-3))
        self.assertAlmostEqual(profile.k_found, 0.236, delta=0.05 * 0.236)

    @tag("slow")
    def test_quarter_heat_release(self):
        """✅ q = 0.25 gives k within 10% of 7913"""
        profile = solve_with_continuation(ParamsFactory.tame(q=0.25))
        self.assertAlmostEqual(profile.k_found, 7913.0, delta=0.1 * 7913.0)
        self.assertTrue(validate_profile(profile, raise_on_failure=False).monotone)

    @tag("slow")
    def test_large_activation_energy(self):
        """✅ E_A = 6 gives k within 10% of 21600"""
        profile = continue_family(ProfileFactory.solved(), ParamsFactory.tame(E_A=6.0))
        self.assertAlmostEqual(profile.k_found, 21600.0, delta=0.1 * 21600.0)
        self.assertTrue(math.isfinite(profile.k_found))
