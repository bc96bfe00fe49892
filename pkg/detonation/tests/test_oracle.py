"""
Finite-Difference Oracle Tests
Tests for the discretized linear operator and its agreement with the Evans verdicts
"""
import numpy as np
from django.test import SimpleTestCase, tag
from scipy.linalg import eigvals

from detonation.engine.oracle import fd_operator, fd_oracle, fd_oracle_near, oracle_agrees

from .test_utils import ParamsFactory, ProfileFactory


class OperatorTests(SimpleTestCase):
    """Test the sparse operator on frozen coefficients"""

    def test_pure_diffusion_spectrum(self):
        """✅ k = 0, q = 0: spectrum real and nonpositive"""
        xi = np.linspace(-5.0, 5.0, 201)
        params = ParamsFactory.tame(q=0.0, D=2.0)
        operator = fd_operator(xi, np.zeros_like(xi), np.ones_like(xi), np.zeros_like(xi), params, 0.0)
        self.assertEqual(operator.shape, (2 * 199, 2 * 199))
        spectrum = eigvals(operator.toarray())
        self.assertLess(np.max(np.abs(spectrum.imag)), 1e-8)
        self.assertLessEqual(np.max(spectrum.real), 0.0)

    def test_decoupled_without_reaction(self):
        """✅ Off-diagonal blocks vanish below ignition"""
        xi = np.linspace(0.0, 1.0, 12)
        operator = fd_operator(xi, np.full(12, 0.05), np.ones(12), np.zeros(12), ParamsFactory.tame(), 8.0)
        dense = operator.toarray()
        self.assertEqual(np.count_nonzero(dense[:10, 10:]), 0)
        self.assertEqual(np.count_nonzero(dense[10:, :10]), 0)

    def test_agreement_rule(self):
        """✅ Exactly one eigenvalue near the origin and none to the right"""
        self.assertTrue(oracle_agrees([1e-5, -0.5 + 1j, -0.5 - 1j, -3.0]))
        self.assertFalse(oracle_agrees([1e-5, 0.2, -3.0]))
        self.assertFalse(oracle_agrees([1e-5, -2e-4, -3.0]))
        self.assertFalse(oracle_agrees([-0.5, -3.0]))


@tag("slow")
class TameOracleTests(SimpleTestCase):
    """Test the oracle on converged profiles"""

    def test_tame_profile(self):
        """✅ Tame spectrum agrees with the Stable verdict"""
        spectrum = fd_oracle(ProfileFactory.solved(), 2001)
        self.assertTrue(oracle_agrees(spectrum))
        self.assertEqual(spectrum.size, 2 * 1999)

    def test_desk_profiles(self):
        """✅ Oracle agreement on neighbouring desk points"""
        for q, D, E_A in ((0.408, 1.0, 1.0), (0.499, 0.14, 1.0), (0.499, 15.0, 1.0), (0.499, 1.0, 1e-3)):
            with self.subTest(q=q, D=D, E_A=E_A):
                self.assertTrue(oracle_agrees(fd_oracle(ProfileFactory.solved(q=q, D=D, E_A=E_A), 2001)))

    def test_second_order_convergence(self):
        """✅ The eigenvalue nearest the origin converges like h^2"""
        profile = ProfileFactory.solved()
        nearest = [fd_oracle_near(profile, n, count=4)[0] for n in (1001, 2001, 4001)]
        first, second = abs(nearest[0] - nearest[1]), abs(nearest[1] - nearest[2])
        self.assertGreater(first / second, 2.5)
