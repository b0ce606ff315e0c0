import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import gammainc

from subcalc.bernstein import LevyMeasure, identity_levy, make_catalog
from subcalc.errors import AtomLimitUndefined, NonIntegrableTail, ToleranceNotMet
from subcalc.quadrature import (
    QuadratureSpec,
    cdf_levy_integral,
    levy_integral,
    verify_representation,
)


def exp_ratio(s):
    # g(u) = (e^{su} - 1)/u with its limit s at u = 0
    def g(u):
        u = np.asarray(u, float)
        safe = np.where(u > 0, u, 1.0)
        return np.where(u > 0, np.expm1(s * u) / safe, s)
    return g


@pytest.fixture(scope="module")
def log1():
    return make_catalog("log", 1)


class GammaCdf:
    """Stand-in measure exposing just what cdf_levy_integral needs."""

    total_mass = 1.0

    def __init__(self, t):
        self.t = t

    def cdf(self, u):
        return gammainc(self.t, np.asarray(u, dtype=float))


# ------------------------------------------------------------ levy_integral

def test_frullani_oracle(log1):
    # int (e^{-u}-1)u^{-1} e^{-u} du = -log 2, independent of everything
    # downstream: classic Frullani value for (e^{-u}-e^{-2u})/u
    v = levy_integral(exp_ratio(-1.0), log1.levy, g0=-1.0, ug_limit=-1.0)
    assert v == pytest.approx(-np.log(2), abs=1e-12)


def test_zero_integrand(log1):
    zero = lambda u: np.zeros_like(np.asarray(u, float))
    assert levy_integral(zero, log1.levy, g0=0.0) == 0.0


def test_atom_convention():
    zero = lambda u: np.zeros_like(np.asarray(u, float))
    assert levy_integral(zero, identity_levy(), g0=-1.0) == -1.0


def test_vector_valued_integrand():
    # diagonal semigroup entries in one pass; limits are the eigenvalues
    frac = make_catalog("frac", 0.5, 0)
    lam = np.array([-1.0, -4.0])

    def g(u):
        u = np.asarray(u, float)[:, None]
        safe = np.where(u > 0, u, 1.0)
        return np.where(u > 0, np.expm1(lam[None, :] * u) / safe, lam[None, :])

    v = levy_integral(g, frac.levy, g0=lam, ug_limit=np.array([-1.0, -1.0]))
    assert np.allclose(v, [-1.0, -2.0], atol=1e-8)


def test_full_output_error_bound(log1):
    v, err = levy_integral(exp_ratio(-1.0), log1.levy, g0=-1.0,
                           ug_limit=-1.0, full_output=True)
    assert abs(v + np.log(2)) <= max(err, 1e-12)


def test_refinement_stability(log1):
    # halving the tolerance must not move the value by more than the
    # previous tolerance
    loose = QuadratureSpec(tol_abs=1e-6, tol_rel=1e-6)
    tight = QuadratureSpec(tol_abs=5e-7, tol_rel=5e-7)
    a = levy_integral(exp_ratio(-2.0), log1.levy, loose, g0=-2.0, ug_limit=-1.0)
    b = levy_integral(exp_ratio(-2.0), log1.levy, tight, g0=-2.0, ug_limit=-1.0)
    assert abs(a - b) <= 1e-6


@settings(max_examples=20, deadline=None)
@given(s1=st.floats(-8.0, -0.1), s2=st.floats(-8.0, -0.1))
def test_linearity(s1, s2):
    rho = make_catalog("log", 1).levy

    def gsum(u):
        return exp_ratio(s1)(u) + exp_ratio(s2)(u)

    i12 = levy_integral(gsum, rho, g0=s1 + s2, ug_limit=-2.0)
    i1 = levy_integral(exp_ratio(s1), rho, g0=s1, ug_limit=-1.0)
    i2 = levy_integral(exp_ratio(s2), rho, g0=s2, ug_limit=-1.0)
    assert abs(i12 - (i1 + i2)) <= 2e-8


def test_budget_exhaustion_raises(log1):
    starved = QuadratureSpec(max_refinements=10, tol_abs=1e-12, tol_rel=1e-12)
    wiggle = lambda u: np.cos(5e4 * np.asarray(u, float))
    with pytest.raises(ToleranceNotMet):
        levy_integral(wiggle, log1.levy, starved, g0=1.0)


def test_growing_tail_raises():
    # u * frac density ~ u^{1-alpha} is not integrable; no ug_limit, so
    # the doubling certificate must catch it
    frac = make_catalog("frac", 0.5, 0)
    grow = lambda u: np.asarray(u, float)
    with pytest.raises((NonIntegrableTail, ToleranceNotMet)):
        levy_integral(grow, frac.levy, g0=0.0)


def test_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(epsilon=2.0)
    with pytest.raises(ValueError):
        QuadratureSpec(tol_abs=0.0)


# --------------------------------------------------- verify_representation

@pytest.mark.parametrize("kind,args", [
    ("log", (1,)), ("acosh", (1,)), ("frac", (0.5, 0)), ("frac", (0.3, 1)),
])
def test_representation_fidelity(kind, args):
    psi = make_catalog(kind, *args)
    s_grid = -np.geomspace(0.01, 10, 20)
    assert verify_representation(psi, s_grid) <= 1e-6


def test_representation_fidelity_mixed():
    # no closed form exists for the second summand's measure; this is
    # the only validation it gets, so keep the tolerance at the same bar
    psi = make_catalog("mixed", 0.3, 0.6)
    assert verify_representation(psi, -np.geomspace(0.05, 5, 6)) <= 1e-6


def test_representation_needs_closed_form():
    ident = make_catalog("custom", identity_levy())
    with pytest.raises(ValueError):
        verify_representation(ident, [-1.0])


# ------------------------------------------------------- cdf_levy_integral

def test_cdf_integral_frullani(log1):
    # int (1 - e^{-u}) u^{-1} e^{-u} du = log 2
    v = cdf_levy_integral(GammaCdf(1.0), log1.levy)
    assert v == pytest.approx(np.log(2), abs=1e-9)


def test_cdf_integral_bound(log1):
    v = cdf_levy_integral(GammaCdf(0.5), log1.levy)
    assert v <= 2.0


@pytest.mark.parametrize("t", [0.05, 0.1, 0.2, 0.5, 0.9])
def test_cdf_integral_inverse_time_bound(log1, t):
    # the exact chain for this catalog member gives t * integral <= 1
    v = cdf_levy_integral(GammaCdf(t), log1.levy)
    assert t * v <= 1.0 + 2e-9


def test_atom_with_vanishing_density():
    # nu with density r e^{-r}: density at 0+ is 0, atom contributes 0
    class Shape2:
        total_mass = 1.0

        def cdf(self, u):
            u = np.asarray(u, dtype=float)
            return -np.expm1(-u) - u * np.exp(-u)

    plain = LevyMeasure(density=lambda u: np.exp(-np.asarray(u, float)))
    atomic = LevyMeasure(density=lambda u: np.exp(-np.asarray(u, float)),
                         atom_at_zero=1.0)
    a = cdf_levy_integral(Shape2(), plain)
    b = cdf_levy_integral(Shape2(), atomic)
    assert b == pytest.approx(a, abs=1e-10)


def test_atom_limit_undefined(log1):
    atomic = LevyMeasure(density=lambda u: np.exp(-np.asarray(u, float)),
                         atom_at_zero=1.0)
    with pytest.raises(AtomLimitUndefined):
        cdf_levy_integral(GammaCdf(0.5), atomic)
