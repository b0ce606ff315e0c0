r"""One-sided stable laws via Zolotarev's integral representation.

For alpha in (0,1) the positive stable law with Laplace transform
exp(-lambda^alpha) has the density

    f(x) = alpha/(1-alpha) * x^{-1/(1-alpha)} * (1/pi)
           * int_0^pi A(th) * exp(-x^{-alpha/(1-alpha)} A(th)) dth,

    A(th) = [sin(alpha th)]^{alpha/(1-alpha)} * sin((1-alpha) th)
            / [sin th]^{1/(1-alpha)},

and integrating the same kernel without the density prefactor gives the
distribution function,

    F(x)     = (1/pi) int_0^pi exp(-x^{-alpha/(1-alpha)} A(th)) dth,
    1 - F(x) = (1/pi) int_0^pi (1 - exp(...)) dth.

A is strictly increasing on (0, pi), from A(0+) = alpha^{alpha/(1-alpha)}
* (1-alpha) up to +infinity, so each integrand is a single bump whose
location we pin down by bisection on A before handing the interval to
quad.  That keeps the quadrature honest for very small and very large x,
where the bump collapses against one endpoint.

The time-t law (Laplace transform exp(-t lambda^alpha)) is the rescaling
f_t(x) = t^{-1/alpha} f(x t^{-1/alpha}); all entry points take t.

At alpha = 1/2 everything collapses to the Levy distribution,
f_t(x) = t/(2 sqrt(pi)) x^{-3/2} exp(-t^2/(4x)) and
F_t(x) = erfc(t/(2 sqrt(x))), which the tests use as the exact oracle.
"""

import numpy as np
from scipy.integrate import quad

__all__ = ["stable_density", "stable_cdf", "stable_survival"]

# exp(-w) underflows to 0 below this; integrands are exact zeros there
_EXP_FLOOR = 745.0
# integrand tail is cut where the exponent has grown by this much
_CUT = 45.0


def _log_A(theta, alpha):
    a1 = alpha / (1.0 - alpha)
    return (a1 * np.log(np.sin(alpha * theta))
            + np.log(np.sin((1.0 - alpha) * theta))
            - (1.0 + a1) * np.log(np.sin(theta)))


def _A0(alpha):
    """Limit of A at theta = 0+."""
    return alpha ** (alpha / (1.0 - alpha)) * (1.0 - alpha)


def _theta_for_A(target, alpha):
    """Solve A(theta) = target on (0, pi) by bisection; A is increasing.

    Returns pi if the target exceeds A everywhere we can represent.
    """
    lo, hi = 1e-12, np.pi - 1e-14
    lt = np.log(target)
    if _log_A(hi, alpha) <= lt:
        return np.pi
    if _log_A(lo, alpha) >= lt:
        return lo
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _log_A(mid, alpha) < lt:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-15:
            break
    return 0.5 * (lo + hi)


def _check_alpha(alpha):
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0,1), got {alpha}")


def stable_density(x, alpha, t=1.0):
    """Density of the one-sided alpha-stable law at time t, at scalar x."""
    _check_alpha(alpha)
    if x <= 0.0:
        return 0.0
    scale = t ** (-1.0 / alpha)
    xs = x * scale
    a1 = alpha / (1.0 - alpha)
    xi = xs ** (-a1)
    a0 = _A0(alpha)
    if xi * a0 > _EXP_FLOOR:
        return 0.0

    def integrand(th):
        la = _log_A(th, alpha)
        w = la - xi * np.exp(la)
        return np.exp(w) if w > -_EXP_FLOOR else 0.0

    # bump peaks where A = 1/xi, or at theta=0 if A never gets that small
    a_peak = max(a0, 1.0 / xi)
    th_hi = _theta_for_A(a_peak + _CUT / xi, alpha)
    pts = None
    if 1.0 / xi > a0:
        th_star = _theta_for_A(1.0 / xi, alpha)
        if 0.0 < th_star < th_hi:
            pts = [th_star]
    val, _ = quad(integrand, 0.0, th_hi, points=pts, limit=200,
                  epsabs=1e-300, epsrel=1e-11)
    return scale * a1 / xs ** (1.0 + a1) * val / np.pi


def stable_cdf(x, alpha, t=1.0):
    """P(X_t < x) for the one-sided alpha-stable subordinator."""
    _check_alpha(alpha)
    if x <= 0.0:
        return 0.0
    xs = x * t ** (-1.0 / alpha)
    a1 = alpha / (1.0 - alpha)
    xi = xs ** (-a1)
    a0 = _A0(alpha)
    if xi * a0 > _EXP_FLOOR:
        return 0.0

    def integrand(th):
        w = xi * np.exp(_log_A(th, alpha))
        return np.exp(-w) if w < _EXP_FLOOR else 0.0

    # integrand decreases from exp(-xi A0); cut where it has died off
    th_hi = _theta_for_A(a0 + _CUT / xi, alpha)
    val, _ = quad(integrand, 0.0, th_hi, limit=200,
                  epsabs=1e-300, epsrel=1e-12)
    return val / np.pi


def stable_survival(x, alpha, t=1.0):
    """P(X_t >= x), computed without cancellation for large x.

    Needed at relative accuracy in the far tail, where 1 - cdf would
    lose every digit; the tail behaves like t x^{-alpha}/Gamma(1-alpha).
    """
    _check_alpha(alpha)
    if x <= 0.0:
        return 1.0
    xs = x * t ** (-1.0 / alpha)
    a1 = alpha / (1.0 - alpha)
    xi = xs ** (-a1)
    a0 = _A0(alpha)
    if xi * a0 > _EXP_FLOOR:
        return 1.0

    def integrand(th):
        w = xi * np.exp(_log_A(th, alpha))
        return -np.expm1(-w) if w < _EXP_FLOOR else 1.0

    pts = None
    if xi * a0 < 1.0:
        th_star = _theta_for_A(1.0 / xi, alpha)
        if 0.0 < th_star < np.pi:
            pts = [th_star]
    val, _ = quad(integrand, 0.0, np.pi, points=pts, limit=200,
                  epsabs=1e-300, epsrel=1e-12)
    return val / np.pi
