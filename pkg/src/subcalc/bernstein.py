r"""Negative Bernstein functions and their Levy measures.

Every function psi handled here is determined by a nonnegative measure
rho on (0, infty) plus an optional mass a0 at the origin:

    psi(z) = a0 z + int_{(0,infty)} (e^{z u} - 1) u^{-1} drho(u),

normalized so psi(0) = 0.  psi is analytic on the open left half-plane
and continuous up to the imaginary axis; its derivative is absolutely
monotonic on the negative reals.  The atom encodes the linear term
because (e^{zu} - 1)/u -> z as u -> 0.

Catalog (CLI spec string on the left):

    frac(alpha,c)       psi(z) = c^alpha - (c - z)^alpha
    log(b)              psi(z) = log b - log(b - z)
    acosh(b)            psi(z) = acosh b - acosh(b - z), b >= 1
    mixed(alpha,beta)   psi(z) = -(-z)^alpha + (e^{-(-z)^beta} - 1)
    custom              user-supplied LevyMeasure, quadrature evaluator

All evaluators are vectorized over numpy arrays and use principal
branches, so they are continuous on the closed half-plane minus the
branch point at 0 (frac/mixed) or nowhere (log/acosh with b >= 1).
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.integrate import quad
from scipy.special import gamma, ive, exp1

from .errors import ParameterOutOfRange, DomainError, NonDifferentiable, NonIntegrableTail
from .stable import stable_density, stable_survival

__all__ = [
    "LevyMeasure", "BernsteinFunction", "TruncatedSector",
    "make_catalog", "identity_levy",
    "eval_psi", "eval_psi_derivative", "levy_density",
]

_TAIL_CAP = 2.0 ** 16


def _tail_certificate(density, start):
    """int_[start, cap] u^{-1} density du by doubling, as a convergence probe.

    Returns the accumulated value; raises NonIntegrableTail when the
    per-doubling increments have not died out by the cap.
    """
    total = 0.0
    lo = start
    while lo < _TAIL_CAP:
        hi = min(2.0 * lo, _TAIL_CAP)
        inc, _ = quad(lambda u: density(np.asarray([u]))[0] / u, lo, hi, limit=100)
        total += inc
        if inc < 1e-10 * (1.0 + abs(total)) and hi < _TAIL_CAP:
            return total
        lo = hi
    # reached the cap: only acceptable if the last increment was tiny
    if inc > 1e-10 * (1.0 + abs(total)):
        raise NonIntegrableTail(
            f"u^-1-weighted tail not summable by u={_TAIL_CAP:.0f} "
            f"(last doubling added {inc:.3e})")
    return total


@dataclass(frozen=True)
class LevyMeasure:
    """Absolutely continuous measure on (0, infty) plus an atom at 0.

    Parameters
    ----------
    density : callable
        Vectorized map u -> drho/du, finite and nonnegative on (0, inf).
    atom_at_zero : float
        Mass a0 >= 0 at the origin; contributes the linear term a0*z.
    tail_uinv : callable, optional
        Analytic model for U -> int_U^inf u^{-1} drho(u).  When given,
        integrability is certified through it instead of the doubling
        probe, which lets polynomially decaying tails (stable parts)
        through without a 2^16 cutoff ever being enough.
    mass_01, uinv_1inf : float
        Certificates int_(0,1] drho and int_[1,inf) u^{-1} drho,
        computed at construction; both must be finite.
    """

    density: Callable[[np.ndarray], np.ndarray]
    atom_at_zero: float = 0.0
    tail_uinv: Optional[Callable[[float], float]] = None
    mass_01: float = field(init=False, default=0.0)
    uinv_1inf: float = field(init=False, default=0.0)

    def __post_init__(self):
        if self.atom_at_zero < 0:
            raise ParameterOutOfRange("atom mass must be >= 0")
        probe = np.geomspace(1e-7, 1e3, 41)
        vals = self.density(probe)
        if np.any(vals < 0) or not np.all(np.isfinite(vals)):
            raise ParameterOutOfRange("density must be finite and >= 0")
        # int_(0,1] drho: u = v^4 flattens an integrable u^{-a} endpoint
        m01, _ = quad(lambda v: self.density(np.asarray([v ** 4]))[0] * 4 * v ** 3,
                      0.0, 1.0, limit=200)
        if not np.isfinite(m01) or m01 > 1e12:
            raise ValueError("int_(0,1] drho diverges; not an admissible measure")
        if self.tail_uinv is not None:
            body, _ = quad(lambda u: self.density(np.asarray([u]))[0] / u,
                           1.0, 64.0, limit=200)
            t1 = body + self.tail_uinv(64.0)
        else:
            t1 = _tail_certificate(self.density, 1.0)
        object.__setattr__(self, "mass_01", m01)
        object.__setattr__(self, "uinv_1inf", t1)


def identity_levy():
    """The measure of psi(z) = z: unit atom at 0, no continuous part."""
    return LevyMeasure(density=lambda u: np.zeros_like(np.asarray(u, dtype=float)),
                       atom_at_zero=1.0)


@dataclass(frozen=True)
class BernsteinFunction:
    """A catalog member or custom function, with closed forms attached.

    psi / dpsi are vectorized callables on the closed left half-plane
    (dpsi may be None for custom measures; derivative requests then go
    through Richardson-extrapolated central differences).  label is the
    CLI spec string, reused for trace file names.
    """

    kind: str
    params: tuple
    levy: LevyMeasure
    psi: Optional[Callable] = None
    dpsi: Optional[Callable] = None
    label: str = ""

    def __call__(self, z):
        return eval_psi(self, z)


@dataclass(frozen=True)
class TruncatedSector:
    r"""Sector beta + {|arg(-z)| < theta} intersected with {Re z < 0}."""

    theta: float
    beta: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.theta < np.pi / 2:
            raise ParameterOutOfRange("theta must lie in (0, pi/2)")
        if self.beta < 0:
            raise ParameterOutOfRange("beta must be >= 0")

    def contains(self, z):
        z = np.asarray(z, dtype=complex)
        w = -(z - self.beta)
        return (z.real < 0) & (np.abs(np.angle(w)) < self.theta)


def _fmt(x):
    xf = float(x)
    return str(int(xf)) if xf == int(xf) else repr(xf)


def _frac_levy(alpha, c):
    pref = alpha / gamma(1.0 - alpha)

    def density(u):
        u = np.asarray(u, dtype=float)
        return pref * u ** (-alpha) * np.exp(-c * u)

    if c == 0.0:
        def tail(U):
            # int_U^inf alpha u^{-alpha-1}/Gamma(1-alpha) du
            return U ** (-alpha) / gamma(1.0 - alpha)
    else:
        tail = None  # exponential decay, doubling probe converges fast
    return LevyMeasure(density=density, tail_uinv=tail)


def _log_levy(b):
    def density(u):
        return np.exp(-b * np.asarray(u, dtype=float))

    def tail(U):
        # int_U^inf u^{-1} e^{-bu} du = E1(bU)
        return float(exp1(b * U))

    return LevyMeasure(density=density, tail_uinv=tail)


def _acosh_levy(b):
    def density(u):
        u = np.asarray(u, dtype=float)
        # e^{-bu} I0(u) = ive(0,u) e^{(1-b)u}, overflow-safe for b >= 1
        return ive(0, u) * np.exp((1.0 - b) * u)

    if b == 1.0:
        def tail(U):
            # ive(0,u) ~ (2 pi u)^{-1/2} (1 + 1/(8u) + 9/(128 u^2) + ...)
            # integrated against u^{-1} term by term
            return (2.0 * U ** -0.5 + (1.0 / 8.0) * (2.0 / 3.0) * U ** -1.5
                    + (9.0 / 128.0) * (2.0 / 5.0) * U ** -2.5) / np.sqrt(2.0 * np.pi)
    else:
        tail = None
    return LevyMeasure(density=density, tail_uinv=tail)


def _mixed_levy(alpha, beta):
    pref = alpha / gamma(1.0 - alpha)

    def density(u):
        u = np.asarray(u, dtype=float)
        stab = np.array([ui * stable_density(ui, beta) for ui in u.ravel()])
        return pref * u ** (-alpha) + stab.reshape(u.shape)

    def tail(U):
        return U ** (-alpha) / gamma(1.0 - alpha) + stable_survival(U, beta)

    return LevyMeasure(density=density, tail_uinv=tail)


def make_catalog(kind, *params):
    """Build a catalog BernsteinFunction.

    kind is one of "frac", "log", "acosh", "mixed", "custom"; params are
    the corresponding real parameters, except "custom" which takes a
    single LevyMeasure.  Raises ParameterOutOfRange outside the stated
    domains (alpha in (0,1), c >= 0, b > 0 resp. b >= 1,
    0 < alpha < beta < 1).
    """
    if kind == "frac":
        alpha, c = float(params[0]), float(params[1])
        if not 0.0 < alpha < 1.0:
            raise ParameterOutOfRange(f"frac: alpha must be in (0,1), got {alpha}")
        if c < 0.0:
            raise ParameterOutOfRange(f"frac: c must be >= 0, got {c}")
        return BernsteinFunction(
            kind=kind, params=(alpha, c), levy=_frac_levy(alpha, c),
            psi=lambda z: c ** alpha - (c - np.asarray(z, dtype=complex)) ** alpha,
            dpsi=lambda z: alpha * (c - np.asarray(z, dtype=complex)) ** (alpha - 1.0),
            label=f"frac({_fmt(alpha)},{_fmt(c)})")
    if kind == "log":
        b = float(params[0])
        if b <= 0.0:
            raise ParameterOutOfRange(f"log: b must be > 0, got {b}")
        return BernsteinFunction(
            kind=kind, params=(b,), levy=_log_levy(b),
            psi=lambda z: np.log(b) - np.log(b - np.asarray(z, dtype=complex)),
            dpsi=lambda z: 1.0 / (b - np.asarray(z, dtype=complex)),
            label=f"log({_fmt(b)})")
    if kind == "acosh":
        b = float(params[0])
        if b < 1.0:
            raise ParameterOutOfRange(f"acosh: b must be >= 1, got {b}")
        return BernsteinFunction(
            kind=kind, params=(b,), levy=_acosh_levy(b),
            psi=lambda z: np.arccosh(complex(b)) - np.arccosh(b - np.asarray(z, dtype=complex)),
            dpsi=lambda z: 1.0 / np.sqrt((b - np.asarray(z, dtype=complex)) ** 2 - 1.0),
            label=f"acosh({_fmt(b)})")
    if kind == "mixed":
        alpha, beta = float(params[0]), float(params[1])
        if not 0.0 < alpha < beta < 1.0:
            raise ParameterOutOfRange(
                f"mixed: need 0 < alpha < beta < 1, got ({alpha},{beta})")

        def psi(z):
            mz = -np.asarray(z, dtype=complex)
            return -(mz ** alpha) + np.expm1(-(mz ** beta))

        def dpsi(z):
            mz = -np.asarray(z, dtype=complex)
            return (alpha * mz ** (alpha - 1.0)
                    + beta * mz ** (beta - 1.0) * np.exp(-(mz ** beta)))

        return BernsteinFunction(
            kind=kind, params=(alpha, beta), levy=_mixed_levy(alpha, beta),
            psi=psi, dpsi=dpsi, label=f"mixed({_fmt(alpha)},{_fmt(beta)})")
    if kind == "custom":
        levy = params[0]
        if not isinstance(levy, LevyMeasure):
            raise ParameterOutOfRange("custom: expected a LevyMeasure")
        return BernsteinFunction(kind=kind, params=(), levy=levy,
                                 psi=None, dpsi=None, label="custom")
    raise ParameterOutOfRange(f"unknown catalog kind {kind!r}")


def _check_halfplane(z):
    z = np.asarray(z, dtype=complex)
    if np.any(z.real > 1e-12):
        raise DomainError("psi is only defined for Re z <= 0")
    return z


def eval_psi(psi: BernsteinFunction, z):
    """psi(z) on the closed left half-plane (closed form or quadrature)."""
    z = _check_halfplane(z)
    if psi.psi is not None:
        return psi.psi(z)
    from .quadrature import levy_integral, QuadratureSpec  # custom route
    spec = QuadratureSpec()
    flat = z.ravel()
    out = np.empty(flat.shape, dtype=complex)
    for i, zi in enumerate(flat):
        def g(u, zi=zi):
            u = np.asarray(u, dtype=float)
            return np.where(u > 0, np.expm1(zi * u) / np.where(u > 0, u, 1.0), zi)
        out[i] = levy_integral(g, psi.levy, spec, g0=zi)
    return out.reshape(z.shape) if z.shape else out[0]


def eval_psi_derivative(psi: BernsteinFunction, y):
    """psi'(i y) for real y: the complex derivative evaluated on the axis."""
    if psi.dpsi is not None:
        return psi.dpsi(1j * np.asarray(y, dtype=float))
    # custom measure: psi'(iy) = -i d/dy psi(iy), central differences with
    # Richardson extrapolation; step scales with |y|
    y = float(y)
    h = 0.05 * max(abs(y), 1.0)
    prev = None
    for _ in range(8):
        d1 = (eval_psi(psi, 1j * (y + h)) - eval_psi(psi, 1j * (y - h))) / (2.0 * h)
        d2 = (eval_psi(psi, 1j * (y + h / 2)) - eval_psi(psi, 1j * (y - h / 2))) / h
        rich = (4.0 * d2 - d1) / 3.0
        if prev is not None and abs(rich - prev) <= 1e-6 * (1.0 + abs(rich)):
            return -1j * rich
        prev = rich
        h /= 4.0
    raise NonDifferentiable(f"difference quotients did not settle at y={y}")


def levy_density(psi: BernsteinFunction, u):
    """drho/du of psi's Levy measure at u > 0."""
    u = np.asarray(u, dtype=float)
    if np.any(u <= 0):
        raise DomainError("Levy density lives on (0, infty)")
    return psi.levy.density(u)
