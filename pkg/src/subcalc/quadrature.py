r"""Singularity-aware quadrature against Levy measures.

The measures rho handled here satisfy int_(0,1] drho < inf and
int_[1,inf) u^{-1} drho < inf, but usually have infinite total mass and
a non-smooth density at 0, so the layout matters more than the panel
rule:

  (0, eps]   first-order: g is replaced by its supplied limit g(0+),
             the committed error |g(eps) - g(0+)| * rho((0,eps]) goes
             into the error budget;
  [eps, U]   adaptive Gauss-Kronrod 7/15 panels on a mesh graded
             geometrically toward eps;
  [U, inf)   either the caller's limit model (u g(u) -> c_inf, paired
             with the measure's analytic int_U^inf u^{-1} drho) or
             panel doubling with a geometric-decay certificate.

The atom of rho at 0 contributes atom * g(0+) exactly.

Integrands are vectorized callables; values may be scalars, complex
numbers, or matrices (error control is max over entries), which is what
lets the operator module reuse these panels unchanged.
"""

import heapq
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import AtomLimitUndefined, NonIntegrableTail, ToleranceNotMet

__all__ = ["QuadratureSpec", "levy_integral", "verify_representation",
           "cdf_levy_integral"]

# Gauss-Kronrod 7/15: node, Gauss weight, Kronrod weight
_GK15 = np.array([
    (+0.949107912342759, 0.129484966168870, 0.063092092629979),
    (-0.949107912342759, 0.129484966168870, 0.063092092629979),
    (+0.741531185599394, 0.279705391489277, 0.140653259715525),
    (-0.741531185599394, 0.279705391489277, 0.140653259715525),
    (+0.405845151377397, 0.381830050505119, 0.190350578064785),
    (-0.405845151377397, 0.381830050505119, 0.190350578064785),
    (0.000000000000000, 0.417959183673469, 0.209482141084728),
    (+0.991455371120813, 0.000000000000000, 0.022935322010529),
    (-0.991455371120813, 0.000000000000000, 0.022935322010529),
    (+0.864864423359769, 0.000000000000000, 0.104790010322250),
    (-0.864864423359769, 0.000000000000000, 0.104790010322250),
    (+0.586087235467691, 0.000000000000000, 0.169004726639267),
    (-0.586087235467691, 0.000000000000000, 0.169004726639267),
    (+0.207784955007898, 0.000000000000000, 0.204432940075298),
    (-0.207784955007898, 0.000000000000000, 0.204432940075298),
])
_NODES = _GK15[:, 0]
_WG = _GK15[:, 1]
_WK = _GK15[:, 2]


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and layout constants, exposed as the quad.* config keys."""

    epsilon: float = 1e-8
    tail_cap: float = 2.0 ** 16
    tol_abs: float = 1e-10
    tol_rel: float = 1e-9
    max_refinements: int = 800

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0 < self.tail_cap:
            raise ValueError("need 0 < epsilon < 1 < tail_cap")
        if self.tol_abs <= 0 or self.tol_rel <= 0:
            raise ValueError("tolerances must be positive")


def _magnitude(v):
    return float(np.max(np.abs(v)))


def _panel(f, a, b):
    """One GK 7/15 panel; returns (K15 value, error estimate)."""
    half = 0.5 * (b - a)
    x = a + half * (_NODES + 1.0)
    vals = np.asarray(f(x))
    g7 = np.tensordot(_WG, vals, axes=(0, 0)) * half
    k15 = np.tensordot(_WK, vals, axes=(0, 0)) * half
    err = (200.0 * _magnitude(g7 - k15)) ** 1.5 * half
    return k15, err


def _adaptive(f, mesh, tol_abs, tol_rel, budget):
    """Refine the worst panel of the mesh until the error budget holds.

    Splits are geometric when a panel spans more than a factor 4, which
    keeps the graded structure near singular endpoints. Returns
    (value, error, refinements_left); raises ToleranceNotMet on budget
    exhaustion.
    """
    panels = []
    total = None
    for a, b in zip(mesh[:-1], mesh[1:]):
        val, err = _panel(f, a, b)
        total = val if total is None else total + val
        heapq.heappush(panels, (-err, a, b, id(val), val))
    err_sum = sum(-p[0] for p in panels)
    while budget > 0:
        if err_sum <= max(tol_abs, tol_rel * _magnitude(total)):
            break
        neg_err, a, b, _, val = heapq.heappop(panels)
        mid = np.sqrt(a * b) if (a > 0 and b / a > 4.0) else 0.5 * (a + b)
        v1, e1 = _panel(f, a, mid)
        v2, e2 = _panel(f, mid, b)
        total = total - val + v1 + v2
        err_sum += e1 + e2 - (-neg_err)
        heapq.heappush(panels, (-e1, a, mid, id(v1), v1))
        heapq.heappush(panels, (-e2, mid, b, id(v2), v2))
        budget -= 1
    else:
        if err_sum > max(tol_abs, tol_rel * _magnitude(total)):
            raise ToleranceNotMet(
                f"refinement budget exhausted with error {err_sum:.3e}")
    return total, err_sum, budget


def _graded_mesh(eps, U):
    """Geometric toward eps, coarser geometric up to U."""
    mesh = [eps]
    x = eps
    while x < 1.0:
        x = min(x * 10.0, 1.0)
        mesh.append(x)
    while x < U:
        x = min(x * 4.0, U)
        mesh.append(x)
    return mesh


def _head_mass(rho, eps):
    # int_(0,eps] drho via u = v^4; tames integrable power singularities
    val, _ = quad(lambda v: rho.density(np.asarray([v ** 4]))[0] * 4 * v ** 3,
                  0.0, eps ** 0.25, limit=100)
    return val


def levy_integral(g, rho, spec=None, *, g0, ug_limit=None, full_output=False):
    """atom * g(0+) + int_(0,inf) g(u) drho_ac(u).

    g must be vectorized over u and bounded near 0 with limit g0
    (scalar, complex, or matrix shaped like g's values).  ug_limit, when
    given, is lim_{u->inf} u g(u) and unlocks the analytic tail model of
    measures that carry one (polynomial tails have no workable doubling
    cutoff).  Otherwise the tail is certified by panel doubling with a
    geometric-decay extrapolation bound.
    """
    if spec is None:
        spec = QuadratureSpec()
    eps = spec.epsilon

    head_mass = _head_mass(rho, eps)
    g0 = np.asarray(g0) if np.ndim(g0) else g0
    head = head_mass * g0
    head_err = _magnitude(np.asarray(g(np.asarray([eps])))[0] - g0) * head_mass

    def f(u):
        vals = np.asarray(g(u))
        dens = rho.density(u)
        return vals * dens.reshape((-1,) + (1,) * (vals.ndim - 1))

    U0 = 64.0
    body, body_err, budget = _adaptive(f, _graded_mesh(eps, U0),
                                       0.25 * spec.tol_abs, 0.25 * spec.tol_rel,
                                       spec.max_refinements)

    tol_tail = 0.25 * max(spec.tol_abs, spec.tol_rel * _magnitude(body))
    tail = np.zeros_like(np.asarray(body))
    tail_err = 0.0
    U = U0
    if ug_limit is not None and rho.tail_uinv is not None:
        # model: int_U^inf g drho ~ c_inf * int_U^inf u^{-1} drho, with
        # the deviation of u g(u) from c_inf sampled on [U, 4U]
        c_inf = np.asarray(ug_limit)
        while True:
            probes = np.array([U, 1.5 * U, 2.0 * U, 4.0 * U])
            gv = np.asarray(g(probes))
            dev = max(_magnitude(probes[i] * gv[i] - c_inf) for i in range(4))
            t_uinv = rho.tail_uinv(U)
            if dev * t_uinv <= tol_tail or U >= spec.tail_cap:
                break
            ext, ext_err, budget = _adaptive(f, _graded_mesh(U, 2 * U)[:],
                                             tol_tail, spec.tol_rel, budget)
            body = body + ext
            body_err += ext_err
            U *= 2.0
        if dev * t_uinv > 10 * tol_tail and U >= spec.tail_cap:
            raise ToleranceNotMet(
                f"tail model deviation {dev:.2e} at cap U={U:.0f}")
        tail = c_inf * t_uinv
        tail_err = dev * t_uinv
    else:
        # doubling with geometric decay certificate
        prev = None
        while U < spec.tail_cap:
            piece, perr = _panel(f, U, 2.0 * U)
            pmag = _magnitude(piece) + perr
            tail = tail + piece
            tail_err += perr
            if pmag <= tol_tail:
                break
            if prev is not None and pmag >= 0.95 * prev:
                prev = pmag
                U *= 2.0
                continue
            prev = pmag
            U *= 2.0
        else:
            q = pmag / prev if (prev and prev > 0) else 1.0
            if q >= 0.95:
                raise NonIntegrableTail(
                    f"tail panels not decaying at cap U={spec.tail_cap:.0f}")
            tail_err += pmag * q / (1.0 - q)

    total = rho.atom_at_zero * g0 + head + body + tail
    err = head_err + body_err + tail_err
    if err > 10.0 * max(spec.tol_abs, spec.tol_rel * max(_magnitude(total), 1e-30)):
        raise ToleranceNotMet(f"total error estimate {err:.3e} too large")
    total = np.asarray(total)
    if total.ndim == 0:
        total = total.item()
    if full_output:
        return total, err
    return total


def verify_representation(psi, s_grid, spec=None):
    """Max relative gap between psi's closed form and its measure.

    For each s <= 0 on the grid, compares the closed-form value with
    atom * s + int (e^{su} - 1) u^{-1} drho(u) and returns
    max |difference| / (1 + |psi(s)|).
    """
    if psi.psi is None:
        raise ValueError("verify_representation needs a closed-form evaluator")
    if spec is None:
        spec = QuadratureSpec()
    worst = 0.0
    for s in np.asarray(s_grid, dtype=float):
        if s > 0:
            raise ValueError("grid must lie in (-inf, 0]")

        def g(u, s=s):
            u = np.asarray(u, dtype=float)
            safe = np.where(u > 0, u, 1.0)
            return np.where(u > 0, np.expm1(s * u) / safe, s)

        ref = complex(psi.psi(complex(s)))
        val = levy_integral(g, psi.levy, spec, g0=s,
                            ug_limit=(-1.0 if s < 0 else 0.0))
        worst = max(worst, abs(val - ref) / (1.0 + abs(ref)))
    return worst


def _nu_density_limit_at_zero(nu):
    """lim_{u->0+} nu([0,u))/u, via the CDF at shrinking probes.

    Raises AtomLimitUndefined when the probes grow instead of settling
    (density diverging at 0+).
    """
    probes = [1e-5, 1e-6, 1e-7, 1e-8]
    vals = [nu.cdf(p) / p for p in probes]
    if vals[-1] > 10.0 * max(vals[0], 1e-12) or not np.isfinite(vals[-1]):
        raise AtomLimitUndefined(
            "measure density at 0+ diverges while the atom needs its value")
    # one Richardson step on the last decade kills the O(u) probe bias
    return max((10.0 * vals[-1] - vals[-2]) / 9.0, 0.0)


def cdf_levy_integral(nu, rho, spec=None):
    """int nu([0,u)) u^{-1} drho(u), plus atom * (nu density at 0+).

    nu must expose cdf(u) (vectorized or scalar) and, for the tail
    model, total_mass.  The integrand behaves like u^{t-1} drho near 0
    for a measure with cdf ~ u^t, so instead of the first-order head
    treatment the mesh is extended geometrically toward 0 until the
    contribution dies.
    """
    if spec is None:
        spec = QuadratureSpec()

    cdf = getattr(nu, "cdf")

    def f(u):
        u = np.asarray(u, dtype=float)
        c = np.asarray(cdf(u), dtype=float)
        return c / u * rho.density(u)

    atom_term = 0.0
    if rho.atom_at_zero > 0:
        atom_term = rho.atom_at_zero * _nu_density_limit_at_zero(nu)

    # body on [eps, U0]
    U0 = 64.0
    body, body_err, budget = _adaptive(f, _graded_mesh(spec.epsilon, U0),
                                       0.25 * spec.tol_abs, 0.25 * spec.tol_rel,
                                       spec.max_refinements)
    # left extension: decade panels below eps until they stop mattering
    # (integrand ~ u^{t-1} is smooth on any single decade away from 0)
    lo = spec.epsilon
    tol_piece = 0.125 * max(spec.tol_abs, spec.tol_rel * abs(float(body)))
    while lo > 1e-280:
        piece, perr = _panel(f, lo / 10.0, lo)
        body = body + piece
        body_err += perr
        if abs(float(piece)) + perr < tol_piece:
            break
        lo /= 10.0

    # tail: u g(u) = cdf(u) -> total mass
    mass = getattr(nu, "total_mass", 1.0)
    tail = 0.0
    tail_err = 0.0
    U = U0
    if rho.tail_uinv is not None:
        while True:
            dev = abs(mass - float(np.asarray(cdf(np.asarray([U])))[0]))
            t_uinv = rho.tail_uinv(U)
            if dev * t_uinv <= tol_piece or U >= spec.tail_cap:
                break
            ext, ext_err, budget = _adaptive(f, _graded_mesh(U, 2 * U),
                                             tol_piece, spec.tol_rel, budget)
            body = body + ext
            body_err += ext_err
            U *= 2.0
        tail = mass * t_uinv
        tail_err = dev * t_uinv
    else:
        prev = None
        while U < spec.tail_cap:
            piece, perr = _panel(f, U, 2.0 * U)
            tail += float(piece)
            tail_err += perr
            pmag = abs(float(piece)) + perr
            if pmag <= tol_piece:
                break
            if prev is not None and pmag >= 0.95 * prev:
                raise NonIntegrableTail("cdf-weighted tail not decaying")
            prev = pmag
            U *= 2.0
    value = float(np.real(atom_term + body + tail))
    err = body_err + tail_err
    if err > 10.0 * max(spec.tol_abs, spec.tol_rel * max(abs(value), 1e-30)):
        raise ToleranceNotMet(f"cdf integral error estimate {err:.3e} too large")
    return value
