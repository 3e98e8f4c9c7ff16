"""Reference evaluation of Bessel ratios built only from recurrence structure.

Nothing here calls a Bessel implementation.  The oracles rest on three
independent mechanisms, all consequences of the three-term recurrence
C_{nu+1}(x) = C_{nu-1}(x) - (2*nu/x)*C_nu(x) and the Riccati equation the
ratios satisfy:

* ``i_ratio``: Phi0 = I_{nu-1}/I_nu via the continued fraction

      Phi0(nu, x) = 2*nu/x + 1/(2*(nu+1)/x + 1/(2*(nu+2)/x + ...)),

  evaluated with the modified Lentz algorithm.  The fraction converges to
  the minimal-solution ratio, which is the I family.

* ``k_ratio`` for half-integer orders: K_{1/2} = K_{-1/2} gives the exact
  seed r_{1/2} = 1 for the rational recurrence r_{nu+1} = 1/(2*nu/x + r_nu)
  with r_nu = K_{nu-1}/K_nu; the ratio of half-integer K's is a rational
  function of x and the recurrence reproduces it to roundoff.

* ``k_ratio`` elsewhere: backward adaptive integration of

      Phi'(x) = 1 + ((2*nu-1)/x)*Phi - Phi**2

  from a large x_start down to the target.  The K solution is the unique
  solution bounded as x -> oo and is exponentially attracting in the
  backward direction, so the large-x seed error (three-term asymptotic
  series) is crushed long before the target is reached.

Negative orders in [-1, 0) are a documented test-only extension: the I side
steps the recurrence down once from nu+1 >= 0, and the K side uses the
symmetry K_{-mu} = K_mu, which gives Phi1(nu, x) = 1/Phi1(1-nu, x).

Derived quantities (``psi``, ``double_ratio``, ``product``) are assembled
from the two ratios through exact algebraic relations, arranged to avoid
cancellation; each result carries an honest ``est_error``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from .errors import DomainError, EvaluationError
from .nullclines import EvalPoint

_EPS = 2.220446049250313e-16
CF_TOL = 1.0e-14          # relative stop for the Lentz continued fraction
CF_MAX_ITER = 1_000_000
CF_TINY = 1.0e-300        # floor against zero denominators in Lentz
# Step-size control for backward Riccati runs.  Measured worst-case error
# against the exact half-integer recurrence is ~15x rtol (peak near x ~ 1),
# so 1e-12 keeps the oracle comfortably below 1e-10 true relative error.
ODE_RTOL = 1.0e-12
ODE_ATOL = 1.0e-16
_ODE_SAFETY = 50.0        # est_error multiplier covering the measured ratio


class RatioKind(enum.Enum):
    """Selects the Bessel family: FIRST is I (regular), SECOND is K."""

    FIRST = "first"
    SECOND = "second"


@dataclass(frozen=True)
class OracleResult:
    """A reference value with an error estimate and the method that made it."""

    value: float
    est_error: float
    method: str


def _check_order_range(nu: float) -> None:
    if nu < -1.0:
        raise DomainError(f"oracle supports orders nu >= -1, got nu={nu}")


# ----------------------------------------------------------------------
# I-ratio: continued fraction (modified Lentz)
# ----------------------------------------------------------------------

def _lentz_i_ratio(nu: float, x: float, tol: float, max_iter: int) -> Tuple[float, float, int]:
    """Continued fraction for I_{nu-1}(x)/I_nu(x), nu >= 0.

    Returns (value, last relative delta, iterations).
    """
    b0 = 2.0 * nu / x
    f = b0 if b0 != 0.0 else CF_TINY
    c = f
    d = 0.0
    two_over_x = 2.0 / x
    for j in range(1, max_iter + 1):
        bj = two_over_x * (nu + j)
        d = bj + d
        if d == 0.0:
            d = CF_TINY
        c = bj + 1.0 / c
        if c == 0.0:
            c = CF_TINY
        d = 1.0 / d
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < tol:
            return f, abs(delta - 1.0), j
    raise EvaluationError(
        f"continued fraction did not converge in {max_iter} iterations at nu={nu}, x={x}"
    )


def i_ratio(p: EvalPoint, tol: float = CF_TOL, max_iter: int = CF_MAX_ITER) -> OracleResult:
    """Reference value of I_{nu-1}(x)/I_nu(x) for nu >= -1.

    For nu >= 0 this is the continued fraction directly; orders in [-1, 0)
    take one exact recurrence step down, Phi0(nu) = 2*nu/x + 1/Phi0(nu+1),
    which is the documented test-only extension (the step is exact but can
    lose relative precision at small x, reflected in est_error).
    """
    _check_order_range(p.nu)
    if p.nu >= 0.0:
        val, delta, _ = _lentz_i_ratio(p.nu, p.x, tol, max_iter)
        return OracleResult(val, 4.0 * abs(val) * (delta + _EPS), "continued-fraction")
    up, delta, _ = _lentz_i_ratio(p.nu + 1.0, p.x, tol, max_iter)
    head = 2.0 * p.nu / p.x
    val = head + 1.0 / up
    up_err = 4.0 * abs(up) * (delta + _EPS)
    est = up_err / (up * up) + _EPS * (abs(head) + abs(1.0 / up))
    return OracleResult(val, est, "continued-fraction+step-down")


def i_ratio_row(nu: float, xs: Sequence[float], tol: float = CF_TOL) -> Tuple[np.ndarray, np.ndarray]:
    """Vector form of ``i_ratio`` along one order row; returns (values, est_errors)."""
    vals = np.empty(len(xs))
    ests = np.empty(len(xs))
    for i, x in enumerate(xs):
        r = i_ratio(EvalPoint(nu, x), tol=tol)
        vals[i] = r.value
        ests[i] = r.est_error
    return vals, ests


# ----------------------------------------------------------------------
# K-ratio: exact half-integer recurrence / backward Riccati integration
# ----------------------------------------------------------------------

def _is_half_integer(nu: float) -> bool:
    two_nu = 2.0 * nu
    return two_nu == round(two_nu) and int(round(two_nu)) % 2 != 0


def _k_half_integer(nu: float, x: float) -> Tuple[float, float]:
    """Exact recurrence value of Phi1 = -K_{nu-1}/K_nu at half-integer nu >= 1/2."""
    r = 1.0                 # r_{1/2} = K_{-1/2}/K_{1/2} = 1
    steps = int(round(nu - 0.5))
    mu = 0.5
    for _ in range(steps):
        r = 1.0 / (2.0 * mu / x + r)
        mu += 1.0
    return -r, (2.0 * steps + 2.0) * _EPS * abs(r)


def default_x_start(nu: float, x_max: float) -> float:
    """Seeding abscissa for backward integration: far enough out that the
    three-term large-x series is accurate and its error is contracted away."""
    return max(50.0, 10.0 * (nu + 1.0), 2.0 * x_max)


def _k_seed(nu: float, x: float) -> float:
    # Three-term large-x series of the K branch.
    return -(1.0 - (nu - 0.5) / x + (nu * nu - 0.25) / (2.0 * x * x))


def _k_backward_row(
    nu: float,
    xs: np.ndarray,
    rtol: float,
    atol: float,
    x_start: Optional[float],
) -> Tuple[np.ndarray, np.ndarray]:
    """Backward-integrate the ratio Riccati equation through all of xs (ascending)."""
    x0 = default_x_start(nu, float(xs[-1])) if x_start is None else float(x_start)
    if x0 <= xs[-1]:
        raise DomainError(f"x_start={x0} must exceed the largest target x={xs[-1]}")
    two_nu_m1 = 2.0 * nu - 1.0

    def rhs(x, y):
        phi = y[0]
        return (1.0 + (two_nu_m1 / x) * phi - phi * phi,)

    sol = solve_ivp(
        rhs,
        (x0, float(xs[0])),
        [_k_seed(nu, x0)],
        method="DOP853",
        t_eval=xs[::-1],
        rtol=rtol,
        atol=atol,
    )
    if not sol.success:
        raise EvaluationError(f"backward integration failed at nu={nu}: {sol.message}")
    vals = sol.y[0][::-1].copy()
    ests = _ODE_SAFETY * (rtol * np.abs(vals) + atol)
    return vals, ests


def k_ratio_row(
    nu: float,
    xs: Sequence[float],
    rtol: float = ODE_RTOL,
    atol: float = ODE_ATOL,
    x_start: Optional[float] = None,
    method: str = "auto",
) -> Tuple[np.ndarray, np.ndarray, str]:
    """Reference values of Phi1 = -K_{nu-1}/K_nu along one order row.

    xs must be strictly increasing.  ``method`` is "auto", "recurrence"
    (half-integer orders only) or "integration".  Returns (values,
    est_errors, method_used).  One integration covers the whole row, which
    is how the grid scanner keeps sweeps cheap.
    """
    _check_order_range(nu)
    xs = np.asarray(xs, dtype=float)
    if xs.ndim != 1 or len(xs) == 0:
        raise DomainError("xs must be a non-empty 1-d sequence")
    if np.any(xs <= 0) or np.any(np.diff(xs) <= 0):
        raise DomainError("xs must be positive and strictly increasing")
    if method not in ("auto", "recurrence", "integration"):
        raise DomainError(f"unknown k_ratio method {method!r}")

    if nu < 0.0:
        # K_{-mu} = K_mu gives Phi1(nu, x) * Phi1(1-nu, x) = 1.
        sub_vals, sub_ests, sub_method = k_ratio_row(
            1.0 - nu, xs, rtol=rtol, atol=atol, x_start=x_start, method=method)
        vals = 1.0 / sub_vals
        ests = sub_ests / (sub_vals * sub_vals) + _EPS * np.abs(vals)
        return vals, ests, "reflection+" + sub_method

    if method == "recurrence" and not _is_half_integer(nu):
        raise DomainError(f"exact recurrence requires half-integer order, got nu={nu}")
    if _is_half_integer(nu) and method != "integration":
        vals = np.empty(len(xs))
        ests = np.empty(len(xs))
        for i, x in enumerate(xs):
            vals[i], ests[i] = _k_half_integer(nu, float(x))
        return vals, ests, "half-integer-recurrence"

    vals, ests = _k_backward_row(nu, xs, rtol, atol, x_start)
    return vals, ests, "backward-riccati"


def k_ratio(
    p: EvalPoint,
    rtol: float = ODE_RTOL,
    atol: float = ODE_ATOL,
    x_start: Optional[float] = None,
    method: str = "auto",
) -> OracleResult:
    """Reference value of Phi1(nu, x) = -K_{nu-1}(x)/K_nu(x) for nu >= -1."""
    vals, ests, used = k_ratio_row(
        p.nu, [p.x], rtol=rtol, atol=atol, x_start=x_start, method=method)
    return OracleResult(float(vals[0]), float(ests[0]), used)


# ----------------------------------------------------------------------
# Derived quantities
# ----------------------------------------------------------------------

def _ratio_result(kind: RatioKind, p: EvalPoint, **kw) -> OracleResult:
    if kind is RatioKind.FIRST:
        return i_ratio(p, **kw)
    if kind is RatioKind.SECOND:
        return k_ratio(p, **kw)
    raise DomainError(f"unknown ratio kind {kind!r}")


def psi(kind: RatioKind, p: EvalPoint) -> OracleResult:
    """Logarithmic-derivative shift psi = x*Phi - nu.

    For FIRST this equals x*I_nu'(x)/I_nu(x); for SECOND, x*K_nu'(x)/K_nu(x)
    (both from C' = C_{nu-1} -+ (nu/x)*C with the sign conventions above).
    """
    r = _ratio_result(kind, p)
    val = p.x * r.value - p.nu
    est = p.x * r.est_error + _EPS * (abs(p.x * r.value) + abs(p.nu))
    return OracleResult(val, est, r.method)


def double_ratio(kind: RatioKind, p: EvalPoint) -> OracleResult:
    """W = Phi(nu)/Phi(nu+1), the ratio of consecutive ratios.

    Algebraically W = (psi**2 - nu**2)/x**2 = Phi*(Phi - 2*nu/x).  The I
    side is computed as a quotient of two continued fractions and the K side
    through the factored form (Phi - 2*nu/x has no cancellation for nu >= 0
    since Phi1 < 0); both routes avoid the psi**2 - nu**2 subtraction, which
    loses most of its precision at small x.
    """
    if kind is RatioKind.FIRST:
        top = i_ratio(p)
        bot = i_ratio(EvalPoint(p.nu + 1.0, p.x))
        val = top.value / bot.value
        rel = top.est_error / abs(top.value) + bot.est_error / abs(bot.value)
        return OracleResult(val, abs(val) * (rel + 2.0 * _EPS), top.method)
    if kind is RatioKind.SECOND:
        r = k_ratio(p)
        shift = 2.0 * p.nu / p.x
        val = r.value * (r.value - shift)
        est = (2.0 * abs(r.value) + abs(shift)) * r.est_error \
            + _EPS * (abs(r.value) + abs(shift)) * abs(r.value)
        return OracleResult(val, est, r.method)
    raise DomainError(f"unknown ratio kind {kind!r}")


def product(p: EvalPoint) -> OracleResult:
    """P = I_nu(x)*K_nu(x) through the Wronskian relation P = 1/(x*(Phi0 - Phi1)).

    Valid for nu >= -1 (orders in [-1, 0) ride on the documented oracle
    extensions for the two ratios).
    """
    r0 = i_ratio(p)
    r1 = k_ratio(p)
    gap = r0.value - r1.value
    if gap == 0.0:
        raise EvaluationError(f"degenerate ratio gap at nu={p.nu}, x={p.x}")
    val = 1.0 / (p.x * gap)
    rel = (r0.est_error + r1.est_error) / abs(gap) + 2.0 * _EPS
    return OracleResult(val, abs(val) * rel, f"{r0.method}/{r1.method}")
