"""Closed-form nullcline geometry for modified Bessel ratio Riccati equations.

The two ratios

    Phi0(nu, x) = I_{nu-1}(x) / I_nu(x)        (> 0 for nu >= 0)
    Phi1(nu, x) = -K_{nu-1}(x) / K_nu(x)       (< 0)

are particular solutions of the same Riccati equation

    Phi'(x) = 1 + ((2*nu - 1)/x) * Phi - Phi**2,

and the rescaled unknown gamma = x**(-a) * Phi solves

    gamma'(x) = -x**a * gamma**2 + ((2*nu - 1 - a)/x) * gamma + x**(-a).

The right-hand side factors through two explicit nullcline branches
gamma_hat_plus > 0 > gamma_hat_minus built from the positive root

    lambda_plus(a, nu, x) = (c + sqrt(c**2 + x**2)) / x,   c = nu - (a+1)/2,

via gamma_hat_plus = x**(-a) * lambda_plus and
gamma_hat_minus = -x**(-a) / lambda_plus.  Comparison of solutions against
these branches yields the classical two-sided ratio bounds produced by
``amos_bounds``.

The second-order structure (ratios of consecutive ratios) leads to the cubic

    t**3 + t**2 - (nu**2 + x**2) * t - nu**2 = 0,

whose three real roots lambda_K < lambda_O < lambda_I drive both the
trigonometric ratio bounds (``trig_bound_I``/``trig_bound_K``) and the
nullcline levels w = (lambda**2 - nu**2) / x**2 of the double-ratio flow
(``w_values``).  Bounds for the product I_nu * K_nu follow from
1/(x*(Phi0 - Phi1)) and are collected by ``product_bounds``.

Every bound is returned with its proved validity range attached; values are
still computed outside that range, but ``valid`` is set to False so scanning
code never treats an extrapolated value as a proved one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

from .errors import DomainError

# Largest tolerated overshoot of |acos argument| beyond 1 before the cubic
# solver refuses to clamp; overshoots below this are pure roundoff.
ACOS_CLAMP_LIMIT = 1.0e-8
EPS = 2.220446049250313e-16   # float64 machine epsilon

_TWO_PI_3 = 2.0 * math.pi / 3.0


@dataclass(frozen=True)
class EvalPoint:
    """A single (order, argument) evaluation point with x > 0."""

    nu: float
    x: float

    def __post_init__(self):
        try:
            nu, x = float(self.nu), float(self.x)
        except (TypeError, ValueError) as exc:
            raise DomainError(f"evaluation point must be numeric, got ({self.nu!r}, {self.x!r})") from exc
        if not math.isfinite(nu):
            raise DomainError(f"order must be a finite real number, got {self.nu!r}")
        if not (math.isfinite(x) and x > 0):
            raise DomainError(f"argument must be finite and > 0, got {self.x!r}")
        object.__setattr__(self, "nu", nu)
        object.__setattr__(self, "x", x)


@dataclass(frozen=True)
class Bound:
    """One side of an inequality for a ratio/product quantity.

    ``value`` is always the formula value at the evaluation point; ``valid``
    states whether the point lies inside the proved range recorded in
    ``validity_note``.  ``conjectural`` marks bounds that are numerically
    supported but not proved anywhere.
    """

    value: float
    direction: str          # "upper" or "lower"
    target: str             # "I-ratio", "K-ratio", "product", ...
    valid: bool
    validity_note: str = ""
    conjectural: bool = False


@dataclass(frozen=True)
class CubicRoots:
    """The three real roots of t**3 + t**2 - (nu**2+x**2)*t - nu**2."""

    lambda_K: float
    lambda_O: float
    lambda_I: float
    g: float                # sqrt(3*(nu**2 + x**2) + 1)
    acos_arg: float         # clamped argument passed to acos


@dataclass(frozen=True)
class WValues:
    """Nullcline levels of the double-ratio flow, w = lambda/(lambda+1)."""

    w_I: float
    w_K: float
    w_O: float


@dataclass(frozen=True)
class Extremum:
    """Location of the interior extremum of a nullcline branch."""

    x: float
    branch: str             # "plus" or "minus"
    kind: str               # "min" or "max"


@dataclass(frozen=True)
class ProductBounds:
    """All closed-form bounds for P(nu, x) = I_nu(x) * K_nu(x)."""

    upper: Bound
    lower_amos: Bound
    lower_trig: Bound
    lower_simple: Bound
    lower_conjecture: Bound


def _check_a(a: float) -> float:
    try:
        a = float(a)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"rescaling exponent must be numeric, got {a!r}") from exc
    if not math.isfinite(a):
        raise DomainError(f"rescaling exponent must be finite, got {a!r}")
    return a


def lambda_plus(a: float, p: EvalPoint) -> float:
    """Positive nullcline root (c + sqrt(c**2 + x**2))/x with c = nu-(a+1)/2.

    Strictly positive for all real a, nu and x > 0.  The c < 0 case is
    rationalized to x/(sqrt(c**2+x**2) - c) to avoid cancellation.
    """
    a = _check_a(a)
    c = p.nu - 0.5 * (a + 1.0)
    r = math.hypot(c, p.x)
    if c >= 0.0:
        return (c + r) / p.x
    return p.x / (r - c)


def gamma_hat(a: float, p: EvalPoint) -> Tuple[float, float]:
    """Both nullcline branches (plus, minus) of the rescaled Riccati flow.

    plus = x**(-a) * lambda_plus > 0 and minus = -x**(-a) / lambda_plus < 0.
    """
    lam = lambda_plus(a, p)
    scale = p.x ** (-a)
    return scale * lam, -scale / lam


def nullcline_extremum(a: float, nu: float) -> Optional[Extremum]:
    """Interior extremum of a nullcline branch for 0 < |a| < 1.

    The candidate abscissa is x_e = -(sqrt(1-a**2)/a) * (nu - (a+1)/2).  A
    positive x_e is an extremum of the plus branch, a negative one belongs to
    the minus branch at |x_e|, and x_e == 0 means neither branch has an
    interior extremum (returns None).
    """
    a = _check_a(a)
    if not 0.0 < abs(a) < 1.0:
        raise DomainError(f"extremum formula requires 0 < |a| < 1, got a={a}")
    if not math.isfinite(nu):
        raise DomainError(f"order must be finite, got {nu!r}")
    c = nu - 0.5 * (a + 1.0)
    x_e = -(math.sqrt(1.0 - a * a) / a) * c
    if x_e == 0.0:
        return None
    if x_e > 0.0:
        return Extremum(x=x_e, branch="plus", kind="min" if a < 0 else "max")
    return Extremum(x=-x_e, branch="minus", kind="max" if a < 0 else "min")


def _clamped_acos_arg(raw: float) -> float:
    # Roundoff may push the argument marginally outside [-1, 1]; anything
    # beyond ACOS_CLAMP_LIMIT indicates a real defect, not roundoff.
    if abs(raw) > 1.0 + ACOS_CLAMP_LIMIT:
        raise DomainError(f"acos argument {raw!r} exceeds [-1, 1] beyond roundoff")
    return min(1.0, max(-1.0, raw))


def _cubic_lambdas(nu: float, x: float) -> Tuple[float, float, float, float, float]:
    """Roots (lam_I, lam_K, lam_O) plus (g, acos_arg) of the ratio cubic."""
    nu2 = nu * nu
    g = math.sqrt(3.0 * (nu2 + x * x) + 1.0)
    raw = (18.0 * nu2 - 9.0 * x * x - 2.0) / (2.0 * g ** 3)
    arg = _clamped_acos_arg(raw)
    if nu == 0.0:
        # The cubic factors as t*(t**2 + t - x**2); the trig formula is
        # ill-conditioned here (acos argument at -1), so use the factors.
        s = 0.5 * math.sqrt(1.0 + 4.0 * x * x)
        return -0.5 + s, -0.5 - s, 0.0, g, arg
    theta = math.acos(arg) / 3.0
    two_g_3 = 2.0 * g / 3.0
    lam_i = two_g_3 * math.cos(theta) - 1.0 / 3.0
    lam_k = two_g_3 * math.cos(theta + _TWO_PI_3) - 1.0 / 3.0
    lam_o = two_g_3 * math.cos(theta - _TWO_PI_3) - 1.0 / 3.0
    return lam_i, lam_k, lam_o, g, arg


def _lambda_K_shift(nu: float, x: float, lam_k: float) -> float:
    """lambda_K + nu to full relative precision.

    For nu well above 1 and small x the shift is O(x**2/nu) while lambda_K
    itself is O(nu), so forming it by subtraction loses most of its digits.
    Substituting t = u - nu into the cubic gives

        u**3 + (1 - 3*nu)*u**2 + (2*nu*(nu-1) - x**2)*u + nu*x**2 = 0

    whose coefficients carry no cancellation, so a couple of Newton steps
    seeded from the trig-formula value recover u at machine accuracy.
    """
    b = 1.0 - 3.0 * nu
    c = 2.0 * nu * (nu - 1.0) - x * x
    d = nu * x * x
    u = lam_k + nu
    for _ in range(3):
        f = ((u + b) * u + c) * u + d
        df = (3.0 * u + 2.0 * b) * u + c
        if df == 0.0:
            break
        step = f / df
        u -= step
        if abs(step) <= 4.0 * EPS * abs(u):
            break
    return u


def cubic_roots(p: EvalPoint) -> CubicRoots:
    """All three real roots of t**3 + t**2 - (nu**2+x**2)*t - nu**2.

    Ordered lambda_K < lambda_O < lambda_I with lambda_I > 0 always,
    lambda_K < -1, and lambda_O in (-|nu|, 0] (zero exactly when nu == 0).
    """
    lam_i, lam_k, lam_o, g, arg = _cubic_lambdas(p.nu, p.x)
    return CubicRoots(lambda_K=lam_k, lambda_O=lam_o, lambda_I=lam_i, g=g, acos_arg=arg)


def w_values(p: EvalPoint) -> WValues:
    """Nullcline levels w_A = (lambda_A**2 - nu**2)/x**2 of the W flow.

    Evaluated through the algebraically equivalent form lambda/(lambda + 1)
    (the cubic gives (lambda**2 - nu**2)*(lambda + 1) = x**2*lambda), which
    avoids the cancellation of lambda**2 against nu**2 at small x.
    """
    lam_i, lam_k, lam_o, _, _ = _cubic_lambdas(p.nu, p.x)
    return WValues(
        w_I=lam_i / (lam_i + 1.0),
        w_K=lam_k / (lam_k + 1.0),
        w_O=lam_o / (lam_o + 1.0),
    )


def trig_bound_I(p: EvalPoint) -> Bound:
    """Trigonometric upper bound for I_{nu-1}(x)/I_nu(x), sharp as x -> 0,
    x -> oo and nu -> oo.  Equals (lambda_I + nu)/x; proved for nu >= 0.
    """
    lam_i, _, _, _, _ = _cubic_lambdas(p.nu, p.x)
    return Bound(
        value=(lam_i + p.nu) / p.x,
        direction="upper",
        target="I-ratio",
        valid=p.nu >= 0.0,
        validity_note="nu >= 0",
    )


def trig_bound_K(p: EvalPoint) -> Bound:
    """Trigonometric upper bound for K_{nu-1}(x)/K_nu(x) (positive ratio
    convention), sharp in the same three limits.  Equals -(lambda_K + nu)/x;
    proved for nu >= 0.
    """
    _, lam_k, _, _, _ = _cubic_lambdas(p.nu, p.x)
    return Bound(
        value=-_lambda_K_shift(p.nu, p.x, lam_k) / p.x,
        direction="upper",
        target="K-ratio",
        valid=p.nu >= 0.0,
        validity_note="nu >= 0",
    )


def amos_bounds(p: EvalPoint, a: float) -> Tuple[Bound, Bound]:
    """Nullcline comparison bounds (bound_I, bound_K) for exponent a.

    bound_I constrains Phi0 = I_{nu-1}/I_nu against lambda_plus(a), and
    bound_K constrains Phi1 = -K_{nu-1}/K_nu against -1/lambda_plus(a).
    Direction and proved range depend on a:

      a = 0   : Phi0 > lambda_plus for nu >= 1/2;
                Phi1 < -1/lambda_plus for nu > 1/2 (equality holds
                identically at nu = 1/2).
      a = -1  : Phi0 < lambda_plus for nu >= -1;
                Phi1 < -1/lambda_plus for nu >= 1/2.
      a = 1   : Phi0 > lambda_plus for nu > 0;
                Phi1 > -1/lambda_plus for every real nu.
      a > 1   : Phi0 > lambda_plus for nu >= 0;
                Phi1 > -1/lambda_plus for every real nu.
      a < -1  : Phi0 < lambda_plus for nu >= 0;
                Phi1 < -1/lambda_plus for every real nu.
      0<a<1   : Phi0 > lambda_plus for nu > 1/2; no K-side statement.
      -1<a<0  : Phi1 < -1/lambda_plus for nu >= 1/2; no I-side statement.
    """
    a = _check_a(a)
    lam = lambda_plus(a, p)
    nu = p.nu

    if a == 0.0:
        bound_i = Bound(lam, "lower", "I-ratio", nu >= 0.5, "nu >= 1/2")
        bound_k = Bound(-1.0 / lam, "upper", "K-ratio", nu > 0.5,
                        "nu > 1/2 (identity at nu = 1/2)")
    elif a == -1.0:
        bound_i = Bound(lam, "upper", "I-ratio", nu >= -1.0, "nu >= -1")
        bound_k = Bound(-1.0 / lam, "upper", "K-ratio", nu >= 0.5, "nu >= 1/2")
    elif a == 1.0:
        bound_i = Bound(lam, "lower", "I-ratio", nu > 0.0, "nu > 0")
        bound_k = Bound(-1.0 / lam, "lower", "K-ratio", True, "all real nu")
    elif a > 1.0:
        bound_i = Bound(lam, "lower", "I-ratio", nu >= 0.0, "nu >= 0")
        bound_k = Bound(-1.0 / lam, "lower", "K-ratio", True, "all real nu")
    elif a < -1.0:
        bound_i = Bound(lam, "upper", "I-ratio", nu >= 0.0, "nu >= 0")
        bound_k = Bound(-1.0 / lam, "upper", "K-ratio", True, "all real nu")
    elif a > 0.0:  # 0 < a < 1
        bound_i = Bound(lam, "lower", "I-ratio", nu > 0.5, "nu > 1/2")
        bound_k = Bound(-1.0 / lam, "upper", "K-ratio", False,
                        "no proved statement for 0 < a < 1")
    else:  # -1 < a < 0
        bound_i = Bound(lam, "upper", "I-ratio", False,
                        "no proved statement for -1 < a < 0")
        bound_k = Bound(-1.0 / lam, "upper", "K-ratio", nu >= 0.5, "nu >= 1/2")
    return bound_i, bound_k


def product_bounds(p: EvalPoint) -> ProductBounds:
    """Closed-form bounds for the product P(nu, x) = I_nu(x)*K_nu(x).

    upper            1/(2*sqrt((nu-1/2)**2 + x**2))          nu >= 1/2
    lower_amos       1/(1 + sqrt(nu**2+x**2)
                        + sqrt((nu-1)**2+x**2))              nu >= -1
    lower_trig       sqrt(3)/(2*g*sin(acos(arg)/3 + pi/3))
                     == 1/(lambda_I - lambda_K)              nu >= 0
    lower_simple     1/(2*sqrt(x**2 + nu**2 + 1/3))          nu >= 0
    lower_conjecture 1/(2*sqrt(x**2 + nu**2 + 1/5))          conjectured,
                                                             nu >= -1
    """
    nu, x = p.nu, p.x
    upper = Bound(
        0.5 / math.hypot(nu - 0.5, x), "upper", "product",
        nu >= 0.5, "nu >= 1/2",
    )
    lower_amos = Bound(
        1.0 / (1.0 + math.hypot(nu, x) + math.hypot(nu - 1.0, x)),
        "lower", "product", nu >= -1.0, "nu >= -1",
    )
    lam_i, lam_k, _, _, _ = _cubic_lambdas(nu, x)
    lower_trig = Bound(
        1.0 / (lam_i - lam_k), "lower", "product", nu >= 0.0, "nu >= 0",
    )
    lower_simple = Bound(
        0.5 / math.sqrt(x * x + nu * nu + 1.0 / 3.0),
        "lower", "product", nu >= 0.0, "nu >= 0",
    )
    lower_conjecture = Bound(
        0.5 / math.sqrt(x * x + nu * nu + 0.2),
        "lower", "product", nu >= -1.0, "conjectured for nu >= -1",
        conjectural=True,
    )
    return ProductBounds(upper, lower_amos, lower_trig, lower_simple, lower_conjecture)


def bound_producers() -> Tuple[str, ...]:
    """Canonical ids of every bound this module can produce.

    The verification claim catalog must register each of these; a test
    enumerates both sides and fails on any unregistered producer.
    """
    ids = ["trig-upper-I", "trig-upper-K"]
    for a_tag in ("a0", "a-1", "a1", "a-2", "a2"):
        ids.append(f"amos-I-{a_tag}")
        ids.append(f"amos-K-{a_tag}")
    ids += [
        "product-upper",
        "product-lower-amos",
        "product-lower-trig",
        "product-lower-simple",
        "product-lower-conjecture",
    ]
    return tuple(ids)
