"""Closed-form normalization coefficients and overlaps.

Each family's normalization and overlap is available in every closed form
the theory provides, plus a brute-force series route through the Fock
vectors; ``OverlapResult`` reports how far the forms spread and how far the
selected form sits from the series oracle.

Parameters are the ``SqueezeParam`` / ``CircleParam`` values from
``fockstate`` (duck-typed here to keep the import graph acyclic).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from . import specfun

__all__ = [
    "OverlapResult",
    "sv_overlap",
    "sops_overlap",
    "pasvs_norm",
    "pasops_norm",
    "csc_norm",
    "pacsc_norm",
    "pasvs_overlap",
    "pasops_overlap",
]


@dataclass(frozen=True)
class OverlapResult:
    """Overlap value plus cross-validation diagnostics.

    form_spread is the max pairwise deviation among the equivalent closed
    forms; oracle_error is the deviation of the reported value from the
    series inner product.
    """

    value: complex
    form_spread: float
    oracle_error: float


def _powprod(pairs) -> complex:
    """Product of base**exponent factors, phases combined before a single
    exponentiation.

    Exactly-zero exponents are skipped (their base may legitimately be 0),
    and exponents are accumulated on the principal logarithms so that
    analytically cancelling fractional powers cancel here too.
    """
    log_sum = 0.0 + 0.0j
    for base, expo in pairs:
        if expo == 0:
            continue
        b = complex(base)
        if b == 0:
            if expo > 0:
                return 0.0 + 0.0j
            raise ZeroDivisionError("zero base with nonpositive exponent")
        log_sum += expo * cmath.log(b)
    return cmath.exp(log_sum)


def sv_overlap(xi, zeta) -> complex:
    """Overlap of two squeezed vacuum states."""
    w = xi.zeta.conjugate() * zeta.zeta
    amp = ((1.0 - zeta.y) * (1.0 - xi.y)) ** 0.25
    return amp * (1.0 - w) ** -0.5


def sops_overlap(xi, zeta) -> complex:
    """Overlap of two squeezed one-photon states."""
    w = xi.zeta.conjugate() * zeta.zeta
    amp = ((1.0 - zeta.y) * (1.0 - xi.y)) ** 0.75
    return amp * (1.0 - w) ** -1.5


def pasvs_norm(zeta, m: int) -> float:
    """Squared norm of (a^dag)^m applied to a squeezed vacuum state.

    m! (1-y)^(-m/2) P_m((1-y)^(-1/2)) with y = |zeta|^2.
    """
    if m < 0:
        raise ValueError("pasvs_norm requires m >= 0")
    omy = 1.0 - zeta.y
    x = omy**-0.5
    return math.exp(specfun.log_factorial(m)) * omy ** (-0.5 * m) * specfun.legendre_p(m, x)


def pasops_norm(zeta, m: int) -> float:
    """Squared norm of (a^dag)^m applied to a squeezed one-photon state.

    (m+1)! (1-y)^(-(m-1)/2) P_{m+1}((1-y)^(-1/2)).
    """
    if m < 0:
        raise ValueError("pasops_norm requires m >= 0")
    omy = 1.0 - zeta.y
    x = omy**-0.5
    return (
        math.exp(specfun.log_factorial(m + 1))
        * omy ** (-0.5 * (m - 1))
        * specfun.legendre_p(m + 1, x)
    )


def _csc_pfq_params(lam: int, mu: int) -> list[float]:
    """Lower-parameter list of the 0F_{lam-1} normalization series."""
    return [1.0 + j / lam for j in range(1, mu + 1)] + [
        j / lam for j in range(mu + 1, lam)
    ]


def csc_norm(param, form: str = "pfq") -> float:
    """Normalization of an annihilation-power eigenstate; two routes.

    form="pfq": the 0F_{lam-1} series in y = |z|^2 / lam^lam.
    form="circle": mu! |t|^(-2 mu) h_{mu+1}(|t|^2, lam) through the
    hyperbolic functions of higher order (|t| = |z|^(1/lam)).
    """
    lam, mu = param.lam, param.mu
    if form == "pfq":
        return specfun.generalized_pfq([], _csc_pfq_params(lam, mu), param.y)
    if form == "circle":
        if param.z == 0:
            return 1.0
        t_sq = abs(param.z) ** (2.0 / lam)
        return (
            math.exp(specfun.log_factorial(mu))
            * t_sq**-mu
            * specfun.hyperbolic_order(mu + 1, lam, t_sq)
        )
    raise ValueError(f"unknown csc_norm form: {form!r}")


def pacsc_norm(param, m: int, form: str = "pfq") -> float:
    """Normalization of the photon-added circle states; two routes.

    form="pfq": (m+mu)!/mu! * lamF_{2lam-1}(...; y) divided by the base
    normalization.  form="laguerre": the rotated-Laguerre sum over the lam
    circle components; its imaginary part must vanish and is checked.
    """
    if m < 0:
        raise ValueError("pacsc_norm requires m >= 0")
    lam, mu = param.lam, param.mu
    if param.z == 0:
        return math.exp(specfun.log_factorial(m + mu) - specfun.log_factorial(mu))
    n_mu = csc_norm(param, "pfq")
    if form == "pfq":
        a_list = [(m + mu + j) / lam for j in range(1, lam + 1)]
        b_core = _csc_pfq_params(lam, mu)
        b_list = [1.0] + b_core + b_core
        series = specfun.generalized_pfq(a_list, b_list, param.y)
        return (
            math.exp(specfun.log_factorial(m + mu) - specfun.log_factorial(mu))
            / n_mu
            * series
        )
    if form == "laguerre":
        t = param.t
        t_sq = abs(t) ** 2
        eps = cmath.exp(2j * math.pi / lam)
        total = 0.0 + 0.0j
        for nu in range(lam):
            rot = eps**nu
            total += eps ** (-mu * nu) * cmath.exp(t_sq * rot) * specfun.laguerre(
                m, -t_sq * rot
            )
        value = (
            math.exp(specfun.log_factorial(mu) + specfun.log_factorial(m))
            * t_sq**-mu
            / (lam * n_mu)
            * total
        )
        if abs(value.imag) > 1e-10 * max(1.0, abs(value.real)):
            raise ValueError(
                f"pacsc_norm laguerre form has non-vanishing imaginary part: {value.imag}"
            )
        return value.real
    raise ValueError(f"unknown pacsc_norm form: {form!r}")


_FORMS = (1, 2, 3)


def pasvs_overlap(xi, n: int, zeta, m: int, form=1) -> OverlapResult:
    """Overlap of two photon-added squeezed vacuum states.

    Vanishes unless n - m is even.  For nonnegative even n - m the three
    equivalent closed forms (hypergeometric, Euler-transformed terminating
    hypergeometric, associated-Legendre) are evaluated together with the
    series inner product; negative even n - m goes through conjugation of
    the swapped arguments.  ``form`` picks which evaluation is reported
    (1, 2, 3, or "series").
    """
    if n < 0 or m < 0:
        raise ValueError("photon-added index must be >= 0")
    if (n - m) % 2 != 0:
        return OverlapResult(0.0 + 0.0j, 0.0, 0.0)
    if n < m:
        sub = pasvs_overlap(zeta, m, xi, n, form)
        return OverlapResult(sub.value.conjugate(), sub.form_spread, sub.oracle_error)
    w = xi.zeta.conjugate() * zeta.zeta
    if abs(w) > 0.9:
        raise ValueError("pasvs_overlap requires |conj(xi) zeta| <= 0.9")
    q = (n - m) // 2
    pref = (pasvs_norm(zeta, m) * pasvs_norm(xi, n)) ** -0.5
    quarter = ((1.0 - zeta.y) * (1.0 - xi.y)) ** 0.25
    svo = sv_overlap(xi, zeta)
    front = math.exp(specfun.log_factorial(n) - specfun.log_factorial(q))
    zq = (0.5 * zeta.zeta) ** q

    f1 = pref * quarter * front * zq * specfun.gauss_2f1(
        0.5 * (n + 1), 0.5 * (n + 2), q + 1.0, w
    )
    f2 = (
        pref
        * svo
        * front
        * zq
        * (1.0 - w) ** (-(n + m) // 2)
        * specfun.gauss_2f1(-0.5 * (m - 1), -0.5 * m, q + 1.0, w)
    )
    x_arg = (1.0 - w) ** -0.5
    powers = _powprod(
        [
            (xi.zeta.conjugate(), (m - n) / 4 + q / 2),
            (zeta.zeta, (n - m) / 4 + q / 2),
            (1.0 - w, -(m + n) / 4 - q / 2),
        ]
    )
    f3 = (
        pref
        * svo
        * math.exp(specfun.log_factorial(n))
        * math.exp(specfun.log_factorial(m) - specfun.log_factorial(n))
        * powers
        * specfun.legendre_p_deriv(q, (m + n) // 2, x_arg)
    )

    series = _pasvs_series(xi, n, zeta, m)
    forms = {1: f1, 2: f2, 3: f3, "series": series}
    if form not in forms:
        raise ValueError(f"unknown pasvs_overlap form: {form!r}")
    spread = max(
        abs(forms[i] - forms[j]) for i in _FORMS for j in _FORMS if i < j
    )
    value = forms[form]
    return OverlapResult(value, spread, abs(value - series))


def pasops_overlap(xi, n: int, zeta, m: int, form=3) -> OverlapResult:
    """Overlap of two photon-added squeezed one-photon states.

    Form 3 is the printed associated-Legendre expression; forms 1 and 2 are
    routed through the photon-added squeezed vacuum overlap at indices
    (n+1, m+1), to which these states are exactly proportional.
    """
    if n < 0 or m < 0:
        raise ValueError("photon-added index must be >= 0")
    if (n - m) % 2 != 0:
        return OverlapResult(0.0 + 0.0j, 0.0, 0.0)
    if n < m:
        sub = pasops_overlap(zeta, m, xi, n, form)
        return OverlapResult(sub.value.conjugate(), sub.form_spread, sub.oracle_error)
    w = xi.zeta.conjugate() * zeta.zeta
    if abs(w) > 0.9:
        raise ValueError("pasops_overlap requires |conj(xi) zeta| <= 0.9")
    q = (n - m) // 2
    bridged = pasvs_overlap(xi, n + 1, zeta, m + 1, form=1)
    f1 = bridged.value
    f2 = pasvs_overlap(xi, n + 1, zeta, m + 1, form=2).value

    pref = (pasops_norm(zeta, m) * pasops_norm(xi, n)) ** -0.5
    so = sops_overlap(xi, zeta)
    x_arg = (1.0 - w) ** -0.5
    powers = _powprod(
        [
            (xi.zeta.conjugate(), (m - n) / 4 + q / 2),
            (zeta.zeta, (n - m) / 4 + q / 2),
            (1.0 - w, -(m + n - 2) / 4 - q / 2),
        ]
    )
    f3 = (
        pref
        * so
        * math.exp(specfun.log_factorial(n + 1))
        * math.exp(specfun.log_factorial(m + 1) - specfun.log_factorial(n + 1))
        * powers
        * specfun.legendre_p_deriv(q, (m + n + 2) // 2, x_arg)
    )

    series = _pasops_series(xi, n, zeta, m)
    forms = {1: f1, 2: f2, 3: f3, "series": series}
    if form not in forms:
        raise ValueError(f"unknown pasops_overlap form: {form!r}")
    spread = max(
        abs(forms[i] - forms[j]) for i in _FORMS for j in _FORMS if i < j
    )
    value = forms[form]
    return OverlapResult(value, spread, abs(value - series))


# Oracle vectors are truncated far below working precision: the inner
# product of two vectors cut at different lengths loses ~sqrt(eps_u * eps_v)
# of cross terms, so eps must sit well under the comparison tolerances.
_SERIES_EPS = 1e-26


def _pasvs_series(xi, n, zeta, m) -> complex:
    from . import fockstate

    u = fockstate.pasvs(xi, n, eps=_SERIES_EPS)
    v = fockstate.pasvs(zeta, m, eps=_SERIES_EPS)
    return fockstate.inner(u, v)


def _pasops_series(xi, n, zeta, m) -> complex:
    from . import fockstate

    u = fockstate.pasops(xi, n, eps=_SERIES_EPS)
    v = fockstate.pasops(zeta, m, eps=_SERIES_EPS)
    return fockstate.inner(u, v)
