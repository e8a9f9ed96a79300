"""Completeness machinery: weight functions, moment checks, resolutions of
unity, and the Carleman uniqueness test.

The continuous resolutions reduce, after exact angular integration, to
radial power moments of the weight functions; those moments are verified by
double-exponential quadrature against log-space factorial references.  The
discrete resolution over the photon-added family is assembled both from its
closed-form coefficients and from a numerically resummed expansion through
the squeezed-number-state basis.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import fockstate, overlap, specfun
from .quadrature import QuadResult, exp_sinh, tanh_sinh

__all__ = [
    "FAMILIES",
    "QuadSettings",
    "WeightFunction",
    "MomentReport",
    "OperatorMatrix",
    "weight_h",
    "weight_h1m",
    "weight_hmum",
    "moment_check",
    "unity_resolution_matrix",
    "pasvs_sns_matrix",
    "sns_pasvs_matrix",
    "discrete_completeness_matrix",
    "sns_completeness_matrix",
    "carleman_sequence",
]

FAMILIES = ("pasvs", "pasops", "pacsc")

_TWO_PI = 2.0 * math.pi
_HERMITICITY_TOL = 1e-12


@dataclass(frozen=True)
class QuadSettings:
    tol: float = 1e-11
    max_level: int = 12


@dataclass(frozen=True)
class WeightFunction:
    """Identifier of a radial measure density: family plus its indices."""

    family: str
    m: int
    mu: int | None = None
    lam: int | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family: {self.family!r}")
        if self.family == "pasvs" and self.m < 1:
            raise ValueError("pasvs measure requires m >= 1 (none exists for m = 0)")
        if self.family == "pasops" and self.m < 0:
            raise ValueError("pasops measure requires m >= 0")
        if self.family == "pacsc":
            if self.lam is None or self.mu is None:
                raise ValueError("pacsc measure requires mu and lam")
            if self.lam < 1 or not 0 <= self.mu < self.lam:
                raise ValueError("pacsc requires lam >= 1 and 0 <= mu < lam")
            if self.m < 0:
                raise ValueError("pacsc measure requires m >= 0")


@dataclass(frozen=True)
class MomentReport:
    k: int
    lhs: float
    rhs: float
    abs_err: float
    rel_err: float
    nodes_used: int
    converged: bool = True


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Finite Hermitian section of a truncated operator in a Fock basis."""

    basis_offset: int
    basis_stride: int
    dim: int
    entries: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=complex)
        if arr.shape != (self.dim, self.dim):
            raise ValueError("entries must be dim x dim")
        defect = float(np.max(np.abs(arr - arr.conj().T)))
        if defect > _HERMITICITY_TOL:
            raise ArithmeticError(f"matrix is not Hermitian (defect {defect:.3e})")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    def identity_deviation(self) -> float:
        return float(np.max(np.abs(self.entries - np.eye(self.dim))))

    def max_offdiagonal(self) -> float:
        off = self.entries - np.diag(np.diag(self.entries))
        return float(np.max(np.abs(off)))


def _stable_x_args(y: float, omy: float) -> tuple[float, float]:
    """(x, x-1) for x = (1-y)^(-1/2) without cancellation at either end."""
    sq = math.sqrt(omy)
    x = 1.0 / sq
    x_minus_1 = y / (sq * (1.0 + sq))
    return x, x_minus_1


def weight_h(m: int, y: float, form: str = "closed", one_minus_y: float | None = None) -> float:
    """Radial weight of the photon-added squeezed vacuum measure, m >= 1.

    form="closed": 1/(2 pi sqrt(1-y)) for m = 1 and the second-kind
    Legendre expression for m >= 2.  form="hypergeometric": the Gauss-series
    route (argument 1-y, so it needs y >= 0.05).  form="integral": the
    convolution integral evaluated by quadrature (m >= 2).

    ``one_minus_y`` may carry 1-y in exact form when y is a quadrature node
    adjacent to 1.
    """
    if m < 1:
        raise ValueError("weight_h is defined for m >= 1")
    omy = (1.0 - y) if one_minus_y is None else one_minus_y
    if not (y > 0.0 and omy > 0.0):
        raise ValueError("weight_h requires 0 < y < 1")
    if form == "closed":
        if m == 1:
            return 1.0 / (_TWO_PI * math.sqrt(omy))
        x, xm1 = _stable_x_args(y, omy)
        return (
            omy ** (0.5 * (m - 2))
            * specfun.legendre_q(m - 2, x, x_minus_1=xm1)
            / (_TWO_PI * math.exp(specfun.log_factorial(m - 2)))
        )
    if form == "hypergeometric":
        pref = 1.0 / (_TWO_PI * specfun.double_factorial(2 * m - 3))
        hyp = specfun.gauss_2f1(0.5 * m, 0.5 * (m - 1), m - 0.5, omy)
        return pref * omy ** (m - 1.5) * hyp.real
    if form == "integral":
        if m < 2:
            raise ValueError("integral form of weight_h requires m >= 2")

        def f(t: float, dta: float, dtb: float) -> float:
            return t ** (-0.5 * m) * dta ** (0.5 * (m - 2)) * dtb ** (0.5 * (m - 3))

        res = tanh_sinh(f, y, 1.0, tol=1e-11)
        if not res.converged:
            raise ValueError(f"weight_h integral form did not converge at y={y}")
        return res.value / (4.0 * math.pi * math.exp(specfun.log_factorial(m - 2)))
    raise ValueError(f"unknown weight_h form: {form!r}")


def weight_h1m(m: int, y: float, one_minus_y: float | None = None) -> float:
    """Radial weight of the photon-added squeezed one-photon measure.

    Printed for m >= 1; the m = 0 case is filled through the index identity
    with the squeezed-vacuum family (the two families share states up to an
    index shift).
    """
    if m < 0:
        raise ValueError("weight_h1m requires m >= 0")
    if m == 0:
        return weight_h(1, y, one_minus_y=one_minus_y)
    omy = (1.0 - y) if one_minus_y is None else one_minus_y
    if not (y > 0.0 and omy > 0.0):
        raise ValueError("weight_h1m requires 0 < y < 1")
    x, xm1 = _stable_x_args(y, omy)
    return (
        omy ** (0.5 * (m - 1))
        * specfun.legendre_q(m - 1, x, x_minus_1=xm1)
        / (_TWO_PI * math.exp(specfun.log_factorial(m - 1)))
    )


def weight_hmum(lam: int, mu: int, m: int, y: float) -> float:
    """Radial weight of the photon-added circle-state measure, y > 0."""
    if lam < 1 or not 0 <= mu < lam:
        raise ValueError("weight_hmum requires lam >= 1 and 0 <= mu < lam")
    if m < 0:
        raise ValueError("weight_hmum requires m >= 0")
    if y <= 0.0:
        raise ValueError("weight_hmum requires y > 0")
    x = lam * y ** (1.0 / lam)
    return (
        y ** ((mu + 1.0 - lam) / lam)
        * math.exp(-x)
        * specfun.kummer_u_int(m, x)
        / (math.pi * float(lam) ** (lam - mu))
    )


class _KummerCache:
    """Memoized U(m, 1, x): quadrature nodes repeat across radial integrals."""

    def __init__(self, m: int):
        self.m = m
        self._values: dict[float, float] = {}

    def __call__(self, x: float) -> float:
        v = self._values.get(x)
        if v is None:
            v = specfun.kummer_u_int(self.m, x)
            self._values[x] = v
        return v


def _pasvs_radial_moment(m: int, power: float, quad: QuadSettings) -> QuadResult:
    def f(y: float, da: float, db: float) -> float:
        return y**power * weight_h(m, y, one_minus_y=db)

    return tanh_sinh(f, 0.0, 1.0, tol=quad.tol, max_level=quad.max_level)


def _pasops_radial_moment(m: int, power: float, quad: QuadSettings) -> QuadResult:
    def f(y: float, da: float, db: float) -> float:
        return y**power * weight_h1m(m, y, one_minus_y=db)

    return tanh_sinh(f, 0.0, 1.0, tol=quad.tol, max_level=quad.max_level)


def _pacsc_radial_moment(power: float, u: _KummerCache, quad: QuadSettings) -> QuadResult:
    """Integral of x^power e^(-x) U(m,1,x) over (0, inf).

    This is the circle-family moment after the exact angular reduction and
    the substitution mapping the measure to the Laplace variable.
    """

    def f(x: float) -> float:
        ln = power * math.log(x) - x
        if ln < -745.0:
            return 0.0
        return math.exp(ln) * u(x)

    return exp_sinh(f, tol=quad.tol, max_level=quad.max_level)


def moment_check(wf: WeightFunction, k_max: int, quad: QuadSettings | None = None) -> list[MomentReport]:
    """Verify the power moments that make the family resolve unity.

    Squeezed families: int_0^1 y^k h(y) dy = [(2k)!!]^2 / (pi (m_eff+2k)!)
    with m_eff = m for the vacuum family and m+1 for the one-photon family.
    Circle family: the (kL+mu)-th Laplace moment of U(m,1,x) against
    ((kL+mu)!)^2/(kL+m+mu)!.  A report is produced for every k; quadrature
    that fails to converge is flagged, never skipped.
    """
    if k_max < 0:
        raise ValueError("moment_check requires k_max >= 0")
    quad = quad or QuadSettings()
    reports = []
    u_cache = _KummerCache(wf.m) if wf.family == "pacsc" else None
    for k in range(k_max + 1):
        if wf.family == "pasvs":
            res = _pasvs_radial_moment(wf.m, float(k), quad)
            log_rhs = (
                2.0 * specfun.log_double_factorial(2 * k)
                - math.log(math.pi)
                - specfun.log_factorial(wf.m + 2 * k)
            )
        elif wf.family == "pasops":
            res = _pasops_radial_moment(wf.m, float(k), quad)
            log_rhs = (
                2.0 * specfun.log_double_factorial(2 * k)
                - math.log(math.pi)
                - specfun.log_factorial(wf.m + 1 + 2 * k)
            )
        else:
            power = float(k * wf.lam + wf.mu)
            res = _pacsc_radial_moment(power, u_cache, quad)
            log_rhs = 2.0 * specfun.log_factorial(k * wf.lam + wf.mu) - specfun.log_factorial(
                k * wf.lam + wf.m + wf.mu
            )
        rhs = math.exp(log_rhs)
        abs_err = abs(res.value - rhs)
        reports.append(
            MomentReport(
                k=k,
                lhs=res.value,
                rhs=rhs,
                abs_err=abs_err,
                rel_err=abs_err / abs(rhs),
                nodes_used=res.nodes_used,
                converged=res.converged,
            )
        )
    return reports


def _angular_check_factors(basis_dim: int, stride: int) -> np.ndarray:
    """Trapezoid angular averages T_d, d = -(dim-1) .. dim-1.

    The rule with 2*basis_dim*stride + 1 equally spaced nodes is exact for
    every trigonometric monomial the truncated kernel contains, so T_0 = 1
    and the others vanish to rounding; they are computed, not assumed, and
    multiply the off-diagonal entries.
    """
    m_nodes = 2 * basis_dim * stride + 1
    out = np.zeros(2 * basis_dim - 1, dtype=complex)
    for idx, d in enumerate(range(-(basis_dim - 1), basis_dim)):
        acc = 0.0 + 0.0j
        for s in range(m_nodes):
            acc += cmath.exp(2j * math.pi * d * s / m_nodes)
        out[idx] = acc / m_nodes
    return out


def unity_resolution_matrix(
    wf: WeightFunction, basis_dim: int, quad: QuadSettings | None = None
) -> OperatorMatrix:
    """Truncated continuous resolution of unity in the family's subspace.

    Angular integration is exact (checked numerically through the trapezoid
    factors); the radial part reduces to the moment integrals, shared across
    entries with equal index sum.  The normalization coefficients of state
    and measure cancel analytically and are not re-evaluated per node.
    """
    if basis_dim < 1 or basis_dim > 64:
        raise ValueError("unity_resolution_matrix requires 1 <= basis_dim <= 64")
    quad = quad or QuadSettings()
    if wf.family == "pacsc":
        stride, offset = wf.lam, wf.m + wf.mu
    else:
        stride, offset = 2, (wf.m if wf.family == "pasvs" else wf.m + 1)
    t_fact = _angular_check_factors(basis_dim, stride)
    u_cache = _KummerCache(wf.m) if wf.family == "pacsc" else None

    # radial integrals indexed by j+l
    radial = []
    for s2 in range(2 * basis_dim - 1):   # s2 = j + l
        power = 0.5 * s2
        if wf.family == "pasvs":
            res = _pasvs_radial_moment(wf.m, power, quad)
        elif wf.family == "pasops":
            res = _pasops_radial_moment(wf.m, power, quad)
        else:
            res = _pacsc_radial_moment(power * wf.lam + wf.mu, u_cache, quad)
        if not res.converged:
            raise ValueError(
                f"unity_resolution_matrix: radial quadrature failed at index sum {s2} "
                f"(last estimate {res.value:.6e})"
            )
        radial.append(res.value)

    m_eff = wf.m if wf.family == "pasvs" else wf.m + 1
    entries = np.zeros((basis_dim, basis_dim), dtype=complex)
    for j in range(basis_dim):
        for l in range(basis_dim):
            if wf.family == "pacsc":
                log_pre = (
                    0.5 * specfun.log_factorial(j * wf.lam + wf.m + wf.mu)
                    + 0.5 * specfun.log_factorial(l * wf.lam + wf.m + wf.mu)
                    - specfun.log_factorial(j * wf.lam + wf.mu)
                    - specfun.log_factorial(l * wf.lam + wf.mu)
                )
                scale = math.exp(log_pre)
            else:
                log_pre = (
                    0.5 * specfun.log_factorial(2 * j + m_eff)
                    + 0.5 * specfun.log_factorial(2 * l + m_eff)
                    - specfun.log_factorial(j)
                    - specfun.log_factorial(l)
                    - (j + l) * math.log(2.0)
                )
                scale = math.pi * math.exp(log_pre)
            entries[j, l] = scale * radial[j + l] * t_fact[j - l + basis_dim - 1]
    return OperatorMatrix(offset, stride, basis_dim, entries)


def pasvs_sns_matrix(param: fockstate.SqueezeParam, dim: int) -> np.ndarray:
    """Coefficient matrix expanding each photon-added state over the
    squeezed number states (rows: added-photon index, cols: number index)."""
    if dim < 1 or dim > 64:
        raise ValueError("pasvs_sns_matrix requires 1 <= dim <= 64")
    out = np.zeros((dim, dim), dtype=complex)
    for m in range(dim):
        for k in range(m % 2, m + 1, 2):
            out[m, k] = fockstate.pasvs_coefficient(param, m, k)
    return out


def sns_pasvs_matrix(param: fockstate.SqueezeParam, dim: int) -> np.ndarray:
    """Coefficient matrix expanding each squeezed number state over the
    photon-added states; the two matrices are mutual inverses."""
    if dim < 1 or dim > 64:
        raise ValueError("sns_pasvs_matrix requires 1 <= dim <= 64")
    out = np.zeros((dim, dim), dtype=complex)
    for m in range(dim):
        for k in range(m % 2, m + 1, 2):
            out[m, k] = fockstate.sns_coefficient(param, m, k)
    return out


def _pair_coefficient_closed(param: fockstate.SqueezeParam, m: int, n: int) -> complex:
    """Closed-form coefficient of |zeta,m><zeta,n| (m <= n, n-m even) in the
    discrete resolution of unity."""
    y = param.y
    omy = 1.0 - y
    x = omy**-0.5
    q = (n - m) // 2
    nu = (m + n) // 2
    dq = specfun.legendre_p_deriv(q, nu, x)
    log_w = (
        -0.5 * (specfun.log_factorial(n) - specfun.log_factorial(m))
        + 0.5 * (math.log(specfun.legendre_p(m, x)) + math.log(specfun.legendre_p(n, x)))
        - 0.5 * math.log(omy)
        + math.log(dq)
    )
    if q:
        log_w += 0.5 * q * (math.log(y) - math.log(omy))
    phase = (-cmath.exp(-1j * param.phi)) ** q
    return math.exp(log_w) * phase


def _pair_coefficient_series(param: fockstate.SqueezeParam, m: int, n: int) -> complex:
    """Same coefficient resummed numerically through the orthonormal
    squeezed-number-state expansion."""
    total = 0.0 + 0.0j
    small = 0
    j = n
    while j <= n + 4000:
        term = fockstate.sns_coefficient(param, j, m) * fockstate.sns_coefficient(
            param, j, n
        ).conjugate()
        total += term
        if abs(term) <= 1e-17 * abs(total):
            small += 1
            if small >= 2:
                return total
        else:
            small = 0
        j += 2
    raise ValueError("pair coefficient series did not converge")


def discrete_completeness_matrix(
    param: fockstate.SqueezeParam,
    m_cutoff: int,
    basis_dim: int,
    coefficients: str = "closed",
) -> OperatorMatrix:
    """Discrete (nonorthogonal-basis) resolution of unity, truncated to the
    photon-added pairs m <= n <= m_cutoff, on the first basis_dim Fock states.

    ``coefficients`` selects the closed-form pair coefficients ("closed") or
    their independent numerical resummation ("series"); the two assemblies
    agreeing validates the closed form.  Cross-parity pairs carry no
    coefficient (they would need half-integer-order Legendre functions and
    cancel identically in the underlying expansion) and are skipped.
    """
    if abs(param.zeta) > 0.5:
        raise ValueError("discrete_completeness_matrix requires |zeta| <= 0.5")
    if m_cutoff > 80:
        raise ValueError("discrete_completeness_matrix requires m_cutoff <= 80")
    if basis_dim < 1 or basis_dim > 64:
        raise ValueError("discrete_completeness_matrix requires 1 <= basis_dim <= 64")
    if coefficients not in ("closed", "series"):
        raise ValueError(f"unknown coefficient route: {coefficients!r}")
    if param.zeta == 0:
        return OperatorMatrix(0, 1, basis_dim, np.eye(basis_dim, dtype=complex))
    dense = {
        m: fockstate.pasvs(param, m, eps=1e-26).dense(basis_dim)
        for m in range(min(m_cutoff, basis_dim - 1) + 1)
    }
    entries = np.zeros((basis_dim, basis_dim), dtype=complex)
    for m in range(min(m_cutoff, basis_dim - 1) + 1):
        vm = dense[m]
        for n in range(m, m_cutoff + 1, 2):
            if n >= basis_dim:
                break   # no support on the block
            vn = dense[n]
            if coefficients == "closed":
                d_mn = _pair_coefficient_closed(param, m, n)
            else:
                d_mn = _pair_coefficient_series(param, m, n)
            if n == m:
                entries += d_mn * np.outer(vm, vm.conj())
            else:
                entries += d_mn * np.outer(vm, vn.conj())
                entries += d_mn.conjugate() * np.outer(vn, vm.conj())
    return OperatorMatrix(0, 1, basis_dim, entries)


def sns_completeness_matrix(
    param: fockstate.SqueezeParam, m_cutoff: int, basis_dim: int
) -> OperatorMatrix:
    """Partial sum of squeezed-number-state projectors on the Fock block.

    This is the orthonormal route to the same identity; its deviation from
    the identity matrix shrinks monotonically in the cutoff and serves as
    the convergence oracle for the discrete resolution.
    """
    if basis_dim < 1 or basis_dim > 64:
        raise ValueError("sns_completeness_matrix requires 1 <= basis_dim <= 64")
    entries = np.zeros((basis_dim, basis_dim), dtype=complex)
    for j in range(m_cutoff + 1):
        v = fockstate.sns(param, j, eps=1e-26).dense(basis_dim)
        entries += np.outer(v, v.conj())
    return OperatorMatrix(0, 1, basis_dim, entries)


def carleman_sequence(m: int, k_list) -> list[tuple[int, float]]:
    """Logarithmic-test ratios ln(a_k)/ln(k) for the moment sequence.

    a_k = ([(2k)!!]^2 / (pi (m+2k)!))^(-1/(2k)); the ratio tending to a
    limit above -1 certifies divergence of sum a_k, hence uniqueness of the
    measure.  Everything is evaluated in log space.
    """
    if m < 0:
        raise ValueError("carleman_sequence requires m >= 0")
    out = []
    for k in k_list:
        if k < 2:
            raise ValueError("carleman_sequence requires k >= 2")
        log_moment = (
            2.0 * specfun.log_double_factorial(2 * k)
            - math.log(math.pi)
            - specfun.log_factorial(m + 2 * k)
        )
        log_ak = -log_moment / (2.0 * k)
        out.append((k, log_ak / math.log(k)))
    return out
