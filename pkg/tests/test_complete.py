import cmath
import math

import numpy as np
import pytest

from pastates import complete as cm
from pastates import fockstate as fs

TWO_PI = 2.0 * math.pi
EULER_GAMMA = 0.5772156649015328606


def exp1_series(x: float) -> float:
    acc = -EULER_GAMMA - math.log(x)
    term = 1.0
    for k in range(1, 60):
        term *= -x / k
        acc -= term / k
    return acc


def log_ratio(y: float) -> float:
    s = math.sqrt(1.0 - y)
    return math.log((1.0 + s) / (1.0 - s))


# ------------------------------------------------------------ weight types

def test_weight_function_validation():
    with pytest.raises(ValueError):
        cm.WeightFunction("pasvs", 0)        # no measure exists for m = 0
    with pytest.raises(ValueError):
        cm.WeightFunction("pacsc", 1)        # needs mu and lam
    with pytest.raises(ValueError):
        cm.WeightFunction("pacsc", 1, mu=2, lam=2)
    with pytest.raises(ValueError):
        cm.WeightFunction("other", 1)
    cm.WeightFunction("pasops", 0)
    cm.WeightFunction("pacsc", 0, mu=1, lam=3)


# ------------------------------------------------------------ weight_h

def test_weight_h_small_y_limit():
    assert cm.weight_h(1, 1e-10) == pytest.approx(1.0 / TWO_PI, abs=1e-9)


def test_weight_h2_closed_value():
    assert cm.weight_h(2, 0.75) == pytest.approx(log_ratio(0.75) / (4 * math.pi), abs=1e-10)


@pytest.mark.parametrize(
    "m,formula",
    [
        (2, lambda y: log_ratio(y) / (4 * math.pi)),
        (3, lambda y: (log_ratio(y) - 2 * math.sqrt(1 - y)) / (4 * math.pi)),
        (4, lambda y: ((2 + y) * log_ratio(y) - 6 * math.sqrt(1 - y)) / (16 * math.pi)),
        (
            5,
            lambda y: (3 * (2 + 3 * y) * log_ratio(y) - 2 * (11 + 4 * y) * math.sqrt(1 - y))
            / (144 * math.pi),
        ),
    ],
)
@pytest.mark.parametrize("y", [0.1, 0.5, 0.75, 0.9])
def test_weight_h_low_orders_printed_formulas(m, formula, y):
    assert cm.weight_h(m, y) == pytest.approx(formula(y), rel=1e-12)


@pytest.mark.parametrize("m", range(2, 9))
@pytest.mark.parametrize("y", [0.1, 0.3, 0.5, 0.7, 0.9])
def test_weight_h_triform_agreement(m, y):
    a = cm.weight_h(m, y, "closed")
    b = cm.weight_h(m, y, "hypergeometric")
    c = cm.weight_h(m, y, "integral")
    assert b == pytest.approx(a, rel=1e-8)
    assert c == pytest.approx(a, rel=1e-8)


def test_weight_h_domain_errors():
    with pytest.raises(ValueError):
        cm.weight_h(2, 0.0)
    with pytest.raises(ValueError):
        cm.weight_h(2, 1.0)
    with pytest.raises(ValueError):
        cm.weight_h(0, 0.5)
    with pytest.raises(ValueError):
        cm.weight_h(1, 0.5, form="integral")
    with pytest.raises(ValueError):
        cm.weight_h(2, 0.5, form="nope")


def test_weight_h_boundary_behavior():
    # vanishes at y -> 1 for m >= 2; diverges (logarithmically) at y -> 0
    for m in range(2, 6):
        assert cm.weight_h(m, 1.0 - 1e-6) < 1e-3
        near0 = [cm.weight_h(m, y) for y in (1e-2, 1e-4, 1e-8, 1e-30)]
        assert all(near0[i] < near0[i + 1] for i in range(3))
        assert cm.weight_h(m, 0.1) < near0[0]
    # the divergence is ~ ln(4/y)/(4 pi (m-2)!), so thresholds sit at
    # astronomically small y; check the m = 2 case clears 10 in range
    assert cm.weight_h(2, 1e-60) > 10.0


def test_weight_h_positivity():
    for m in range(1, 9):
        for y in np.linspace(0.01, 0.99, 25):
            assert cm.weight_h(m, float(y)) > 0.0


# ------------------------------------------------------------ weight_h1m

def test_weight_h1m_index_identity():
    for m in range(1, 7):
        for y in (0.1, 0.5, 0.9):
            assert cm.weight_h1m(m, y) == pytest.approx(cm.weight_h(m + 1, y), rel=1e-12)


def test_weight_h1m_base_cases():
    assert cm.weight_h1m(0, 0.5) == pytest.approx(math.sqrt(2) / TWO_PI, rel=1e-12)
    assert cm.weight_h1m(1, 0.4) == pytest.approx(cm.weight_h(2, 0.4), rel=1e-12)


# ------------------------------------------------------------ weight_hmum

def test_weight_hmum_coherent_measure():
    for y in (0.2, 1.0, 3.0):
        assert cm.weight_hmum(1, 0, 0, y) == pytest.approx(math.exp(-y) / math.pi, rel=1e-12)


def test_weight_hmum_kummer_value():
    got = cm.weight_hmum(1, 0, 1, 1.0)
    assert got == pytest.approx(exp1_series(1.0) / math.pi, rel=1e-9)


def test_weight_hmum_two_component_case():
    # lam=2, mu=1: the y prefactor exponent vanishes and U(0,1,.) = 1
    for y in (0.25, 1.0):
        assert cm.weight_hmum(2, 1, 0, y) == pytest.approx(
            math.exp(-2 * math.sqrt(y)) / (2 * math.pi), rel=1e-12
        )


def test_weight_hmum_positivity_and_domain():
    with pytest.raises(ValueError):
        cm.weight_hmum(2, 0, 1, 0.0)
    for lam in (1, 2, 3, 4):
        for mu in range(lam):
            for m in (0, 2, 5):
                for y in (0.05, 0.8, 2.5):
                    assert cm.weight_hmum(lam, mu, m, y) > 0.0


# ------------------------------------------------------------ moments

def test_moment_check_reference_values():
    reports = cm.moment_check(cm.WeightFunction("pasvs", 1), 1)
    assert len(reports) == 2
    assert reports[0].lhs == pytest.approx(1.0 / math.pi, rel=1e-12)
    assert reports[0].rhs == pytest.approx(1.0 / math.pi, rel=1e-12)
    # the case separating (m+2k)! from (m+k)!: both sides 2/(3 pi)
    assert reports[1].lhs == pytest.approx(2.0 / (3.0 * math.pi), rel=1e-12)
    assert reports[1].rhs == pytest.approx(2.0 / (3.0 * math.pi), rel=1e-12)


def test_moment_check_would_fail_with_misprinted_reference():
    # regression guard on the corrected factorial: with (m+k)! the k = 1,
    # m = 1 reference would be 4/(pi 2!) = 2/pi, three times the integral
    reports = cm.moment_check(cm.WeightFunction("pasvs", 1), 1)
    misprinted = 4.0 / (math.pi * math.factorial(1 + 1))
    assert abs(reports[1].lhs - misprinted) > 0.1 * misprinted


@pytest.mark.parametrize("m", range(1, 7))
def test_moment_check_pasvs_grid(m):
    reports = cm.moment_check(cm.WeightFunction("pasvs", m), 10)
    assert len(reports) == 11
    assert all(r.converged for r in reports)
    assert max(r.rel_err for r in reports) < 1e-8


@pytest.mark.parametrize("m", range(0, 6))
def test_moment_check_pasops_grid(m):
    reports = cm.moment_check(cm.WeightFunction("pasops", m), 10)
    assert max(r.rel_err for r in reports) < 1e-8


@pytest.mark.parametrize("lam,mu", [(1, 0), (2, 0), (2, 1), (3, 2)])
@pytest.mark.parametrize("m", range(0, 5))
def test_moment_check_pacsc_grid(lam, mu, m):
    reports = cm.moment_check(cm.WeightFunction("pacsc", m, mu=mu, lam=lam), 8)
    assert max(r.rel_err for r in reports) < 1e-8


def test_moment_report_consistency():
    reports = cm.moment_check(cm.WeightFunction("pasvs", 2), 3)
    for r in reports:
        assert r.rel_err == pytest.approx(r.abs_err / abs(r.rhs), rel=1e-12)
        assert r.nodes_used > 0


def test_pacsc_moment_reduces_to_laplace_identity():
    # lam=1, mu=0: int x^k e^{-x} U(m,1,x) dx = (k!)^2/(k+m)!
    reports = cm.moment_check(cm.WeightFunction("pacsc", 2, mu=0, lam=1), 4)
    for r in reports:
        want = math.factorial(r.k) ** 2 / math.factorial(r.k + 2)
        assert r.rhs == pytest.approx(want, rel=1e-12)
        assert r.lhs == pytest.approx(want, rel=1e-9)


# ------------------------------------------------------------ unity

UNITY_CASES = (
    [("pasvs", m, None, None) for m in (1, 2, 3, 4)]
    + [("pasops", m, None, None) for m in (0, 1, 2, 3)]
    + [("pacsc", m, mu, lam) for lam, mu, m in ((1, 0, 1), (2, 0, 2), (2, 1, 1), (3, 2, 2))]
)


@pytest.mark.parametrize("family,m,mu,lam", UNITY_CASES)
def test_unity_resolution_matrices(family, m, mu, lam):
    wf = cm.WeightFunction(family, m, mu=mu, lam=lam)
    mat = cm.unity_resolution_matrix(wf, 12)
    assert mat.dim == 12
    assert mat.identity_deviation() < 1e-6
    assert mat.max_offdiagonal() < 1e-10


def test_unity_matrix_subspace_labels():
    mat = cm.unity_resolution_matrix(cm.WeightFunction("pasvs", 2), 4)
    assert (mat.basis_offset, mat.basis_stride) == (2, 2)
    mat = cm.unity_resolution_matrix(cm.WeightFunction("pasops", 1), 4)
    assert (mat.basis_offset, mat.basis_stride) == (2, 2)
    mat = cm.unity_resolution_matrix(cm.WeightFunction("pacsc", 2, mu=1, lam=3), 4)
    assert (mat.basis_offset, mat.basis_stride) == (3, 3)


def test_unity_matrix_rejects_large_dim():
    with pytest.raises(ValueError):
        cm.unity_resolution_matrix(cm.WeightFunction("pasvs", 1), 65)


# ------------------------------------------------------------ basis matrices

def test_basis_matrices_identity_at_zero():
    p = fs.SqueezeParam(0)
    np.testing.assert_allclose(cm.pasvs_sns_matrix(p, 8), np.eye(8), atol=1e-15)
    np.testing.assert_allclose(cm.sns_pasvs_matrix(p, 8), np.eye(8), atol=1e-15)


def test_basis_matrices_mutual_inverse():
    p = fs.SqueezeParam(0.5 * cmath.exp(1j * math.pi / 4))
    b = cm.pasvs_sns_matrix(p, 12)
    c = cm.sns_pasvs_matrix(p, 12)
    assert np.max(np.abs(b @ c - np.eye(12))) < 1e-10
    assert np.max(np.abs(c @ b - np.eye(12))) < 1e-10


def test_basis_matrix_entries_match_inner_products():
    # row m of the photon-added expansion: entry (m,k) = <k,zeta | zeta,m>
    p = fs.SqueezeParam(0.4 * cmath.exp(-0.6j))
    b = cm.pasvs_sns_matrix(p, 6)
    for m in range(6):
        v = fs.pasvs(p, m, eps=1e-26)
        for k in range(6):
            s = fs.sns(p, k, eps=1e-26)
            assert abs(b[m, k] - fs.inner(s, v)) < 1e-10


def test_basis_matrix_single_entry_row():
    # m = 1 has the single coefficient [(1-y)^(1/2) P_1((1-y)^(-1/2))]^(-1/2)
    p = fs.SqueezeParam(0.3)
    b = cm.pasvs_sns_matrix(p, 3)
    want = ((1 - p.y) ** 0.5 * (1 - p.y) ** -0.5) ** -0.5
    assert b[1, 1] == pytest.approx(want, rel=1e-13)
    assert b[1, 0] == 0.0


# ------------------------------------------------------------ discrete

def test_discrete_matrix_identity_at_zero():
    p = fs.SqueezeParam(0)
    mat = cm.discrete_completeness_matrix(p, 10, 6)
    np.testing.assert_allclose(mat.entries, np.eye(6), atol=1e-15)


def test_discrete_closed_assembly_is_block_exact():
    # with the analytically summed pair coefficients, the truncated double
    # sum already equals the identity on any Fock block the cutoff covers
    p = fs.SqueezeParam(0.3)
    for cutoff in (10, 20, 40):
        mat = cm.discrete_completeness_matrix(p, cutoff, 8, "closed")
        assert mat.identity_deviation() < 1e-10


def test_discrete_assembly_routes_agree():
    p = fs.SqueezeParam(0.3)
    a = cm.discrete_completeness_matrix(p, 20, 8, "closed")
    b = cm.discrete_completeness_matrix(p, 20, 8, "series")
    assert np.max(np.abs(a.entries - b.entries)) < 1e-9


def test_discrete_assembly_routes_agree_complex():
    p = fs.SqueezeParam(0.5 * cmath.exp(1j * 0.8))
    a = cm.discrete_completeness_matrix(p, 16, 6, "closed")
    b = cm.discrete_completeness_matrix(p, 16, 6, "series")
    assert np.max(np.abs(a.entries - b.entries)) < 1e-9


def test_sns_completeness_monotone_convergence():
    p = fs.SqueezeParam(0.3)
    devs = [cm.sns_completeness_matrix(p, cutoff, 8).identity_deviation() for cutoff in (10, 20, 40)]
    assert devs[0] > devs[1] > devs[2]


def test_discrete_domain_guards():
    with pytest.raises(ValueError):
        cm.discrete_completeness_matrix(fs.SqueezeParam(0.6), 10, 8)
    with pytest.raises(ValueError):
        cm.discrete_completeness_matrix(fs.SqueezeParam(0.3), 100, 8)
    with pytest.raises(ValueError):
        cm.discrete_completeness_matrix(fs.SqueezeParam(0.3), 10, 8, "nope")


# ------------------------------------------------------------ carleman

def test_carleman_exact_small_case():
    # k = 10, m = 1 from exact integer factorials
    k, m = 10, 1
    a_k = (sf_dfact(2 * k) ** 2 / (math.pi * math.factorial(m + 2 * k))) ** (-1.0 / (2 * k))
    (kk, ratio), = cm.carleman_sequence(m, [k])
    assert kk == k
    assert ratio == pytest.approx(math.log(a_k) / math.log(k), rel=1e-12)


def sf_dfact(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_carleman_ratio_shrinks_to_zero(m):
    seq = cm.carleman_sequence(m, [10, 100, 1000, 10000])
    mags = [abs(r) for _, r in seq]
    assert all(mags[i] > mags[i + 1] for i in range(3))
    assert mags[2] < 0.01


def test_carleman_rejects_small_k():
    with pytest.raises(ValueError):
        cm.carleman_sequence(2, [1])


# ------------------------------------------------------------ operator matrix

def test_operator_matrix_rejects_non_hermitian():
    bad = np.array([[1.0, 1.0], [0.0, 1.0]], dtype=complex)
    with pytest.raises(ArithmeticError):
        cm.OperatorMatrix(0, 1, 2, bad)


def test_operator_matrix_shape_guard():
    with pytest.raises(ValueError):
        cm.OperatorMatrix(0, 1, 3, np.eye(2, dtype=complex))
