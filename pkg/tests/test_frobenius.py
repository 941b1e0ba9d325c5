import cmath
from types import SimpleNamespace

import numpy as np
import pytest

from jacobi_orbit.errors import DomainError, JacobianSingular, PoleError
from jacobi_orbit.forms import phi0, phi1
from jacobi_orbit.frobenius import (FlatPoint, canonical_spectrum, char_poly, det_jacobian,
                                    det_jacobian_fd, domain_from_flat, entrywise_relative,
                                    euler_defect, euler_multiplication_residual, euler_residual,
                                    flat_from_domain, free_energy, free_energy_gradient,
                                    free_energy_hessian, intersection_form_domain,
                                    intersection_form_flat, intersection_form_pushforward,
                                    metric_degrees, metric_potential, metric_potential_residual,
                                    saito_metric, saito_metric_lower, structure_constants,
                                    third_derivatives, third_derivatives_analytic,
                                    third_derivatives_fd, wdvv_residual, wdvv_tensor)
from jacobi_orbit.group import DomainPoint
from jacobi_orbit.numdiff import central_diff
from jacobi_orbit.sampling import Sampler, make_rng
from jacobi_orbit.special import PI, theta1, theta1_dv

# mpmath reference values (40 digits)
P = DomainPoint(0.05j, 0.2 + 0.05j, 0.3 - 0.02j, 0.1 + 1.5j)
FLAT_REF = [1.3693281548733054 - 0.00013415959725525595j, 0.1404058818372691 - 0.10199427948921647j,
            0.3 - 0.02j, 0.1 + 1.5j]
G_REF_UPPER = {
    (0, 0): 0.023831861280902533 - 0.014506470519582523j,
    (0, 1): 0.0008918865189720226 - 0.0012603257450388065j,
    (0, 2): -0.002029064956175783 - 0.0001654453205541474j,
    (0, 3): -0.000842949610291355 - 8.603742543407286j,
    (1, 1): -0.14950847160315225 + 0.6285733734374719j,
    (1, 2): -0.7814093658673825 + 0.16328071364645166j,
    (1, 3): -0.6408489583030132 - 0.8821961738015223j,
    (2, 2): -0.5, (2, 3): 0, (3, 3): 0,
}
T = FlatPoint(0.7 - 0.3j, 0.9 + 0.4j, 0.21 + 0.07j, -0.15 + 1.1j)
F_REF = -0.814601800738572 - 1.0445259963372127j
C_REF = {
    (1, 1, 1): -1.8556701030927834 + 0.8247422680412371j,
    (1, 1, 2): 2.6296866985471183 - 5.53020309479359j,
    (1, 2, 2): -67.31574499390685 - 13.819227192378149j,
    (1, 2, 3): 0.338899398858705 + 0.04721555402908058j,
    (1, 3, 3): -0.33712718422578825 + 0.1103400993138541j,
    (2, 2, 2): 176.76002513354516 - 93.28872478857441j,
    (2, 2, 3): 0.6635042818921387 - 2.4400274261034363j,
    (2, 3, 3): -0.558642841822066 + 0.8952599188080168j,
    (3, 3, 3): 0.10775377433742284 - 1.0925460181714655j,
}


def full(upper):
    G = np.zeros((4, 4), dtype=complex)
    for (a, b), v in upper.items():
        G[a, b] = G[b, a] = v
    return G


def flat_points(n, seed=7):
    s = Sampler(make_rng(seed, 0))
    return [s.flat_point() for _ in range(n)]


def domain_points(n, seed=7):
    s = Sampler(make_rng(seed, 1))
    return [s.domain_point() for _ in range(n)]


# ---------------------------------------------------------------- FlatPoint

def test_flat_point_validation():
    with pytest.raises(DomainError):
        FlatPoint(1, 1, 0.2, -1j)
    with pytest.raises(DomainError):
        FlatPoint(1, 0, 0.2, 1j)
    with pytest.raises(PoleError):
        FlatPoint(1, 1, 0.5, 1j)


def test_flat_point_array_round_trip():
    assert FlatPoint.from_array(T.as_array()) == T
    assert T.shifted(0, 1.0).t1 == T.t1 + 1


# ---------------------------------------------------------------- coordinates

def test_flat_from_domain_reference():
    t = flat_from_domain(P)
    assert np.max(np.abs(t.as_array() - np.array(FLAT_REF))) < 1e-12
    assert t.t3 == P.v2 and t.t4 == P.tau


def test_flat_t1_theta_quotient_form():
    u, v0, v2, tau = P.as_tuple()
    t = flat_from_domain(P)
    alt = (theta1(v0, tau) ** 2 / theta1(v2, tau) ** 2 * cmath.exp(-2j * PI * u)
           + 2 * t.t2 * theta1_dv(v2, tau, 1) / theta1(v2, tau))
    assert abs(t.t1 - alt) <= 1e-9 * abs(alt)


def test_flat_t2_sign_identity():
    u, v0, v2, tau = P.as_tuple()
    alt = (-theta1(v0 + v2, tau) * theta1(v0 - v2, tau) / (theta1(2 * v2, tau) * theta1_dv(0, tau, 1))
           * cmath.exp(-2j * PI * u))
    assert abs(flat_from_domain(P).t2 - alt) < 1e-12


@pytest.mark.parametrize("p", domain_points(5))
def test_round_trip(p):
    t = flat_from_domain(p)
    guess = p.replace(u=p.u + 0.01, v0=p.v0 + 0.01)
    back = domain_from_flat(t, guess)
    assert np.max(np.abs(flat_from_domain(back).as_array() - t.as_array())) < 1e-8
    assert abs(back.v0 - p.v0) < 1e-8 and abs(back.u - p.u) < 1e-8


def test_inversion_singular_at_v0_zero():
    p = DomainPoint(0.05, 0.0, 0.3, 1.2j)
    t = flat_from_domain(p)
    # both t1 and t2 are even in v0, so d/dv0 vanishes on v0 = 0
    with pytest.raises(JacobianSingular):
        domain_from_flat(t, p.replace(u=p.u + 0.01))


def test_inversion_perturbation_stability():
    t = flat_from_domain(P)
    a = domain_from_flat(t, P)
    b = domain_from_flat(t.shifted(0, 1e-6), a)
    d = max(abs(a.u - b.u), abs(a.v0 - b.v0))
    assert 1e-8 < d < 1e-4


# ---------------------------------------------------------------- metrics

def test_intersection_form_domain():
    G = intersection_form_domain()
    assert np.array_equal(G, G.T)
    lower = np.array([[0, 0, 0, 1], [0, 2, 0, 0], [0, 0, -2, 0], [1, 0, 0, 0]])
    assert np.allclose(np.linalg.inv(G), lower, atol=1e-15)
    # det = -(1/2)(-1/2) from the u-tau swap and the diagonal block
    assert abs(np.linalg.det(G) - 0.25) < 1e-15


def test_pushforward_reference():
    G = intersection_form_pushforward(P)
    assert entrywise_relative(G, full(G_REF_UPPER)) < 1e-7
    assert np.max(np.abs(G - G.T)) < 1e-8
    assert abs(G[2, 2] + 0.5) < 1e-8
    t1 = flat_from_domain(P).t1
    assert abs(G[0, 3] - (-2j * PI * t1)) <= 1e-6 * abs(t1)


def test_flat_form_reference():
    G = intersection_form_flat(flat_from_domain(P))
    assert entrywise_relative(G, full(G_REF_UPPER)) < 1e-8
    assert np.array_equal(G, G.T)


@pytest.mark.parametrize("p", domain_points(20, seed=11))
def test_flat_form_matches_pushforward(p):
    G = intersection_form_flat(flat_from_domain(p))
    assert entrywise_relative(G, intersection_form_pushforward(p)) < 1e-6


def test_flat_form_structure():
    G = intersection_form_flat(T)
    assert G[2, 2] == -0.5
    assert G[3, 3] == 0 and G[2, 3] == 0
    assert abs(G[1, 3] - (-2j * PI * T.t2)) < 1e-14
    assert abs(G[0, 3] - (-2j * PI * T.t1)) < 1e-14


def test_g23_specialization_at_t1_zero():
    t = FlatPoint(0, T.t2, T.t3, T.t4)
    r = theta1_dv(2 * t.t3, t.t4, 1) / theta1(2 * t.t3, t.t4)
    assert abs(intersection_form_flat(t)[1, 2] - t.t2 * r) < 1e-12


def test_saito_metric_entries():
    eta = saito_metric()
    expect = np.zeros((4, 4), dtype=complex)
    expect[0, 3] = expect[3, 0] = -2j * PI
    expect[1, 2] = expect[2, 1] = -0.5
    assert np.array_equal(eta, expect)
    low = saito_metric_lower()
    assert abs(low[0, 3] - 1j / (2 * PI)) < 1e-15 and abs(low[1, 2] + 2) < 1e-15
    assert np.allclose(low @ eta, np.eye(4), atol=1e-15)


@pytest.mark.parametrize("t", flat_points(10))
def test_saito_metric_is_t1_derivative(t):
    d = central_diff(lambda s: intersection_form_flat(t.shifted(0, s)), 0.0, 1e-4)
    assert np.max(np.abs(d - saito_metric())) < 1e-7


# ---------------------------------------------------------------- free energy

def test_free_energy_reference():
    assert abs(free_energy(T) - F_REF) < 1e-12


def test_free_energy_gradient_and_hessian_match_differences():
    a = T.as_array()
    for i in range(4):
        e = np.zeros(4)
        e[i] = 1
        d = central_diff(lambda s: free_energy(FlatPoint.from_array(a + s * e)), 0.0, 1e-4)
        assert abs(d - free_energy_gradient(T)[i]) < 1e-8 * max(1.0, abs(d))
        dg = central_diff(lambda s: free_energy_gradient(FlatPoint.from_array(a + s * e)), 0.0, 1e-4)
        assert np.max(np.abs(dg - free_energy_hessian(T)[i])) < 1e-7 * max(1.0, np.max(np.abs(dg)))


def test_free_energy_pole():
    # duck-typed point skips FlatPoint validation
    with pytest.raises(PoleError):
        free_energy(SimpleNamespace(t1=1, t2=1, t3=0.5, t4=1.2j))
    with pytest.raises(PoleError):
        FlatPoint(1, 1, 0.5, 1.2j)


def test_third_derivatives_reference():
    C = third_derivatives(T)
    for (a, b, c), v in C_REF.items():
        assert abs(C[a, b, c] - v) <= 1e-10 * max(1.0, abs(v))


def test_third_derivative_constants():
    C = third_derivatives(T)
    assert C[0, 0, 3] == 1j / (2 * PI)
    assert C[0, 1, 2] == -2
    assert abs(C[1, 1, 1] - (-2 / T.t2)) < 1e-15
    assert np.allclose(C[0], saito_metric_lower(), atol=1e-14)


def test_third_derivatives_symmetric():
    C = third_derivatives(T)
    for perm in [(1, 0, 2), (0, 2, 1), (2, 1, 0), (1, 2, 0)]:
        assert np.max(np.abs(C - C.transpose(perm))) < 1e-9


@pytest.mark.parametrize("t", flat_points(5, seed=3))
def test_third_derivatives_fd_oracle(t):
    A = third_derivatives_analytic(t)
    B = third_derivatives_fd(t)
    assert np.max(np.abs(A - B)) / np.max(np.abs(A)) < 1e-6


def test_third_derivatives_method_switch():
    fd = third_derivatives_fd(T)
    assert np.allclose(third_derivatives(T, method="fd"), (fd + fd.transpose(1, 0, 2)
                       + fd.transpose(2, 1, 0) + fd.transpose(0, 2, 1) + fd.transpose(1, 2, 0)
                       + fd.transpose(2, 0, 1)) / 6, rtol=0, atol=1e-14)
    with pytest.raises(ValueError):
        third_derivatives(T, method="symbolic")


@pytest.mark.parametrize("branch", [-1, 1])
def test_branch_independence(branch):
    a = third_derivatives_fd(T, branch=0)
    b = third_derivatives_fd(T, branch=branch)
    assert np.max(np.abs(a - b)) / np.max(np.abs(a)) < 1e-6
    assert abs(free_energy(T, branch=branch) - free_energy(T)
               + 2j * PI * branch * T.t2 ** 2) < 1e-12


# ---------------------------------------------------------------- WDVV

def test_unit_axiom():
    Cs = structure_constants(T)
    assert np.allclose(Cs[0], np.eye(4), atol=1e-8)
    rng = np.random.default_rng(0)
    for _ in range(2):
        x = rng.normal(size=4) + 1j * rng.normal(size=4)
        assert np.allclose(np.einsum("b,bg->g", x, Cs[0]), x, atol=1e-12)


@pytest.mark.parametrize("t", flat_points(20, seed=5))
def test_wdvv_associativity(t):
    assert wdvv_residual(t) < 1e-5


def test_wdvv_index_one_components_vanish():
    W = wdvv_tensor(structure_constants(T))
    assert np.max(np.abs(W[0])) < 1e-12 and np.max(np.abs(W[:, :, 0])) < 1e-12


def test_wdvv_stable_under_t1_shift():
    assert abs(wdvv_residual(T) - wdvv_residual(T.shifted(0, 1.0))) < 1e-12


def test_wdvv_detects_perturbation():
    C = third_derivatives(T).copy()
    C[1, 1, 1] += 0.5
    Cs = np.einsum("gd,abd->abg", saito_metric(), C)
    W = wdvv_tensor(Cs)
    assert np.max(np.abs(W)) / np.max(np.abs(Cs)) ** 2 > 1e-5


@pytest.mark.parametrize("t", flat_points(10, seed=9))
def test_quasi_homogeneity(t):
    assert euler_residual(t) < 1e-7


def test_euler_polynomial_and_log_parts():
    # the polynomial part is homogeneous of degree 2; the log term shifts by -(t2)^2
    t = T
    assert abs(euler_defect(t) + t.t2 ** 2) < 1e-12
    poly = lambda x: 1j / (4 * PI) * x[0] ** 2 * x[3] - 2 * x[0] * x[1] * x[2]
    a = t.as_array()
    assert abs(a[0] * (1j / (2 * PI) * a[0] * a[3] - 2 * a[1] * a[2])
               + a[1] * (-2 * a[0] * a[2]) - 2 * poly(a)) < 1e-14


def test_euler_other_display_is_violated():
    # E(F) = 2F - 2 t2 does not hold
    assert abs(euler_defect(T) + 2 * T.t2) > 1e-2


@pytest.mark.parametrize("t", flat_points(10, seed=13))
def test_euler_multiplication_is_intersection_form(t):
    assert euler_multiplication_residual(t) < 1e-6


# ---------------------------------------------------------------- det and spectrum

def test_det_jacobian_zeros():
    tau = 0.1 + 1.2j
    for v0 in (0.0, 0.5, tau / 2, (1 + tau) / 2):
        assert abs(det_jacobian(DomainPoint(0.05, v0, 0.3, tau))) < 1e-10


def test_det_jacobian_nonzero_generic():
    assert abs(det_jacobian(P)) > 1e-3


@pytest.mark.parametrize("p", domain_points(5, seed=17))
def test_det_jacobian_matches_fd(p):
    fd = det_jacobian_fd(p)
    assert abs(det_jacobian(p) - fd) <= 1e-6 * abs(fd)


def test_det_jacobian_with_extra_theta_prime_factor_fails():
    fd = det_jacobian_fd(P)
    alt = det_jacobian(P) / theta1_dv(0, P.tau, 1) ** 2
    assert abs(alt - fd) > 1e-2 * abs(fd)


def test_det_jacobian_grid_has_no_other_zeros():
    tau, n = 0.1 + 1.2j, 50
    halves = [0, 0.5, tau / 2, (1 + tau) / 2, 1, tau, 1 + tau, 0.5 + tau, 1 + tau / 2]
    smallest = np.inf
    for x in np.linspace(0, 1, n):
        for y in np.linspace(0, 1, n):
            v0 = x + y * tau
            if min(abs(v0 - h) for h in halves) < 0.05:
                continue
            smallest = min(smallest, abs(det_jacobian(DomainPoint(0.05, v0, 0.3, tau))))
    assert smallest > 1e-4


def test_char_poly_matches_numpy():
    M = np.arange(16).reshape(4, 4) + 1j * np.eye(4)
    assert np.allclose(char_poly(M), np.poly(M), atol=1e-9)


@pytest.mark.parametrize("t", flat_points(10, seed=19))
def test_spectrum_semisimple_and_trace(t):
    u = canonical_spectrum(t)
    gaps = [abs(u[i] - u[j]) for i in range(4) for j in range(i + 1, 4)]
    assert min(gaps) > 1e-6
    M = saito_metric_lower() @ intersection_form_flat(t)
    assert abs(np.trace(M) - u.sum()) < 1e-8 * max(1.0, abs(u.sum()))


def test_spectrum_ordering():
    u = canonical_spectrum(T)
    keys = [(z.real, z.imag) for z in u]
    assert keys == sorted(keys)


def test_spectrum_shift_covariance():
    s = 0.37 - 0.2j
    a = canonical_spectrum(T)
    b = canonical_spectrum(T.shifted(0, s))
    assert np.max(np.abs(np.sort_complex(b - s) - np.sort_complex(a))) < 1e-8


# ---------------------------------------------------------------- potentiality

def test_metric_degrees():
    d = metric_degrees()
    assert d[0, 0] == 2 and d[0, 3] == 1 and d[2, 3] == 0


def test_potential_hand_pairs():
    H = free_energy_hessian(T)
    g = intersection_form_flat(T)
    r = theta1_dv(2 * T.t3, T.t4, 1) / theta1(2 * T.t3, T.t4)
    assert abs(0.25 * H[2, 1] - (-T.t1 / 2 + T.t2 * r)) < 1e-12
    assert abs(0.25 * H[2, 1] - g[1, 2]) < 1e-12
    assert abs((-2j * PI) ** 2 * (1j / (2 * PI)) * T.t1 - g[0, 3]) < 1e-12
    assert abs(metric_potential(T)[0, 3] - g[0, 3]) < 1e-12


@pytest.mark.parametrize("t", flat_points(20, seed=23))
def test_potentiality(t):
    assert metric_potential_residual(t) < 1e-6


def test_entrywise_relative():
    B = np.array([1.0, 1e-9, -2.0])
    assert entrywise_relative(B, B) == 0
    assert entrywise_relative(B + np.array([0, 1e-6, 0]), B) == pytest.approx(1e-6 / 2e-3)
