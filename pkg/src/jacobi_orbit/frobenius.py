"""Flat coordinates, metrics, free energy and WDVV quantities.

Flat coordinates on the orbit space are

    t1 = phi0 + 2 t2 theta1'(v2)/theta1(v2),   t2 = phi1,   t3 = v2,   t4 = tau,

and the free energy is

    F = (i/(4 pi)) t1^2 t4 - 2 t1 t2 t3 - t2^2 log(t2 theta1'(0, t4) / theta1(2 t3, t4)).

All arrays are indexed 0..3 for t1..t4.  Derivatives of
``X(t3, t4) = log theta1'(0, t4) - log theta1(2 t3, t4)`` are obtained from
term-wise theta derivatives through a truncated Taylor-jet logarithm, so no
closed-form quantity here relies on finite differences.
"""

from __future__ import annotations

import cmath
import itertools
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, JacobianSingular, NoConvergence, PoleError
from .forms import phi0, phi1
from .group import DomainPoint
from .special import (PI, POLE_GUARD, SeriesConfig, lattice_distance, log_jet,
                      theta1, theta1_dv, theta1_jet)
from . import numdiff

#: deg(t1), deg(t2), deg(t3), deg(t4) under the Euler field t1 d1 + t2 d2
DEGREES = (1, 1, 0, 0)
EULER_WEIGHTS = np.array([1.0, 1.0, 0.0, 0.0])


@dataclass(frozen=True)
class FlatPoint:
    """Flat coordinates (t1, t2, t3, t4)."""

    t1: complex
    t2: complex
    t3: complex
    t4: complex

    def __post_init__(self):
        for name in ("t1", "t2", "t3", "t4"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        if not self.t4.imag > 0:
            raise DomainError(f"Im(t4) must be positive, got t4={self.t4!r}")
        if self.t2 == 0:
            raise DomainError("t2 must be nonzero")
        if lattice_distance(2 * self.t3, self.t4) < POLE_GUARD:
            raise PoleError(f"t3 = {self.t3!r} is at a half-lattice point")

    def as_array(self) -> np.ndarray:
        return np.array([self.t1, self.t2, self.t3, self.t4], dtype=complex)

    @classmethod
    def from_array(cls, a) -> "FlatPoint":
        return cls(*[complex(x) for x in a])

    def shifted(self, index: int, s) -> "FlatPoint":
        a = self.as_array()
        a[index] += s
        return FlatPoint.from_array(a)


def _log_theta_jet(x, tau, nv, nt, cfg) -> np.ndarray:
    if lattice_distance(x, tau) < POLE_GUARD:
        raise PoleError(f"theta1 vanishes at {complex(x)!r}")
    return log_jet(theta1_jet(x, tau, nv, nt, cfg), order=nv + nt)


def _x_jet(t3, t4, cfg) -> np.ndarray:
    """X[a, b] = d^a/dt3^a d^b/dt4^b X(t3, t4) for a + b <= 3 (X[0, 0] unused)."""
    lam = _log_theta_jet(2 * complex(t3), t4, 3, 3, cfg)
    p = log_jet(theta1_jet(0.0, t4, 1, 3, cfg)[1:2, :], order=3)
    scale = (2.0 ** np.arange(4))[:, None]
    x = -scale * lam
    x[0, :] += p[0, :]
    return x


# ---------------------------------------------------------------- coordinates

def flat_from_domain(p: DomainPoint, cfg: SeriesConfig | None = None) -> FlatPoint:
    """Flat coordinates of a domain point."""
    t2 = phi1(p, cfg)
    r = theta1_dv(p.v2, p.tau, 1, cfg) / theta1(p.v2, p.tau, cfg)
    t1 = phi0(p, cfg) + 2 * t2 * r
    return FlatPoint(t1, t2, p.v2, p.tau)


def _flat_jacobian_uv0(u, v0, v2, tau, cfg):
    """Values (t1, t2) and their derivatives in (u, v0), analytically."""
    e = cmath.exp(-2j * PI * u)
    J0 = theta1_jet(v0, tau, 1, 0, cfg)[:, 0]
    Jp = theta1_jet(v0 + v2, tau, 1, 0, cfg)[:, 0]
    Jm = theta1_jet(v2 - v0, tau, 1, 0, cfg)[:, 0]
    J2 = theta1_jet(v2, tau, 1, 0, cfg)[:, 0]
    th2v2 = theta1(2 * v2, tau, cfg)
    d0 = theta1_dv(0.0, tau, 1, cfg)
    r2 = J2[1] / J2[0]
    t2 = e * Jp[0] * Jm[0] / (d0 * th2v2)
    ph0 = e * J0[0] ** 2 / J2[0] ** 2
    t1 = ph0 + 2 * t2 * r2
    dt2 = e * (Jp[1] * Jm[0] - Jp[0] * Jm[1]) / (d0 * th2v2)
    dph0 = e * 2 * J0[0] * J0[1] / J2[0] ** 2
    dt1 = dph0 + 2 * dt2 * r2
    jac = np.array([[-2j * PI * t1, dt1], [-2j * PI * t2, dt2]])
    return np.array([t1, t2]), jac


def domain_from_flat(t: FlatPoint, guess: DomainPoint, cfg: SeriesConfig | None = None,
                     tol: float = 1e-10, max_iter: int = 50) -> DomainPoint:
    """Invert :func:`flat_from_domain` by Newton iteration on (u, v0).

    ``v2 = t3`` and ``tau = t4`` are fixed; ``guess`` supplies the starting
    (u, v0) and must lie in the basin of the wanted preimage.

    Raises:
        NoConvergence: if the residual is not below ``tol`` after
            ``max_iter`` iterations.
        JacobianSingular: on the degenerate locus (v0 at a half period).
    """
    target = np.array([t.t1, t.t2])
    x = np.array([guess.u, guess.v0], dtype=complex)
    scale = max(1.0, float(np.max(np.abs(target))))
    for _ in range(max_iter):
        val, jac = _flat_jacobian_uv0(x[0], x[1], t.t3, t.t4, cfg)
        res = val - target
        if np.max(np.abs(res)) < tol * scale:
            return DomainPoint(x[0], x[1], t.t3, t.t4)
        det = jac[0, 0] * jac[1, 1] - jac[0, 1] * jac[1, 0]
        size = abs(jac[0, 0] * jac[1, 1]) + abs(jac[0, 1] * jac[1, 0])
        if not np.isfinite(det) or abs(det) <= 1e-12 * max(size, 1e-300):
            raise JacobianSingular(f"Jacobian of (t1, t2) in (u, v0) is singular at v0={x[1]!r}")
        x = x - np.linalg.solve(jac, res)
    raise NoConvergence(f"Newton inversion did not converge in {max_iter} iterations")


# -------------------------------------------------------------------- metrics

def intersection_form_domain() -> np.ndarray:
    """Contravariant form in coordinates (u, v0, v2, tau)."""
    g = np.zeros((4, 4), dtype=complex)
    g[0, 3] = g[3, 0] = 1.0
    g[1, 1] = 0.5
    g[2, 2] = -0.5
    return g


def flat_jacobian(p: DomainPoint, cfg: SeriesConfig | None = None, h: float = 1e-5) -> np.ndarray:
    """d t^alpha / d (u, v0, v2, tau) by Richardson-accelerated central differences."""
    x0 = np.array(p.as_tuple(), dtype=complex)

    def f(x):
        return flat_from_domain(DomainPoint(*x), cfg).as_array()

    return numdiff.jacobian(f, x0, h)


def intersection_form_pushforward(p: DomainPoint, cfg: SeriesConfig | None = None,
                                  h: float = 1e-5) -> np.ndarray:
    """J G J^T with J the finite-difference Jacobian of the flat coordinates."""
    J = flat_jacobian(p, cfg, h)
    g = J @ intersection_form_domain() @ J.T
    return 0.5 * (g + g.T)


def intersection_form_flat(t: FlatPoint, cfg: SeriesConfig | None = None) -> np.ndarray:
    """Closed-form intersection form g^{alpha beta} in flat coordinates."""
    t1, t2, t3, t4 = t.t1, t.t2, t.t3, t.t4
    X = _x_jet(t3, t4, cfg)
    L2 = _log_theta_jet(2 * t3, t4, 2, 0, cfg)  # log theta1 at 2 t3
    L1 = _log_theta_jet(t3, t4, 2, 1, cfg)  # log theta1 at t3
    r2, R2 = L2[1, 0], L2[2, 0]
    z1, dz1, dz1t = L1[1, 0], L1[2, 0], L1[1, 1]
    s = t2 * t2
    g = np.zeros((4, 4), dtype=complex)
    g[2, 2] = -0.5
    g[1, 3] = -2j * PI * t2
    g[0, 3] = -2j * PI * t1
    g[1, 2] = -t1 / 2 + t2 * r2
    g[0, 2] = -2j * PI * t2 * X[0, 1]
    g[1, 1] = 2 * s * R2
    g[0, 1] = -2j * PI * s * X[1, 1]
    g[0, 0] = (-4 * s * z1 * dz1 * (2 * z1 - 2 * r2)
               + 8 * z1 * z1 * s * R2
               - 2 * s * dz1 * dz1
               - 16j * PI * s * z1 * dz1t)
    iu = np.triu_indices(4, 1)
    g[(iu[1], iu[0])] = g[iu]
    return g


def saito_metric() -> np.ndarray:
    """Constant metric eta^{alpha beta} = d g^{alpha beta} / d t1."""
    eta = np.zeros((4, 4), dtype=complex)
    eta[0, 3] = eta[3, 0] = -2j * PI
    eta[1, 2] = eta[2, 1] = -0.5
    return eta


def saito_metric_lower() -> np.ndarray:
    """Inverse matrix eta_{alpha beta}."""
    eta = np.zeros((4, 4), dtype=complex)
    eta[0, 3] = eta[3, 0] = 1j / (2 * PI)
    eta[1, 2] = eta[2, 1] = -2.0
    return eta


# ---------------------------------------------------------------- free energy

def free_energy(t: FlatPoint, cfg: SeriesConfig | None = None, branch: int = 0) -> complex:
    """F(t) on the principal branch of the logarithm, shifted by ``2 pi i branch``."""
    t1, t2, t3, t4 = t.t1, t.t2, t.t3, t.t4
    if lattice_distance(2 * t3, t4) < POLE_GUARD:
        raise PoleError(f"theta1(2 t3) vanishes at t3={t3!r}")
    arg = t2 * theta1_dv(0.0, t4, 1, cfg) / theta1(2 * t3, t4, cfg)
    log = cmath.log(arg) + 2j * PI * branch
    return 1j / (4 * PI) * t1 * t1 * t4 - 2 * t1 * t2 * t3 - t2 * t2 * log


def free_energy_gradient(t: FlatPoint, cfg: SeriesConfig | None = None) -> np.ndarray:
    """First partials of F (principal branch)."""
    t1, t2, t3, t4 = t.t1, t.t2, t.t3, t.t4
    X = _x_jet(t3, t4, cfg)
    ell = cmath.log(t2 * theta1_dv(0.0, t4, 1, cfg) / theta1(2 * t3, t4, cfg))
    return np.array([
        1j / (2 * PI) * t1 * t4 - 2 * t2 * t3,
        -2 * t1 * t3 - 2 * t2 * ell - t2,
        -2 * t1 * t2 - t2 * t2 * X[1, 0],
        1j / (4 * PI) * t1 * t1 - t2 * t2 * X[0, 1],
    ])


def free_energy_hessian(t: FlatPoint, cfg: SeriesConfig | None = None) -> np.ndarray:
    """Second partials of F (principal branch)."""
    t1, t2, t3, t4 = t.t1, t.t2, t.t3, t.t4
    X = _x_jet(t3, t4, cfg)
    ell = cmath.log(t2 * theta1_dv(0.0, t4, 1, cfg) / theta1(2 * t3, t4, cfg))
    H = np.zeros((4, 4), dtype=complex)
    H[0, 0] = 1j / (2 * PI) * t4
    H[0, 1] = -2 * t3
    H[0, 2] = -2 * t2
    H[0, 3] = 1j / (2 * PI) * t1
    H[1, 1] = -2 * ell - 3
    H[1, 2] = -2 * t1 - 2 * t2 * X[1, 0]
    H[1, 3] = -2 * t2 * X[0, 1]
    H[2, 2] = -t2 * t2 * X[2, 0]
    H[2, 3] = -t2 * t2 * X[1, 1]
    H[3, 3] = -t2 * t2 * X[0, 2]
    iu = np.triu_indices(4, 1)
    H[(iu[1], iu[0])] = H[iu]
    return H


def _symmetrize(c: np.ndarray) -> np.ndarray:
    out = np.zeros_like(c)
    for perm in itertools.permutations(range(3)):
        out += np.transpose(c, perm)
    return out / 6


def third_derivatives_analytic(t: FlatPoint, cfg: SeriesConfig | None = None) -> np.ndarray:
    """All third partials of F in closed form.

    Per entry (1-based indices):

    * c_114 = i/(2 pi), c_123 = -2, every other entry with an index 1 is 0;
    * c_222 = -2/t2;
    * c_22j = -2 X_j and c_2jk = -2 t2 X_jk for j, k in {3, 4};
    * c_jkl = -t2^2 X_jkl for j, k, l in {3, 4},

    where X = log theta1'(0, t4) - log theta1(2 t3, t4).
    """
    t2 = t.t2
    X = _x_jet(t.t3, t.t4, cfg)
    c = np.zeros((4, 4, 4), dtype=complex)
    c[0, 0, 3] = 1j / (2 * PI)
    c[0, 1, 2] = -2.0
    c[1, 1, 1] = -2 / t2
    for j in (2, 3):
        a = int(j == 2)
        c[1, 1, j] = -2 * X[a, 1 - a]
    for j, k in itertools.combinations_with_replacement((2, 3), 2):
        a = (j == 2) + (k == 2)
        c[1, j, k] = -2 * t2 * X[a, 2 - a]
    for j, k, l in itertools.combinations_with_replacement((2, 3), 3):
        a = (j == 2) + (k == 2) + (l == 2)
        c[j, k, l] = -t2 * t2 * X[a, 3 - a]
    # fill by symmetry from the sorted representatives
    full = np.zeros_like(c)
    for idx in itertools.product(range(4), repeat=3):
        full[idx] = c[tuple(sorted(idx))]
    return full


_D1 = ((-2, 1.0), (-1, -8.0), (1, 8.0), (2, -1.0)), 12.0
_D2 = ((-2, -1.0), (-1, 16.0), (0, -30.0), (1, 16.0), (2, -1.0)), 12.0
_D3 = ((-3, 1.0), (-2, -8.0), (-1, 13.0), (1, -13.0), (2, 8.0), (3, -1.0)), 8.0


def third_derivatives_fd(t: FlatPoint, cfg: SeriesConfig | None = None, h: float = 1e-3,
                         branch: int = 0) -> np.ndarray:
    """All third partials of F by 4th-order central finite differences.

    Independent of the closed forms; serves as their oracle.  Each entry uses
    a tensor product of 1-D stencils matched to the index multiplicities.
    """
    x0 = t.as_array()
    cache: dict = {}

    def F(offsets):
        key = tuple(offsets)
        if key not in cache:
            cache[key] = free_energy(FlatPoint.from_array(x0 + h * np.array(key)), cfg, branch)
        return cache[key]

    stencils = {1: _D1, 2: _D2, 3: _D3}
    c = np.zeros((4, 4, 4), dtype=complex)
    for idx in itertools.combinations_with_replacement(range(4), 3):
        mult: dict = {}
        for i in idx:
            mult[i] = mult.get(i, 0) + 1
        axes = list(mult.items())
        total = 0j
        denom = 1.0
        for _, m in axes:
            denom *= stencils[m][1] * h ** m
        for combo in itertools.product(*[stencils[m][0] for _, m in axes]):
            off = [0, 0, 0, 0]
            w = 1.0
            for (axis, _), (step, weight) in zip(axes, combo):
                off[axis] = step
                w *= weight
            total += w * F(off)
        val = total / denom
        for perm in set(itertools.permutations(idx)):
            c[perm] = val
    return c


def third_derivatives(t: FlatPoint, cfg: SeriesConfig | None = None, method: str = "analytic") -> np.ndarray:
    """Totally symmetric tensor c_{alpha beta gamma} = d^3 F.

    ``method="analytic"`` uses the closed forms, ``method="fd"`` finite
    differences of F.
    """
    if method == "analytic":
        c = third_derivatives_analytic(t, cfg)
    elif method == "fd":
        c = third_derivatives_fd(t, cfg)
    else:
        raise ValueError(f"unknown method {method!r}")
    return _symmetrize(c)


def structure_constants(t: FlatPoint, cfg: SeriesConfig | None = None, method: str = "analytic") -> np.ndarray:
    """C[alpha, beta, gamma] = c^gamma_{alpha beta} = eta^{gamma delta} c_{alpha beta delta}."""
    c = third_derivatives(t, cfg, method)
    return np.einsum("abd,gd->abg", c, saito_metric())


def wdvv_tensor(C: np.ndarray) -> np.ndarray:
    """Associator A[a, b, g, d] = C[a,b,m] C[m,g,d] - C[g,b,m] C[m,a,d]."""
    left = np.einsum("abm,mgd->abgd", C, C)
    return left - np.transpose(left, (2, 1, 0, 3))


def wdvv_residual(t: FlatPoint, cfg: SeriesConfig | None = None, method: str = "analytic") -> float:
    """Max associator entry over (max |c^gamma_{alpha beta}|)^2."""
    C = structure_constants(t, cfg, method)
    scale = float(np.max(np.abs(C))) ** 2
    return float(np.max(np.abs(wdvv_tensor(C)))) / scale


def euler_defect(t: FlatPoint, cfg: SeriesConfig | None = None) -> complex:
    """E(F) - 2F with E = t1 d1 + t2 d2; equals -(t2)^2 exactly."""
    grad = free_energy_gradient(t, cfg)
    return t.t1 * grad[0] + t.t2 * grad[1] - 2 * free_energy(t, cfg)


def euler_residual(t: FlatPoint, cfg: SeriesConfig | None = None) -> float:
    """|t1 d1F + t2 d2F - 2F + (t2)^2|."""
    return abs(euler_defect(t, cfg) + t.t2 * t.t2)


def euler_multiplication(t: FlatPoint, cfg: SeriesConfig | None = None) -> np.ndarray:
    """Matrix E^sigma c^beta_{sigma alpha} (rows alpha, columns beta)."""
    C = structure_constants(t, cfg)
    E = EULER_WEIGHTS * t.as_array()
    return np.einsum("s,sab->ab", E, C)


def euler_multiplication_residual(t: FlatPoint, cfg: SeriesConfig | None = None) -> float:
    """max |E . c - eta_lower g| / max(1, max |eta_lower g|)."""
    lhs = euler_multiplication(t, cfg)
    rhs = saito_metric_lower() @ intersection_form_flat(t, cfg)
    return float(np.max(np.abs(lhs - rhs))) / max(1.0, float(np.max(np.abs(rhs))))


def det_jacobian(p: DomainPoint, cfg: SeriesConfig | None = None) -> complex:
    """det d(phi0, phi1, v2, tau)/d(v0, v2, tau, u) = -2 pi i e^{-4 pi i u} theta1(2 v0) / theta1(2 v2).

    Vanishes exactly when v0 is a half period: 0, 1/2, tau/2, (1 + tau)/2.
    """
    u, v0, v2, tau = p.as_tuple()
    if lattice_distance(2 * v2, tau) < POLE_GUARD:
        raise PoleError(f"theta1(2 v2) vanishes at v2={v2!r}")
    return -2j * PI * cmath.exp(-4j * PI * u) * theta1(2 * v0, tau, cfg) / theta1(2 * v2, tau, cfg)


def det_jacobian_fd(p: DomainPoint, cfg: SeriesConfig | None = None, h: float = 1e-5) -> complex:
    """Determinant of d(phi0, phi1, v2, tau)/d(v0, v2, tau, u) by finite differences."""
    x0 = np.array([p.v0, p.v2, p.tau, p.u], dtype=complex)

    def f(x):
        q = DomainPoint(x[3], x[0], x[1], x[2])
        return np.array([phi0(q, cfg), phi1(q, cfg), x[1], x[2]])

    return complex(np.linalg.det(numdiff.jacobian(f, x0, h)))


def char_poly(M: np.ndarray) -> np.ndarray:
    """Monic characteristic polynomial coefficients by Faddeev-LeVerrier."""
    n = M.shape[0]
    coeffs = [1.0 + 0j]
    N = np.zeros_like(M)
    eye = np.eye(n, dtype=M.dtype)
    for k in range(1, n + 1):
        N = M @ N + coeffs[-1] * eye
        coeffs.append(-np.trace(M @ N) / k)
    return np.array(coeffs)


def canonical_spectrum(t: FlatPoint, cfg: SeriesConfig | None = None) -> np.ndarray:
    """Roots u of det(g - u eta) = 0, sorted by (real, imag)."""
    M = saito_metric_lower() @ intersection_form_flat(t, cfg)
    roots = np.roots(char_poly(M))
    return np.array(sorted(roots, key=lambda z: (z.real, z.imag)))


def metric_degrees() -> np.ndarray:
    d = np.array(DEGREES)
    return d[:, None] + d[None, :]


def entrywise_relative(A: np.ndarray, B: np.ndarray, floor: float = 1e-3) -> float:
    """max |A - B| / max(|B|, floor * max|B|), taken entry by entry."""
    A = np.asarray(A)
    B = np.asarray(B)
    scale = float(np.max(np.abs(B)))
    if scale == 0:
        return float(np.max(np.abs(A)))
    den = np.maximum(np.abs(B), floor * scale)
    return float(np.max(np.abs(A - B) / den))


def metric_potential(t: FlatPoint, cfg: SeriesConfig | None = None) -> np.ndarray:
    """deg(g^{ab}) eta^{a a'} eta^{b b'} d_{a'} d_{b'} F."""
    eta = saito_metric()
    return metric_degrees() * (eta @ free_energy_hessian(t, cfg) @ eta.T)


def metric_potential_residual(t: FlatPoint, cfg: SeriesConfig | None = None) -> float:
    """Relative mismatch between g and the rescaled Hessian over pairs of nonzero degree."""
    g = intersection_form_flat(t, cfg)
    pot = metric_potential(t, cfg)
    mask = metric_degrees() != 0
    return entrywise_relative(pot[mask], g[mask])
