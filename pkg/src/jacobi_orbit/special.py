"""Jacobi theta function, Weierstrass functions, g1 and E2.

All functions evaluate truncated series in double precision. The theta
convention is

    theta1(v, tau) = 2 * sum_{n>=0} (-1)^n exp(i pi tau (n+1/2)^2) sin((2n+1) pi v),

so that theta1 is odd in v, 1-periodic up to sign and quasi-periodic under
v -> v + tau, with lattice Z + tau Z.  Every v- and tau-derivative is computed
by differentiating the series term by term; the heat equation

    theta1'' = 4 pi i d(theta1)/d(tau)

is therefore a genuine check rather than an identity of the implementation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError, PoleError

PI = math.pi
POLE_GUARD = 1e-6
_BLOCK = 16


@dataclass(frozen=True)
class SeriesConfig:
    """Truncation parameters shared by every series evaluation.

    Attributes:
        tol: Terms smaller than ``tol * max(1, |partial sum|)`` count as
            negligible; three negligible terms in a row stop the sum.
        max_terms: Hard cap on the number of series terms.
        im_tau_min: Smallest admissible ``Im(tau)``.
    """

    tol: float = 1e-14
    max_terms: int = 256
    im_tau_min: float = 0.05

    def __post_init__(self):
        if not (self.tol > 0 and math.isfinite(self.tol)):
            raise ValueError(f"tol must be positive, got {self.tol!r}")
        if int(self.max_terms) != self.max_terms or self.max_terms < 8:
            raise ValueError(f"max_terms must be an integer >= 8, got {self.max_terms!r}")
        if not (self.im_tau_min > 0):
            raise ValueError(f"im_tau_min must be positive, got {self.im_tau_min!r}")


DEFAULT_CONFIG = SeriesConfig()


def _cfg(cfg: SeriesConfig | None) -> SeriesConfig:
    return DEFAULT_CONFIG if cfg is None else cfg


def _check_tau(tau: complex, cfg: SeriesConfig) -> complex:
    tau = complex(tau)
    if not (math.isfinite(tau.real) and math.isfinite(tau.imag)):
        raise DomainError(f"tau must be finite, got {tau!r}")
    if tau.imag < cfg.im_tau_min:
        raise DomainError(f"Im(tau) = {tau.imag:.3g} is below im_tau_min = {cfg.im_tau_min:.3g}")
    return tau


def _finite(z: complex, what: str) -> complex:
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"{what} is not finite (overflow)")
    return z


def _truncate(terms: np.ndarray, partial: np.ndarray, tol: float, run: int):
    """Return (stop index or None, updated run length of negligible terms)."""
    small = np.all(np.abs(terms) < tol * np.maximum(1.0, np.abs(partial)), axis=(1, 2))
    for i, s in enumerate(small):
        run = run + 1 if s else 0
        if run == 3:
            return i + 1, run
    return None, run


def theta1_jet(v, tau, nv: int = 0, nt: int = 0, cfg: SeriesConfig | None = None) -> np.ndarray:
    """All mixed derivatives of theta1 up to order ``nv`` in v and ``nt`` in tau.

    Returns:
        Complex array ``D`` of shape ``(nv + 1, nt + 1)`` with
        ``D[a, b] = d^a/dv^a d^b/dtau^b theta1(v, tau)``.

    Raises:
        DomainError: if ``Im(tau) < cfg.im_tau_min`` or the result overflows.
        ConvergenceError: if ``cfg.max_terms`` terms do not meet the
            truncation criterion.
    """
    cfg = _cfg(cfg)
    tau = _check_tau(tau, cfg)
    v = complex(v)
    if nv < 0 or nt < 0:
        raise ValueError("derivative orders must be non-negative")
    a = np.arange(nv + 1)
    b = np.arange(nt + 1)
    total = np.zeros((nv + 1, nt + 1), dtype=complex)
    start = 0
    run = 0
    while start < cfg.max_terms:
        n = np.arange(start, min(start + _BLOCK, cfg.max_terms))
        x = n + 0.5
        k = (2 * n + 1) * PI
        base = 1j * PI * tau * x * x
        # sin(kv) split into exponentials so no intermediate overflows
        ep = np.exp(base + 1j * k * v)
        em = np.exp(base - 1j * k * v)
        kv = (1j * k)[:, None] ** a[None, :]
        sv = (ep[:, None] * kv - em[:, None] * (-1) ** a[None, :] * kv) / 2j
        tw = (1j * PI * x * x)[:, None] ** b[None, :]
        sign = np.where(n % 2 == 0, 2.0, -2.0)
        terms = sign[:, None, None] * sv[:, :, None] * tw[:, None, :]
        partial = total + np.cumsum(terms, axis=0)
        stop, run = _truncate(terms, partial, cfg.tol, run)
        if stop is not None:
            out = partial[stop - 1]
            if not np.all(np.isfinite(out)):
                raise DomainError("theta1 series overflowed")
            return out
        total = partial[-1]
        start = n[-1] + 1
    raise ConvergenceError(
        f"theta1 series did not converge in {cfg.max_terms} terms at v={v!r}, tau={tau!r}")


def theta1(v, tau, cfg: SeriesConfig | None = None) -> complex:
    """Jacobi theta1(v, tau)."""
    return complex(theta1_jet(v, tau, 0, 0, cfg)[0, 0])


def theta1_dv(v, tau, order: int = 1, cfg: SeriesConfig | None = None) -> complex:
    """``order``-th v-derivative of theta1, order in {1, 2, 3}."""
    if order not in (1, 2, 3):
        raise ValueError(f"order must be 1, 2 or 3, got {order!r}")
    return complex(theta1_jet(v, tau, order, 0, cfg)[order, 0])


def theta1_dtau(v, tau, cfg: SeriesConfig | None = None) -> complex:
    """First tau-derivative of theta1 (term-wise)."""
    return complex(theta1_jet(v, tau, 0, 1, cfg)[0, 1])


def log_jet(D: np.ndarray, order: int = 3) -> np.ndarray:
    """Derivatives of ``log f`` from the derivatives ``D[a, b]`` of ``f``.

    ``D`` holds mixed partials of a function of two variables at a point with
    ``D[0, 0] != 0``.  The result has the same shape and holds the mixed
    partials of ``log f`` up to total degree ``order``; entries of higher
    total degree are left at zero.
    """
    na, nb = D.shape
    fa = np.array([math.factorial(i) for i in range(na)], dtype=float)
    fb = np.array([math.factorial(j) for j in range(nb)], dtype=float)
    f0 = D[0, 0]
    if f0 == 0:
        raise PoleError("logarithm of a vanishing function")
    # Taylor coefficients of f/f0 - 1
    w = D / np.outer(fa, fb) / f0
    w[0, 0] = 0.0
    mask = np.add.outer(np.arange(na), np.arange(nb)) <= order

    def mul(p, q):
        r = np.zeros_like(p)
        for i in range(na):
            for j in range(nb):
                if p[i, j] != 0:
                    r[i:, j:] += p[i, j] * q[: na - i, : nb - j]
        return r * mask

    w = w * mask
    out = np.zeros_like(w)
    power = w.copy()
    for m in range(1, order + 1):
        out += (-1) ** (m + 1) * power / m
        power = mul(power, w)
    out = out * np.outer(fa, fb)
    out[0, 0] = cmath.log(f0)
    return out


def lattice_distance(v, tau) -> float:
    """Euclidean distance from ``v`` to the nearest point of Z + tau Z."""
    v = complex(v)
    tau = complex(tau)
    y = v.imag / tau.imag
    x = v.real - y * tau.real
    x0, y0 = math.floor(x), math.floor(y)
    return min(abs(v - (x0 + i) - (y0 + j) * tau) for i in (-1, 0, 1, 2) for j in (-1, 0, 1, 2))


def _guard(v, tau, what: str = "v") -> None:
    if lattice_distance(v, tau) < POLE_GUARD:
        raise PoleError(f"{what} = {complex(v)!r} is within {POLE_GUARD:g} of a lattice point")


def g1(tau, cfg: SeriesConfig | None = None) -> complex:
    """g1(tau) = -(1/3) d_tau theta1'(0, tau) / theta1'(0, tau).

    Numerically g1 = -(pi i / 12) E2(tau), i.e. minus the logarithmic
    derivative of the Dedekind eta function.
    """
    D = theta1_jet(0.0, tau, 1, 1, cfg)
    return complex(-D[1, 1] / (3.0 * D[1, 0]))


def eisenstein_e2(tau, cfg: SeriesConfig | None = None) -> complex:
    """Quasi-modular Eisenstein series E2 = 1 - 24 sum_n n q^n / (1 - q^n), q = e^{2 pi i tau}."""
    cfg = _cfg(cfg)
    tau = _check_tau(tau, cfg)
    q = cmath.exp(2j * PI * tau)
    s = 0j
    run = 0
    for n in range(1, cfg.max_terms + 1):
        qn = q ** n
        term = n * qn / (1 - qn)
        s += term
        run = run + 1 if abs(24 * term) < cfg.tol * max(1.0, abs(1 - 24 * s)) else 0
        if run == 3:
            return 1 - 24 * s
    raise ConvergenceError(f"E2 series did not converge at tau={tau!r}")


def _ratios(v, tau, nv, cfg):
    D = theta1_jet(v, tau, nv, 0, cfg)[:, 0]
    return D[1:] / D[0]


def wp(v, tau, cfg: SeriesConfig | None = None) -> complex:
    """Weierstrass p-function for the lattice Z + tau Z."""
    _guard(v, tau)
    r1, r2 = _ratios(v, tau, 2, cfg)
    return _finite(complex(-r2 + r1 * r1 - 4j * PI * g1(tau, cfg)), "wp")


def wp_dv(v, tau, cfg: SeriesConfig | None = None) -> complex:
    """Derivative of the Weierstrass p-function in v."""
    _guard(v, tau)
    r1, r2, r3 = _ratios(v, tau, 3, cfg)
    return _finite(complex(-r3 + 3 * r1 * r2 - 2 * r1 ** 3), "wp_dv")


def wzeta(v, tau, cfg: SeriesConfig | None = None) -> complex:
    """Weierstrass zeta-function, normalised so that zeta' = -wp."""
    _guard(v, tau)
    (r1,) = _ratios(v, tau, 1, cfg)
    return _finite(complex(r1 + 4j * PI * g1(tau, cfg) * complex(v)), "wzeta")


def wsigma(v, tau, cfg: SeriesConfig | None = None) -> complex:
    """Weierstrass sigma-function, sigma(v) = theta1(v) / theta1'(0) * exp(2 pi i g1 v^2)."""
    v = complex(v)
    th = theta1(v, tau, cfg)
    th0 = theta1_dv(0.0, tau, 1, cfg)
    return _finite(th / th0 * cmath.exp(2j * PI * g1(tau, cfg) * v * v), "wsigma")
