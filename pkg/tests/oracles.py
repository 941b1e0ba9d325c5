"""Brute-force reference implementations, deliberately naive and independent of the package."""

import cmath
import math

import numpy as np

PI = math.pi


def theta1_direct(v, tau, nv=0, nt=0, terms=256):
    """Fixed-length term-wise sum of the theta1 series and its derivatives."""
    s = 0j
    for n in range(terms):
        x = n + 0.5
        k = (2 * n + 1) * PI
        q = cmath.exp(1j * PI * tau * x * x)
        if abs(q) < 1e-300:
            break
        # d^nv/dv^nv sin(k v) = k^nv sin(k v + nv pi / 2)
        sv = k ** nv * cmath.sin(k * v + nv * PI / 2)
        s += (-1) ** n * q * (1j * PI * x * x) ** nt * sv
    return 2 * s


def divisor_sum(n):
    return sum(d for d in range(1, n + 1) if n % d == 0)


def e2_qseries(tau, terms=64):
    """1 - 24 sum sigma_1(n) q^n with q = e^{2 pi i tau}."""
    q = cmath.exp(2j * PI * tau)
    return 1 - 24 * sum(divisor_sum(n) * q ** n for n in range(1, terms + 1))


def e2_lattice(tau, M=20000, N=8):
    """1 + 3/pi^2 sum_{n != 0} sum_m (m + n tau)^-2, inner sum truncated with a tail correction."""
    m = np.arange(-M, M + 1, dtype=float)
    total = 0j
    for n in range(-N, N + 1):
        if n == 0:
            continue
        total += np.sum(1.0 / (m + n * tau) ** 2)
        # symmetric tail sum_{|m| > M} (m + c)^-2 ~ 2/(M + 1/2)
        total += 2.0 / (M + 0.5)
    return 1 + 3 / PI ** 2 * total


def wp_lattice(v, tau, N):
    """Symmetric truncation |m|, |n| <= N of the defining lattice sum."""
    m, n = np.meshgrid(np.arange(-N, N + 1), np.arange(-N, N + 1))
    w = (m + n * tau).ravel()
    w = w[w != 0]
    return 1 / v ** 2 + np.sum(1 / (v - w) ** 2 - 1 / w ** 2)


def wp_lattice_extrapolated(v, tau, N=80):
    """Richardson combination of two truncations; the truncation error decays like N^-2."""
    return (4 * wp_lattice(v, tau, N) - wp_lattice(v, tau, N // 2)) / 3
