"""Seeded sampling of generic points, flat points and group elements.

All randomness comes from ``numpy.random.Generator`` driven by the PCG64 bit
generator, whose output stream is fixed by its seed and documented algorithm.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .frobenius import FlatPoint
from .group import DomainPoint, GroupElement, compose
from .special import lattice_distance

RNG_ALGORITHM = "numpy.random.Generator(PCG64)"


@dataclass(frozen=True)
class SamplingBox:
    """Region in which generic sample points are drawn."""

    im_tau: tuple = (0.8, 2.0)
    re_tau: tuple = (-0.5, 0.5)
    v0_radius: float = 0.4
    v2_margin: float = 0.05
    u_radius: float = 0.3
    t1_radius: float = 2.0
    t2_annulus: tuple = (0.5, 2.0)
    t3_radius: float = 0.35
    translation_bound: int = 2
    word_length: int = 3


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Independent PCG64 generator for ``(seed, stream)``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed) % 2 ** 64, stream])))


def half_lattice_distance(v, tau) -> float:
    """Distance from ``v`` to the nearest point of (Z + tau Z)/2."""
    return 0.5 * lattice_distance(2 * complex(v), tau)


class Sampler:
    """Draws the random objects used by the verification suite."""

    def __init__(self, rng: np.random.Generator, box: SamplingBox | None = None):
        self.rng = rng
        self.box = box or SamplingBox()

    def uniform(self, lo, hi) -> float:
        return float(self.rng.uniform(lo, hi))

    def disk(self, radius: float, inner: float = 0.0) -> complex:
        """Uniform point of the annulus inner <= |z| <= radius."""
        r = math.sqrt(self.uniform(inner ** 2, radius ** 2))
        return cmath.rect(r, self.uniform(0.0, 2 * math.pi))

    def tau(self) -> complex:
        b = self.box
        return complex(self.uniform(*b.re_tau), self.uniform(*b.im_tau))

    def v2(self, tau: complex) -> complex:
        while True:
            v2 = self.uniform(-0.5, 0.5) + self.uniform(-0.5, 0.5) * tau
            if half_lattice_distance(v2, tau) >= self.box.v2_margin:
                return v2

    def domain_point(self) -> DomainPoint:
        """Generic point: no pole of phi0, phi1, t1 and v0 off the half periods."""
        b = self.box
        tau = self.tau()
        while True:
            v2 = self.v2(tau)
            v0 = self.disk(b.v0_radius)
            ok = (half_lattice_distance(v0, tau) >= b.v2_margin
                  and lattice_distance(v0 + v2, tau) >= b.v2_margin
                  and lattice_distance(v0 - v2, tau) >= b.v2_margin)
            if ok:
                return DomainPoint(self.disk(b.u_radius), v0, v2, tau)

    def probe(self, p: DomainPoint) -> complex:
        """Superpotential argument away from its poles and zeros."""
        while True:
            v = self.disk(self.box.v0_radius)
            if min(lattice_distance(v - p.v2, p.tau), lattice_distance(v + p.v2, p.tau),
                   lattice_distance(v - p.v0, p.tau), lattice_distance(v + p.v0, p.tau)) >= self.box.v2_margin:
                return v

    def flat_point(self) -> FlatPoint:
        b = self.box
        t4 = self.tau()
        while True:
            t3 = self.disk(b.t3_radius)
            if half_lattice_distance(t3, t4) >= b.v2_margin:
                break
        t2 = self.disk(b.t2_annulus[1], b.t2_annulus[0])
        return FlatPoint(self.disk(b.t1_radius), t2, t3, t4)

    def integer(self, bound: int) -> int:
        return int(self.rng.integers(-bound, bound + 1))

    def modular_word(self) -> str:
        n = int(self.rng.integers(0, self.box.word_length + 1))
        return "".join("ST"[int(i)] for i in self.rng.integers(0, 2, size=n))

    def group_element(self) -> GroupElement:
        """Random element: reflection, translation with bounded entries and a short word in S, T."""
        m = self.box.translation_bound
        t = GroupElement(w=1 if self.rng.integers(0, 2) else -1,
                         lam=(self.integer(m), self.integer(m)),
                         mu=(self.integer(m), self.integer(m)),
                         k=self.integer(m))
        return compose(t, GroupElement.from_word(self.modular_word()))
