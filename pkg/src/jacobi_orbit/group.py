"""The extended affine Jacobi group of type A1 and its action on the domain.

A group element is stored as ``(w, lambda, mu, k, gamma)`` and acts on a point
``(u, v0, v2, tau)`` as ``W(w) o T(lambda, mu, k) o G(gamma)``: first the
modular transformation, then the lattice translation, then the reflection.

Generators:

* ``W``: ``v0 -> -v0``.
* ``T(lambda, mu, k)``: ``v -> v + lambda tau + mu`` and
  ``u -> u - <lambda, v> - <lambda, lambda> tau / 2 + k``.
* ``G(a, b, c, d)``: ``v -> v / (c tau + d)``, ``tau -> (a tau + b)/(c tau + d)``
  and ``u -> u + c <v, v> / (2 (c tau + d))``.

The bilinear form is ``<x, y> = 2 x0 y0 - 2 x2 y2``.  Translations compose as

    T(l, m, k) T(l', m', k') = T(l + l', m + m', k + k' - <l, m'>),

and conjugation by ``G(gamma)`` maps ``T(l, m, k)`` to ``T(l*, m*, k*)`` with
``l* = d l - c m``, ``m* = a m - b l`` and
``k* = k + (ac/2) <m, m> - bc <l, m> + (bd/2) <l, l>``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Tuple

from .errors import DomainError

IntPair = Tuple[int, int]


def quadratic_form(v0, v2) -> complex:
    """<v, v> = 2 v0^2 - 2 v2^2."""
    return 2 * complex(v0) ** 2 - 2 * complex(v2) ** 2


def bilinear(x: tuple, y: tuple):
    """<x, y> = 2 x0 y0 - 2 x2 y2 (works for integers and complex numbers)."""
    return 2 * x[0] * y[0] - 2 * x[1] * y[1]


@dataclass(frozen=True)
class DomainPoint:
    """A point (u, v0, v2, tau) with Im(tau) > 0."""

    u: complex
    v0: complex
    v2: complex
    tau: complex

    def __post_init__(self):
        for name in ("u", "v0", "v2", "tau"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        if not self.tau.imag > 0:
            raise DomainError(f"Im(tau) must be positive, got tau={self.tau!r}")

    def as_tuple(self) -> tuple:
        return (self.u, self.v0, self.v2, self.tau)

    def replace(self, **kw) -> "DomainPoint":
        d = dict(u=self.u, v0=self.v0, v2=self.v2, tau=self.tau)
        d.update(kw)
        return DomainPoint(**d)


def _pair(x) -> IntPair:
    a, b = x
    return (int(a), int(b))


@dataclass(frozen=True)
class GroupElement:
    """Element (w, lambda, mu, k, gamma) of the extended affine Jacobi group."""

    w: int = 1
    lam: IntPair = (0, 0)
    mu: IntPair = (0, 0)
    k: int = 0
    gamma: Tuple[int, int, int, int] = (1, 0, 0, 1)

    def __post_init__(self):
        object.__setattr__(self, "lam", _pair(self.lam))
        object.__setattr__(self, "mu", _pair(self.mu))
        object.__setattr__(self, "gamma", tuple(int(x) for x in self.gamma))
        object.__setattr__(self, "k", int(self.k))
        if self.w not in (1, -1):
            raise ValueError(f"w must be +1 or -1, got {self.w!r}")
        if len(self.gamma) != 4:
            raise ValueError("gamma must have four entries (a, b, c, d)")
        a, b, c, d = self.gamma
        if a * d - b * c != 1:
            raise ValueError(f"gamma must have determinant 1, got {self.gamma!r}")

    @classmethod
    def identity(cls) -> "GroupElement":
        return cls()

    @classmethod
    def reflection(cls) -> "GroupElement":
        return cls(w=-1)

    @classmethod
    def translation(cls, lam=(0, 0), mu=(0, 0), k=0) -> "GroupElement":
        return cls(lam=lam, mu=mu, k=k)

    @classmethod
    def modular(cls, a, b, c, d) -> "GroupElement":
        return cls(gamma=(a, b, c, d))

    @classmethod
    def from_word(cls, word: str) -> "GroupElement":
        """Product of the letters of ``word`` over {S, T, s, t}; lower case is the inverse."""
        table = {"S": S, "T": T, "s": S_INV, "t": T_INV}
        g = cls.identity()
        for ch in word:
            try:
                g = compose(g, table[ch])
            except KeyError:
                raise ValueError(f"unknown letter {ch!r} in word {word!r}") from None
        return g

    def to_dict(self) -> dict:
        return {"w": self.w, "lambda": list(self.lam), "mu": list(self.mu),
                "k": self.k, "gamma": list(self.gamma)}

    @classmethod
    def from_dict(cls, d: dict) -> "GroupElement":
        return cls(w=int(d.get("w", 1)), lam=tuple(d.get("lambda", (0, 0))),
                   mu=tuple(d.get("mu", (0, 0))), k=int(d.get("k", 0)),
                   gamma=tuple(d.get("gamma", (1, 0, 0, 1))))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, s: str) -> "GroupElement":
        return cls.from_dict(json.loads(s))


S = GroupElement(gamma=(0, -1, 1, 0))
T = GroupElement(gamma=(1, 1, 0, 1))
S_INV = GroupElement(gamma=(0, 1, -1, 0))
T_INV = GroupElement(gamma=(1, -1, 0, 1))


def _reflect(w: int, x: IntPair) -> IntPair:
    return (w * x[0], x[1])


def _translate_mul(t1: tuple, t2: tuple) -> tuple:
    (l1, m1, k1), (l2, m2, k2) = t1, t2
    lam = (l1[0] + l2[0], l1[1] + l2[1])
    mu = (m1[0] + m2[0], m1[1] + m2[1])
    return lam, mu, k1 + k2 - bilinear(l1, m2)


def adjoint(gamma: tuple, t: tuple) -> tuple:
    """Translation t* with G(gamma) o T(t) = T(t*) o G(gamma)."""
    a, b, c, d = gamma
    lam, mu, k = t
    lam2 = (d * lam[0] - c * mu[0], d * lam[1] - c * mu[1])
    mu2 = (a * mu[0] - b * lam[0], a * mu[1] - b * lam[1])
    # each term is an integer: <x, x> is even
    k2 = (k + (a * c) * (bilinear(mu, mu) // 2) - b * c * bilinear(lam, mu)
          + (b * d) * (bilinear(lam, lam) // 2))
    return lam2, mu2, k2


def compose(g1: GroupElement, g2: GroupElement) -> GroupElement:
    """Group product with ``act(compose(g1, g2), p) == act(g1, act(g2, p))``."""
    t1 = (_reflect(g2.w, g1.lam), _reflect(g2.w, g1.mu), g1.k)
    t2 = adjoint(g1.gamma, (g2.lam, g2.mu, g2.k))
    lam, mu, k = _translate_mul(t1, t2)
    a1, b1, c1, d1 = g1.gamma
    a2, b2, c2, d2 = g2.gamma
    gamma = (a1 * a2 + b1 * c2, a1 * b2 + b1 * d2, c1 * a2 + d1 * c2, c1 * b2 + d1 * d2)
    return GroupElement(w=g1.w * g2.w, lam=lam, mu=mu, k=k, gamma=gamma)


def inverse(g: GroupElement) -> GroupElement:
    """Two-sided inverse, solving ``compose(g, h) == identity`` for ``h``."""
    a, b, c, d = g.gamma
    ginv = (d, -b, -c, a)
    lam, mu = _reflect(g.w, g.lam), _reflect(g.w, g.mu)
    # inverse of T(lam, mu, k) is T(-lam, -mu, -k - <lam, mu>)
    tinv = ((-lam[0], -lam[1]), (-mu[0], -mu[1]), -g.k - bilinear(lam, mu))
    l2, m2, k2 = adjoint(ginv, tinv)
    return GroupElement(w=g.w, lam=l2, mu=m2, k=k2, gamma=ginv)


def act(g: GroupElement, p: DomainPoint) -> DomainPoint:
    """Image of ``p`` under ``g``: modular part, then translation, then reflection."""
    a, b, c, d = g.gamma
    u, v0, v2, tau = p.as_tuple()
    j = c * tau + d
    if j == 0:
        raise DomainError("c tau + d vanished")
    u = u + c * quadratic_form(v0, v2) / (2 * j)
    v0, v2 = v0 / j, v2 / j
    tau = (a * tau + b) / j
    l0, l2 = g.lam
    m0, m2 = g.mu
    u = u - bilinear(g.lam, (v0, v2)) - 0.5 * bilinear(g.lam, g.lam) * tau + g.k
    v0 = v0 + l0 * tau + m0
    v2 = v2 + l2 * tau + m2
    if g.w == -1:
        v0 = -v0
    return DomainPoint(u, v0, v2, tau)


def conformal_factor(g: GroupElement, p: DomainPoint) -> complex:
    """Factor (c tau + d)^-2 by which g rescales du dtau + dv0^2 - dv2^2."""
    _, _, c, d = g.gamma
    return complex(c * p.tau + d) ** -2
