"""The Jacobi forms phi0, phi1, the superpotential and the generating function.

Conventions: every form carries the factor ``exp(-2 pi i u)``, the index
operator is ``E = -(1/(2 pi i)) d/du``, and a form of weight ``k`` satisfies
``phi(gamma . p) = (c tau + d)^k phi(p)``.  With these, phi1 has weight -1 and
phi0 has weight 0, both of index 1 and order 0.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

from .group import GroupElement, DomainPoint, act
from .special import (PI, POLE_GUARD, SeriesConfig, g1, lattice_distance, theta1,
                      theta1_dv, wzeta)
from .errors import PoleError
from . import numdiff


@dataclass(frozen=True)
class FormSignature:
    """Weight k, order l and index m of a Jacobi form."""

    weight: int
    order: int
    index: int


PHI0_SIGNATURE = FormSignature(weight=0, order=0, index=1)
PHI1_SIGNATURE = FormSignature(weight=-1, order=0, index=1)


def _require_away(x, tau, what: str, guard: float = POLE_GUARD) -> None:
    if lattice_distance(x, tau) < guard:
        raise PoleError(f"{what} = {complex(x)!r} is on the lattice (pole)")


def phi1(p: DomainPoint, cfg: SeriesConfig | None = None) -> complex:
    """phi1 = e^{-2 pi i u} theta1(v0 + v2) theta1(v2 - v0) / (theta1'(0) theta1(2 v2))."""
    u, v0, v2, tau = p.as_tuple()
    _require_away(2 * v2, tau, "2*v2")
    num = theta1(v0 + v2, tau, cfg) * theta1(v2 - v0, tau, cfg)
    den = theta1_dv(0.0, tau, 1, cfg) * theta1(2 * v2, tau, cfg)
    return cmath.exp(-2j * PI * u) * num / den


def phi0(p: DomainPoint, cfg: SeriesConfig | None = None) -> complex:
    """phi0 = -phi1 [zeta(v0 - v2) - zeta(v0 + v2) + 2 zeta(v2)].

    Equal to ``e^{-2 pi i u} theta1(v0)^2 / theta1(v2)^2``; that form is used
    only as a cross-check.
    """
    _, v0, v2, tau = p.as_tuple()
    for x, name in ((v0 - v2, "v0-v2"), (v0 + v2, "v0+v2"), (v2, "v2")):
        _require_away(x, tau, name)
    bracket = wzeta(v0 - v2, tau, cfg) - wzeta(v0 + v2, tau, cfg) + 2 * wzeta(v2, tau, cfg)
    return -phi1(p, cfg) * bracket


def superpotential(v, p: DomainPoint, cfg: SeriesConfig | None = None) -> complex:
    """lambda(v) = e^{-2 pi i u} theta1(v - v0) theta1(v + v0) / (theta1(v - v2) theta1(v + v2))."""
    u, v0, v2, tau = p.as_tuple()
    v = complex(v)
    _require_away(v - v2, tau, "v-v2")
    _require_away(v + v2, tau, "v+v2")
    num = theta1(v - v0, tau, cfg) * theta1(v + v0, tau, cfg)
    den = theta1(v - v2, tau, cfg) * theta1(v + v2, tau, cfg)
    return cmath.exp(-2j * PI * u) * num / den


def superpotential_expansion(v, p: DomainPoint, cfg: SeriesConfig | None = None) -> complex:
    """Right-hand side phi1 [zeta(v - v2) - zeta(v + v2) + 2 zeta(v2)] + phi0."""
    _, _, v2, tau = p.as_tuple()
    z = wzeta(v - v2, tau, cfg) - wzeta(v + v2, tau, cfg) + 2 * wzeta(v2, tau, cfg)
    return phi1(p, cfg) * z + phi0(p, cfg)


def transport_probe(g: GroupElement, p: DomainPoint, v) -> complex:
    """Carry a superpotential argument along with ``g``: v -> v / (c tau + d)."""
    _, _, c, d = g.gamma
    return complex(v) / (c * p.tau + d)


def invariance_residual(g: GroupElement, p: DomainPoint, v, cfg: SeriesConfig | None = None) -> float:
    """|lambda(v'; g.p) - lambda(v; p)| / max(1, |lambda(v; p)|) with v' the transported probe."""
    before = superpotential(v, p, cfg)
    after = superpotential(transport_probe(g, p, v), act(g, p), cfg)
    return abs(after - before) / max(1.0, abs(before))


def generating_function(z, p: DomainPoint, cfg: SeriesConfig | None = None) -> complex:
    """e^{-2 pi i (u + i g1 z^2)} theta1(z - v0 + v2) theta1(z + v0 + v2) / (theta1'(0) theta1(z + 2 v2))."""
    u, v0, v2, tau = p.as_tuple()
    z = complex(z)
    _require_away(z + 2 * v2, tau, "z+2*v2")
    pref = cmath.exp(-2j * PI * (u + 1j * g1(tau, cfg) * z * z))
    num = theta1(z - v0 + v2, tau, cfg) * theta1(z + v0 + v2, tau, cfg)
    den = theta1_dv(0.0, tau, 1, cfg) * theta1(z + 2 * v2, tau, cfg)
    return pref * num / den


def generating_function_dz(p: DomainPoint, cfg: SeriesConfig | None = None) -> complex:
    """First z-derivative of the generating function at z = 0 (finite differences).

    Uses the 4th-order central stencil with step ``1e-4 * max(1, |v2|)`` and
    one Richardson step.  The exact value is
    ``phi0 + phi1 (2 theta1'/theta1 (v2) - theta1'/theta1 (2 v2))``.
    """
    h = 1e-4 * max(1.0, abs(p.v2))
    return complex(numdiff.central_diff(lambda z: generating_function(z, p, cfg), 0.0, h))


def generating_function_dz_exact(p: DomainPoint, cfg: SeriesConfig | None = None) -> complex:
    """Closed form of the first z-derivative of the generating function at z = 0."""
    _, _, v2, tau = p.as_tuple()
    r = theta1_dv(v2, tau, 1, cfg) / theta1(v2, tau, cfg)
    r2 = theta1_dv(2 * v2, tau, 1, cfg) / theta1(2 * v2, tau, cfg)
    return phi0(p, cfg) + phi1(p, cfg) * (2 * r - r2)


def index_of(form, p: DomainPoint, cfg: SeriesConfig | None = None, h: float = 1e-5) -> complex:
    """Numerical index -(1/(2 pi i)) d(log form)/du."""
    d = numdiff.central_diff(lambda s: form(p.replace(u=p.u + s), cfg), 0.0, h)
    return complex(-d / (2j * PI * form(p, cfg)))
