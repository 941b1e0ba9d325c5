"""Seeded verification suite: every identity checked numerically at random points.

Each check draws its own sample points from an independent PCG64 stream keyed
by ``(seed, check index)``, so overriding one tolerance or adding samples to
one check never changes the points seen by another.
"""

from __future__ import annotations

import cmath
import json
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

import numpy as np

from . import __version__
from . import frobenius as fb
from . import numdiff
from .forms import (generating_function, generating_function_dz, generating_function_dz_exact,
                    index_of, invariance_residual, phi0, phi1, superpotential,
                    superpotential_expansion)
from .group import (DomainPoint, GroupElement, act, compose, conformal_factor, inverse)
from .sampling import RNG_ALGORITHM, Sampler, SamplingBox, make_rng
from .special import (PI, SeriesConfig, log_jet, theta1, theta1_dv, theta1_jet, wp, wp_dv,
                      wsigma, wzeta)


def rel(a, b) -> float:
    """Relative difference |a - b| / max(|a|, |b|)."""
    den = max(abs(a), abs(b))
    return 0.0 if den == 0 else abs(a - b) / den


def rel1(a, b) -> float:
    """|a - b| / max(1, |a|, |b|)."""
    return abs(a - b) / max(1.0, abs(a), abs(b))


@dataclass
class CheckResult:
    name: str
    anchor: str
    samples: int
    max_residual: float
    tolerance: float
    error: Optional[str] = None

    @property
    def passed(self) -> bool:
        return bool(self.max_residual <= self.tolerance)

    def to_dict(self) -> dict:
        d = {"name": self.name, "anchor": self.anchor, "samples": self.samples,
             "max_residual": self.max_residual if math.isfinite(self.max_residual) else None,
             "tolerance": self.tolerance, "passed": self.passed}
        if self.error is not None:
            d["error"] = self.error
        return d


@dataclass
class VerificationReport:
    seed: int
    samples: int
    checks: List[CheckResult]
    notes: List[dict] = field(default_factory=list)
    wall_time: float = 0.0
    version: str = __version__

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self, include_time: bool = True) -> dict:
        d = {"version": self.version, "seed": self.seed, "samples": self.samples,
             "rng": RNG_ALGORITHM, "passed": self.passed,
             "checks": [c.to_dict() for c in self.checks], "notes": self.notes}
        if include_time:
            d["wall_time"] = self.wall_time
        return d

    def to_json(self, include_time: bool = True) -> str:
        return json.dumps(self.to_dict(include_time), indent=2, sort_keys=True)


@dataclass
class SuiteConfig:
    """Parameters of a verification run.

    Attributes:
        seed: Master seed of the sampler.
        samples: Sample budget; 50 runs each check at its nominal count,
            other values scale all counts proportionally.
        tol_overrides: Replacement tolerances keyed by check name.
        box: Sampling region.
        out: Optional path of the JSON report.
    """

    seed: int = 20240611
    samples: int = 50
    tol_overrides: Dict[str, float] = field(default_factory=dict)
    box: SamplingBox = field(default_factory=SamplingBox)
    out: Optional[str] = None
    series: SeriesConfig = field(default_factory=SeriesConfig)

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        for k, v in self.tol_overrides.items():
            if not v > 0:
                raise ValueError(f"tolerance override for {k!r} must be positive")
            if k not in CHECKS:
                raise ValueError(f"unknown check {k!r}")


@dataclass(frozen=True)
class Check:
    name: str
    anchor: str
    count: int
    tolerance: float
    run: Callable


CHECKS: Dict[str, Check] = {}


def check(name: str, anchor: str, count: int, tolerance: float):
    def deco(fn):
        CHECKS[name] = Check(name, anchor, count, tolerance, fn)
        return fn
    return deco


def _max(values) -> float:
    m = 0.0
    for v in values:
        if not math.isfinite(v):
            return math.inf
        m = max(m, v)
    return m


# ------------------------------------------------------------ special functions

@check("theta_quasi_periodicity",
       "theta1(v + mu + lam tau) = (-1)^(lam + mu) exp(-2 pi i (lam v + lam^2 tau / 2)) theta1(v)",
       100, 1e-9)
def _theta_quasi(s: Sampler, n: int, cfg: SeriesConfig):
    for _ in range(n):
        tau = s.tau()
        v = s.disk(0.5)
        lam, mu = s.integer(2), s.integer(2)
        lhs = theta1(v + mu + lam * tau, tau, cfg)
        rhs = (-1) ** (lam + mu) * cmath.exp(-2j * PI * (lam * v + lam * lam * tau / 2)) * theta1(v, tau, cfg)
        yield rel(lhs, rhs)


_FIXED_WORDS = ("T", "S", "TS", "ST")


@check("theta_modularity",
       "theta1(v/(c tau + d), gamma tau) / theta1'(0, gamma tau) = "
       "(c tau + d)^-1 exp(pi i c v^2 / (c tau + d)) theta1(v, tau) / theta1'(0, tau)",
       100, 1e-8)
def _theta_modular(s: Sampler, n: int, cfg: SeriesConfig):
    for i in range(n):
        word = _FIXED_WORDS[i] if i < len(_FIXED_WORDS) else s.modular_word()
        a, b, c, d = GroupElement.from_word(word).gamma
        tau = s.tau()
        v = s.disk(0.5)
        j = c * tau + d
        tau2 = (a * tau + b) / j
        lhs = theta1(v / j, tau2, cfg) / theta1_dv(0.0, tau2, 1, cfg)
        rhs = cmath.exp(1j * PI * c * v * v / j) / j * theta1(v, tau, cfg) / theta1_dv(0.0, tau, 1, cfg)
        yield rel(lhs, rhs)


@check("heat_equation", "theta1'' = 4 pi i d(theta1)/d(tau)", 100, 1e-10)
def _heat(s: Sampler, n: int, cfg: SeriesConfig):
    for _ in range(n):
        D = theta1_jet(s.disk(0.5), s.tau(), 2, 1, cfg)
        yield rel1(D[2, 0], 4j * PI * D[0, 1])


def _ratios(x, tau, cfg):
    D = theta1_jet(x, tau, 3, 0, cfg)[:, 0]
    return D[1] / D[0], D[2] / D[0], D[3] / D[0]


def lemma_sides(x, y, tau, cfg=None):
    """Both sides of the theta identity in (x, y) (third argument x - y)."""
    rx1, rx2, _ = _ratios(x, tau, cfg)
    ry1, ry2, _ = _ratios(y, tau, cfg)
    D = theta1_jet(x - y, tau, 1, 1, cfg)
    d0 = theta1_jet(0.0, tau, 1, 1, cfg)
    dtau_log = d0[1, 1] / d0[1, 0] - D[0, 1] / D[0, 0]
    lhs = rx2 + ry2 - 2 * rx1 * ry1
    rhs = 4j * PI * dtau_log + 2 * D[1, 0] / D[0, 0] * (rx1 - ry1)
    return lhs, rhs


def lemma_derivative_sides(v2, tau, cfg=None):
    """Both sides of the v2-derivative of the identity at x = v2, y = -v2."""
    r1, r2, r3 = _ratios(v2, tau, cfg)
    s1, s2, _ = _ratios(2 * v2, tau, cfg)
    L = log_jet(theta1_jet(2 * v2, tau, 1, 1, cfg), order=2)
    lhs = 2 * r3 + 2 * r2 * r1 - 4 * r1 ** 3
    rhs = (4j * PI * (-2 * L[1, 1]) + 8 * s2 * r1 - 8 * s1 * s1 * r1
           + 4 * s1 * r2 - 4 * s1 * r1 * r1)
    return lhs, rhs


def _pair(s: Sampler, tau):
    while True:
        x, y = s.disk(0.45), s.disk(0.45)
        if min(abs(x), abs(y), abs(x - y), abs(x + y)) > 0.05:
            return x, y


@check("theta_lemma",
       "theta''/theta(x) + theta''/theta(y) - 2 theta'/theta(x) theta'/theta(y) = "
       "4 pi i d_tau log(theta'(0)/theta(x - y)) + 2 theta'/theta(x - y) (theta'/theta(x) - theta'/theta(y))",
       100, 1e-8)
def _lemma(s: Sampler, n: int, cfg: SeriesConfig):
    for _ in range(n):
        tau = s.tau()
        x, y = _pair(s, tau)
        yield rel(*lemma_sides(x, y, tau, cfg))


@check("theta_lemma_specialization", "theta lemma at x = v2, y = -v2", 100, 1e-9)
def _lemma_special(s: Sampler, n: int, cfg: SeriesConfig):
    for _ in range(n):
        tau = s.tau()
        v2 = s.v2(tau)
        r1, r2, _ = _ratios(v2, tau, cfg)
        s1 = _ratios(2 * v2, tau, cfg)[0]
        X = fb._x_jet(v2, tau, cfg)
        lhs = 2 * r2 + 2 * r1 * r1
        rhs = 4j * PI * X[0, 1] + 4 * s1 * r1
        yield rel(lhs, rhs)


@check("theta_lemma_derivative", "v2-derivative of the specialized theta lemma", 100, 1e-7)
def _lemma_deriv(s: Sampler, n: int, cfg: SeriesConfig):
    for _ in range(n):
        tau = s.tau()
        yield rel(*lemma_derivative_sides(s.v2(tau), tau, cfg))


@check("weierstrass_periodicity",
       "wp(v + 1) = wp(v + tau) = wp(v), zeta(v + w) - zeta(v) = 2 zeta(w/2), "
       "sigma(v + 1) = -exp(2 zeta(1/2)(v + 1/2)) sigma(v)",
       50, 1e-8)
def _weierstrass(s: Sampler, n: int, cfg: SeriesConfig):
    for _ in range(n):
        tau = s.tau()
        v = s.v2(tau)
        w = wp(v, tau, cfg)
        eta1 = 2 * wzeta(0.5, tau, cfg)
        eta2 = 2 * wzeta(tau / 2, tau, cfg)
        z = wzeta(v, tau, cfg)
        yield max(rel1(wp(v + 1, tau, cfg), w), rel1(wp(v + tau, tau, cfg), w),
                  rel1(wp_dv(v + 1, tau, cfg), wp_dv(v, tau, cfg)),
                  rel1(wzeta(v + 1, tau, cfg) - z, eta1),
                  rel1(wzeta(v + tau, tau, cfg) - z, eta2),
                  rel(wsigma(v + 1, tau, cfg), -cmath.exp(eta1 * (v + 0.5)) * wsigma(v, tau, cfg)))


@check("weierstrass_addition", "[zeta(x) + zeta(y) + zeta(z)]^2 = wp(x) + wp(y) + wp(z), x + y + z = 0",
       50, 1e-8)
def _addition(s: Sampler, n: int, cfg: SeriesConfig):
    for _ in range(n):
        tau = s.tau()
        x, y = _pair(s, tau)
        z = -x - y
        lhs = (wzeta(x, tau, cfg) + wzeta(y, tau, cfg) + wzeta(z, tau, cfg)) ** 2
        yield rel1(lhs, wp(x, tau, cfg) + wp(y, tau, cfg) + wp(z, tau, cfg))


# ------------------------------------------------------------------ group

def _point_diff(p: DomainPoint, q: DomainPoint) -> float:
    return max(rel1(a, b) for a, b in zip(p.as_tuple(), q.as_tuple()))


@check("group_homomorphism", "act(g1 g2, p) = act(g1, act(g2, p)); g g^-1 = 1", 100, 1e-12)
def _homomorphism(s: Sampler, n: int, cfg: SeriesConfig):
    for _ in range(n):
        g1, g2 = s.group_element(), s.group_element()
        p = s.domain_point()
        exact = compose(g1, inverse(g1)) == GroupElement.identity() == compose(inverse(g2), g2)
        yield _point_diff(act(compose(g1, g2), p), act(g1, act(g2, p))) if exact else math.inf


_DS2 = np.array([[0, 0, 0, 1], [0, 2, 0, 0], [0, 0, -2, 0], [1, 0, 0, 0]], dtype=complex)


@check("metric_conformal_invariance",
       "pullback of 2 dv0^2 - 2 dv2^2 + 2 du dtau by g equals (c tau + d)^-2 times itself",
       20, 1e-8)
def _conformal(s: Sampler, n: int, cfg: SeriesConfig):
    for _ in range(n):
        g = s.group_element()
        p = s.domain_point()
        J = numdiff.jacobian(lambda x: np.array(act(g, DomainPoint(*x)).as_tuple()),
                             np.array(p.as_tuple()), 1e-5)
        pull = J.T @ _DS2 @ J
        yield float(np.max(np.abs(pull - conformal_factor(g, p) * _DS2))) / 2.0


# ------------------------------------------------------------------ forms

@check("superpotential_invariance", "lambda(v/(c tau + d); g.p) = lambda(v; p)", 100, 1e-8)
def _lambda_inv(s: Sampler, n: int, cfg: SeriesConfig):
    for _ in range(n):
        g = s.group_element()
        p = s.domain_point()
        yield invariance_residual(g, p, s.probe(p), cfg)


@check("superpotential_expansion",
       "lambda(v) = phi1 [zeta(v - v2) - zeta(v + v2) + 2 zeta(v2)] + phi0", 100, 1e-8)
def _lambda_exp(s: Sampler, n: int, cfg: SeriesConfig):
    for _ in range(n):
        p = s.domain_point()
        v = s.probe(p)
        yield rel1(superpotential(v, p, cfg), superpotential_expansion(v, p, cfg))


@check("jacobi_form_laws",
       "phi1(g.p) = (c tau + d)^-1 phi1(p), phi0(g.p) = phi0(p) for all group elements g",
       50, 1e-8)
def _form_laws(s: Sampler, n: int, cfg: SeriesConfig):
    for _ in range(n):
        g = s.group_element()
        p = s.domain_point()
        _, _, c, d = g.gamma
        q = act(g, p)
        j = c * p.tau + d
        yield max(rel(phi1(q, cfg) * j, phi1(p, cfg)), rel(phi0(q, cfg), phi0(p, cfg)))


@check("jacobi_form_index", "-(1/(2 pi i)) d/du phi = phi for phi0, phi1", 20, 1e-8)
def _index(s: Sampler, n: int, cfg: SeriesConfig):
    for _ in range(n):
        p = s.domain_point()
        yield max(abs(index_of(phi0, p, cfg) - 1), abs(index_of(phi1, p, cfg) - 1))


@check("phi0_theta_quotient", "phi0 = e^{-2 pi i u} theta1(v0)^2 / theta1(v2)^2", 50, 1e-9)
def _phi0_quot(s: Sampler, n: int, cfg: SeriesConfig):
    for _ in range(n):
        p = s.domain_point()
        q = cmath.exp(-2j * PI * p.u) * (theta1(p.v0, p.tau, cfg) / theta1(p.v2, p.tau, cfg)) ** 2
        yield rel(phi0(p, cfg), q)


@check("phi_ratio", "phi0 / phi1 = -wp'(v2) / (wp(v0) - wp(v2))", 50, 1e-8)
def _phi_ratio(s: Sampler, n: int, cfg: SeriesConfig):
    for _ in range(n):
        p = s.domain_point()
        r = -wp_dv(p.v2, p.tau, cfg) / (wp(p.v0, p.tau, cfg) - wp(p.v2, p.tau, cfg))
        yield rel(phi0(p, cfg) / phi1(p, cfg), r)


@check("generating_function",
       "G(0) = phi1 and G'(0) = phi0 + phi1 (2 theta'/theta(v2) - theta'/theta(2 v2))", 20, 1e-6)
def _genfun(s: Sampler, n: int, cfg: SeriesConfig):
    for _ in range(n):
        p = s.domain_point()
        yield max(rel(generating_function(0.0, p, cfg), phi1(p, cfg)),
                  rel(generating_function_dz(p, cfg), generating_function_dz_exact(p, cfg)))


# -------------------------------------------------------------- frobenius

@check("flat_round_trip", "flat(domain(flat(p))) = flat(p) via Newton inversion", 20, 1e-8)
def _round_trip(s: Sampler, n: int, cfg: SeriesConfig):
    for _ in range(n):
        p = s.domain_point()
        t = fb.flat_from_domain(p, cfg)
        guess = p.replace(u=p.u + 1e-3, v0=p.v0 - 1e-3)
        t2 = fb.flat_from_domain(fb.domain_from_flat(t, guess, cfg), cfg)
        yield float(np.max(np.abs(t2.as_array() - t.as_array()))) / max(1.0, float(np.max(np.abs(t.as_array()))))


@check("metric_equivalence",
       "closed-form g^{ab} in flat coordinates = push-forward of 2 dv0^2 - 2 dv2^2 + 2 du dtau",
       20, 1e-6)
def _metric_eq(s: Sampler, n: int, cfg: SeriesConfig):
    for _ in range(n):
        p = s.domain_point()
        t = fb.flat_from_domain(p, cfg)
        yield fb.entrywise_relative(fb.intersection_form_flat(t, cfg), fb.intersection_form_pushforward(p, cfg))


@check("saito_metric", "d g^{ab} / d t1 = eta^{ab}: eta^14 = -2 pi i, eta^23 = -1/2", 10, 1e-7)
def _saito(s: Sampler, n: int, cfg: SeriesConfig):
    eta = fb.saito_metric()
    for _ in range(n):
        t = s.flat_point()
        d = numdiff.central_diff(lambda h: fb.intersection_form_flat(t.shifted(0, h), cfg), 0.0, 1e-3)
        yield float(np.max(np.abs(d - eta)))


@check("wdvv_normalization", "c_{1ab} = eta_{ab}", 50, 1e-8)
def _normalization(s: Sampler, n: int, cfg: SeriesConfig):
    for _ in range(n):
        c = fb.third_derivatives(s.flat_point(), cfg)
        yield float(np.max(np.abs(c[0] - fb.saito_metric_lower())))


@check("wdvv_associativity", "c^m_{ab} c^d_{mg} = c^m_{gb} c^d_{ma}", 50, 1e-5)
def _assoc(s: Sampler, n: int, cfg: SeriesConfig):
    for _ in range(n):
        yield fb.wdvv_residual(s.flat_point(), cfg)


@check("quasi_homogeneity", "t1 dF/dt1 + t2 dF/dt2 = 2F - (t2)^2", 50, 1e-7)
def _quasi(s: Sampler, n: int, cfg: SeriesConfig):
    for _ in range(n):
        yield fb.euler_residual(s.flat_point(), cfg)


@check("euler_multiplication", "E^s c^b_{sa} = eta_{am} g^{mb}", 50, 1e-6)
def _euler_mult(s: Sampler, n: int, cfg: SeriesConfig):
    for _ in range(n):
        yield fb.euler_multiplication_residual(s.flat_point(), cfg)


@check("semisimplicity",
       "roots of det(g - u eta) pairwise distinct; residual is 1 / (smallest gap)", 50, 1e6)
def _semisimple(s: Sampler, n: int, cfg: SeriesConfig):
    for _ in range(n):
        u = fb.canonical_spectrum(s.flat_point(), cfg)
        gap = min(abs(u[i] - u[j]) for i in range(4) for j in range(i + 1, 4))
        yield math.inf if gap == 0 else 1.0 / gap


@check("det_jacobian_roots", "det d(phi0, phi1, v2, tau)/d(v0, v2, tau, u) = 0 at v0 in {0, 1/2, tau/2, (1+tau)/2}",
       50, 1e-10)
def _det_roots(s: Sampler, n: int, cfg: SeriesConfig):
    for _ in range(n):
        p = s.domain_point()
        yield max(abs(fb.det_jacobian(p.replace(v0=v0), cfg))
                  for v0 in (0.0, 0.5, p.tau / 2, (1 + p.tau) / 2))


@check("det_jacobian_oracle", "closed-form Jacobian determinant = finite-difference determinant", 20, 1e-6)
def _det_oracle(s: Sampler, n: int, cfg: SeriesConfig):
    for _ in range(n):
        p = s.domain_point()
        yield rel(fb.det_jacobian(p, cfg), fb.det_jacobian_fd(p, cfg))


@check("potentiality", "g^{ab} = deg(g^{ab}) eta^{aa'} eta^{bb'} d_a' d_b' F", 20, 1e-6)
def _potential(s: Sampler, n: int, cfg: SeriesConfig):
    for _ in range(n):
        yield fb.metric_potential_residual(s.flat_point(), cfg)


@check("third_derivatives_oracle", "closed-form third derivatives of F = finite differences of F", 5, 1e-6)
def _c_oracle(s: Sampler, n: int, cfg: SeriesConfig):
    for _ in range(n):
        t = s.flat_point()
        ca = fb.third_derivatives(t, cfg)
        cf = fb.third_derivatives(t, cfg, method="fd")
        yield float(np.max(np.abs(ca - cf))) / float(np.max(np.abs(ca)))


@check("log_branch_independence", "third derivatives of F do not depend on the branch of log", 3, 1e-6)
def _branch(s: Sampler, n: int, cfg: SeriesConfig):
    for _ in range(n):
        t = s.flat_point()
        c0 = fb.third_derivatives_fd(t, cfg, branch=0)
        c1 = fb.third_derivatives_fd(t, cfg, branch=1)
        yield float(np.max(np.abs(c0 - c1))) / float(np.max(np.abs(c0)))


# ------------------------------------------------------------------ runner

def _count(base: int, samples: int) -> int:
    return max(1, int(round(base * samples / 50)))


def euler_display_note(cfg: SuiteConfig) -> dict:
    """Size of E(F) - 2F + 2 t2, the alternative form of the Euler relation, which does not hold."""
    s = Sampler(make_rng(cfg.seed, 10_000), cfg.box)
    worst = 0.0
    for _ in range(_count(10, cfg.samples)):
        t = s.flat_point()
        worst = max(worst, abs(fb.euler_defect(t, cfg.series) + 2 * t.t2))
    return {"name": "euler_alternative_form",
            "statement": "t1 dF/dt1 + t2 dF/dt2 = 2F - 2 t2",
            "max_residual": float(worst),
            "comment": "does not hold; the verified relation is 2F - (t2)^2"}


def run_suite(cfg: SuiteConfig | None = None, names: Optional[List[str]] = None) -> VerificationReport:
    """Run all checks (or the named subset) and return the report."""
    cfg = cfg or SuiteConfig()
    start = time.perf_counter()
    order = list(CHECKS)
    results = []
    for idx, name in enumerate(order):
        if names is not None and name not in names:
            continue
        chk = CHECKS[name]
        n = _count(chk.count, cfg.samples)
        sampler = Sampler(make_rng(cfg.seed, idx), cfg.box)
        error = None
        try:
            worst = _max(chk.run(sampler, n, cfg.series))
        except Exception as exc:  # a crashing check is a failing check
            worst, error = math.inf, f"{type(exc).__name__}: {exc}"
        tol = cfg.tol_overrides.get(name, chk.tolerance)
        results.append(CheckResult(name, chk.anchor, n, worst, tol, error))
    results.sort(key=lambda r: r.name)
    notes = [euler_display_note(cfg)] if names is None or "quasi_homogeneity" in names else []
    report = VerificationReport(seed=cfg.seed, samples=cfg.samples, checks=results, notes=notes)
    report.wall_time = time.perf_counter() - start
    if cfg.out is not None:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(report.to_json() + "\n")
    return report
