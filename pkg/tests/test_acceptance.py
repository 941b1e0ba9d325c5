"""Acceptance criteria, one test per criterion.

Each test prints a single ``PASS``/``FAIL`` line.  Tolerances and sample
counts are pinned here and compared against the residuals of a default
``verify`` run; the checks' own tolerances are not consulted.
"""

import json

import numpy as np
import pytest

from jacobi_orbit.frobenius import det_jacobian, saito_metric
from jacobi_orbit.group import DomainPoint
from jacobi_orbit.verify import SuiteConfig, run_suite

# criterion id -> (title, [(check name, tolerance, minimum sample count)])
CRITERIA = {
    1: ("theta transformation laws",
        [("theta_quasi_periodicity", 1e-8, 100), ("theta_modularity", 1e-8, 100)]),
    2: ("heat equation", [("heat_equation", 1e-10, 100)]),
    3: ("three-term theta identity and its derivative",
        [("theta_lemma", 1e-7, 100), ("theta_lemma_derivative", 1e-7, 100)]),
    4: ("superpotential invariance", [("superpotential_invariance", 1e-8, 100)]),
    5: ("superpotential expansion", [("superpotential_expansion", 1e-8, 100)]),
    6: ("metric equivalence", [("metric_equivalence", 1e-6, 20)]),
    7: ("Saito metric", [("saito_metric", 1e-7, 10)]),
    8: ("WDVV normalization, associativity, quasi-homogeneity",
        [("wdvv_normalization", 1e-8, 50), ("wdvv_associativity", 1e-5, 50),
         ("quasi_homogeneity", 1e-7, 50)]),
    9: ("Euler multiplication equals intersection form", [("euler_multiplication", 1e-6, 50)]),
    10: ("semisimplicity and det roots", [("det_jacobian_roots", 1e-10, 50)]),
    11: ("potentiality", [("potentiality", 1e-6, 20)]),
}
MIN_GAP = 1e-6


@pytest.fixture(scope="module")
def report():
    return run_suite(SuiteConfig())


def emit(capsys, cid, title, ok, detail):
    with capsys.disabled():
        print(f"\n{'PASS' if ok else 'FAIL'}  criterion {cid:>2}: {title} ({detail})")


@pytest.mark.parametrize("cid", sorted(CRITERIA))
def test_criterion(report, capsys, cid):
    title, checks = CRITERIA[cid]
    ok, parts = True, []
    for name, tol, n_min in checks:
        c = report.check(name)
        good = c.error is None and c.samples >= n_min and c.max_residual <= tol
        ok &= good
        parts.append(f"{name} {c.max_residual:.2e} <= {tol:.0e}, n={c.samples}")
    if cid == 7:
        eta = saito_metric()
        expect = np.zeros((4, 4), dtype=complex)
        expect[0, 3] = expect[3, 0] = -2j * np.pi
        expect[1, 2] = expect[2, 1] = -0.5
        ok &= bool(np.max(np.abs(eta - expect)) < 1e-15)
    if cid == 8:
        note = next(n for n in report.notes if n["name"] == "euler_alternative_form")
        parts.append(f"alternative form residual {note['max_residual']:.2e} recorded")
    if cid == 10:
        c = report.check("semisimplicity")
        gap = 1.0 / c.max_residual
        good = c.error is None and c.samples >= 50 and gap > MIN_GAP
        ok &= good
        parts.append(f"min eigenvalue gap {gap:.2e} > {MIN_GAP:.0e}, n={c.samples}")
        tau = 0.3 + 1.1j
        worst = max(abs(det_jacobian(DomainPoint(0.1, v0, 0.27, tau)))
                    for v0 in (0, 0.5, tau / 2, (1 + tau) / 2))
        ok &= worst < 1e-10
    emit(capsys, cid, title, ok, "; ".join(parts))
    assert ok


def test_criterion_12_determinism(report, capsys):
    again = run_suite(SuiteConfig())
    a = json.loads(report.to_json(include_time=False))
    b = json.loads(again.to_json(include_time=False))
    ok = a == b and [c.max_residual for c in report.checks] == [c.max_residual for c in again.checks]
    emit(capsys, 12, "determinism", ok, "two runs with the same seed")
    assert ok


def test_all_checks_pass(report, capsys):
    failed = [c.name for c in report.checks if not c.passed]
    emit(capsys, "--", "full verification suite", not failed,
         f"{len(report.checks) - len(failed)}/{len(report.checks)} checks")
    assert not failed
