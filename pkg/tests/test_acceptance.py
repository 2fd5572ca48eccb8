"""Acceptance suite: one check per criterion, each printing a PASS/FAIL line.

The collected lines are printed in the terminal summary (see conftest.py).
"""

import time

import pytest

from petzloss import checks

# criterion number, ACCEPTANCE key, runtime budget in seconds (None if unbounded)
CRITERIA = [
    (1, "fixed_point", 1.0),
    (2, "closed_form_eta_prime", None),
    (3, "cp_saturation", 1.0),
    (4, "result3", 10.0),
    (5, "result2", None),
    (6, "fidelity_oracle", 60.0),
    (7, "channel_oracle", 120.0),
    (8, "ancilla_determinant", 5.0),
    (9, "fig4_claims", 60.0),
    (10, "figure_orderings", None),
]

LINES: list[tuple[int, str]] = []


@pytest.mark.slow
@pytest.mark.parametrize("number, key, budget", CRITERIA, ids=[c[1] for c in CRITERIA])
def test_criterion(number, key, budget):
    start = time.perf_counter()
    res = checks.ACCEPTANCE[key]()
    elapsed = time.perf_counter() - start
    line = f"{res.line()} ({elapsed:.2f} s)"
    LINES.append((number, line))
    print(line)
    assert res.status == checks.PASS, line
    if budget is not None:
        assert elapsed < budget, f"{key} took {elapsed:.2f} s, budget {budget} s"
