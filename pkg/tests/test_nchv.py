"""Exhaustive hidden-variable enumeration and the classical bound."""

import itertools

import numpy as np
import pytest

from contextsim.nchv import (
    CONTEXT_TERMS,
    certify_bound,
    chi_of_assignment,
    chi_table,
    enumerate_assignments,
)
from contextsim.pm_square import LABELS


def chi_oracle(values):
    """Direct substitution into the six signed triple products."""
    v = dict(zip(LABELS, values))
    return (v["C"] * v["A"] * v["B"]
            + v["c"] * v["b"] * v["a"]
            + v["beta"] * v["gamma"] * v["alpha"]
            + v["alpha"] * v["A"] * v["a"]
            + v["beta"] * v["b"] * v["B"]
            - v["c"] * v["gamma"] * v["C"])


def test_enumeration_count_and_uniqueness():
    assignments = enumerate_assignments()
    assert len(assignments) == 512
    as_tuples = {tuple(a[l] for l in LABELS) for a in assignments}
    assert len(as_tuples) == 512


def test_enumeration_starts_at_all_plus_one():
    first = enumerate_assignments()[0]
    assert all(v == 1 for v in first.values())


def test_chi_all_plus_one():
    assert chi_of_assignment({l: 1 for l in LABELS}) == 4


def test_chi_all_minus_one():
    # Each triple product is (-1)^3 = -1, so chi = 5(-1) - (-1) = -4.
    assert chi_of_assignment({l: -1 for l in LABELS}) == -4


def test_chi_single_flip_of_C():
    # C enters <CAB> and -<c gamma C>; both terms flip, so chi stays 4.
    values = {l: 1 for l in LABELS}
    values["C"] = -1
    assert chi_of_assignment(values) == chi_oracle([values[l] for l in LABELS]) == 4


def test_chi_matches_oracle_everywhere():
    for values in itertools.product((1, -1), repeat=9):
        assert chi_of_assignment(dict(zip(LABELS, values))) == chi_oracle(values)


def test_chi_rejects_malformed_assignment():
    with pytest.raises(ValueError):
        chi_of_assignment({l: 1 for l in LABELS[:-1]})
    bad = {l: 1 for l in LABELS}
    bad["A"] = 0
    with pytest.raises(ValueError):
        chi_of_assignment(bad)


def test_certified_bound():
    cert = certify_bound()
    assert cert.max_chi == 4
    assert cert.min_chi == -4
    assert cert.num_assignments == 512
    # Independent recount of the maximum attainment.
    table = [chi_oracle(values) for values in itertools.product((1, -1), repeat=9)]
    assert max(table) == 4
    assert cert.argmax_count == sum(1 for v in table if v == 4)


def test_chi_is_always_even():
    assert all(value % 2 == 0 for value in chi_table())


def test_chi_range():
    table = chi_table()
    assert all(-6 <= value <= 6 for value in table)
    assert 6 not in table and -6 not in table


def test_convex_mixtures_respect_bound():
    table = np.array(chi_table(), dtype=float)
    rng = np.random.default_rng(12)
    for _ in range(1000):
        weights = rng.dirichlet(np.ones(512))
        assert float(weights @ table) <= 4.0 + 1e-9


def test_context_terms_signs():
    signs = tuple(sign for _, sign in CONTEXT_TERMS)
    assert signs == (1, 1, 1, 1, 1, -1)
