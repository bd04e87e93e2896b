import json

import pytest

from artifact.gl2types import theta, theta_exponent
from artifact.lattices import (
    PrecisionError,
    battery_expectations,
    battery_table_lines,
    gluing_checks,
    gluing_expectations,
    homothetic,
    in_lattice,
    k1_generation_check,
    lattice_of,
    lattice_with_cosocle,
    load_battery_table,
    section33_checks,
    sym1_lattice,
)
from artifact.report import normalize_payload

P = 5


def _theta_lattice(a, b, N=6):
    return lattice_of(theta(theta_exponent(a, b, P), P, N).lattice)


def test_shipped_table_matches_closed_forms():
    table = load_battery_table()
    regenerated = {}
    for line in battery_table_lines(P):
        if line.startswith("#"):
            continue
        key, payload = line.split("\t", 1)
        regenerated[key] = json.loads(payload)
    assert table == regenerated


def test_table_covers_every_instance():
    table = load_battery_table()
    for b in (0, 1):
        for a in range(P):
            for key, val in battery_expectations(P, a, b).items():
                assert table[key] == normalize_payload(val)
        for a in range(1, P - 2):
            assert set(gluing_expectations(P, a, b)) <= set(table)


def test_extreme_a_has_short_battery():
    keys = battery_expectations(P, 0, 0)
    assert len(keys) == 4
    assert all(k.startswith("prop-reduction-L-2/") for k in keys)


def test_sublattice_2_only_for_a_at_least_two():
    assert not any("sublattice-2" in k for k in battery_expectations(P, 1, 0))
    assert any("sublattice-2" in k for k in battery_expectations(P, 2, 0))


@pytest.mark.parametrize("a,b", [(1, 0), (2, 1), (0, 0)])
def test_section33_sample(a, b):
    reports = section33_checks(P, a, b, N=10, table=load_battery_table())
    bad = [(r.check_id, r.expected, r.computed) for r in reports if not r.ok]
    assert not bad


@pytest.mark.parametrize("a,b", [(1, 0), (2, 1)])
def test_gluing_sample(a, b):
    reports = gluing_checks(P, a, b, N=10)
    bad = [(r.check_id, r.expected, r.computed) for r in reports if not r.ok]
    assert not bad


def test_homothety_invariance():
    V = _theta_lattice(2, 0)
    assert homothetic(V, V.scaled(1))
    assert homothetic(V.scaled(2), V)
    assert in_lattice(V, V.scaled(1))
    assert not in_lattice(V.scaled(1), V)


def test_lattice_with_cosocle_is_defined_up_to_homothety():
    from artifact.gl2types import sigma_label

    V = _theta_lattice(2, 0)
    T1 = lattice_with_cosocle(V, sigma_label(1, 1, P))
    T2 = lattice_with_cosocle(V.scaled(1), sigma_label(1, 1, P))
    assert homothetic(T1, T2)


def test_cosocle_of_constructed_lattice():
    from artifact.gl2types import sigma_label
    from artifact.modrep import cosocle

    V = _theta_lattice(2, 0)
    top = sigma_label(1, 1, P)
    T = lattice_with_cosocle(V, top)
    assert dict(cosocle(T.reduction())) == {top: 1}


def test_k1_generation_of_full_lattice():
    from artifact.gl2types import sigma_label

    V = _theta_lattice(2, 0, N=8)
    T = lattice_with_cosocle(V, sigma_label(1, 1, P))
    L = sym1_lattice(T)
    assert k1_generation_check(L, L)


def test_k1_generation_needs_two_digits():
    V = _theta_lattice(2, 0).to_precision(1)
    with pytest.raises(PrecisionError):
        k1_generation_check(V, V)
