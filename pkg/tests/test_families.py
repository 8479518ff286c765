import pytest

from markoffbm.brauer import Verdict, bm_verdict, thm11_consistency
from markoffbm.errors import HypothesisViolation
from markoffbm.families import (
    FAMILIES, family_instance, find_quartic_instances, find_surjectivity_instance,
    normalize_family_key, quartic_hypotheses, surjectivity_hypotheses,
)
from markoffbm.padic import field_degree
from markoffbm.search import box_search

INSTANCES = [
    ("3.6", (3, 1), (3, 14)),
    ("3.7", (10, 1), (10, 43)),
    ("3.8", (28, 1), (28, 118)),
    ("3.9", (75, 1), (75, 310)),
    ("3.10", (3, 3, 1), (27, 126)),
    ("3.11", (3,), (-3, -6)),
]


@pytest.mark.parametrize("key,params,am", INSTANCES)
def test_instances_obstructed(key, params, am):
    a, m, failed = family_instance(key, *params)
    assert (a, m) == am and failed == []
    v = bm_verdict(a, m)
    assert v.verdict is Verdict.OBSTRUCTION
    designated = FAMILIES[key].designated_prime
    assert v.profile("B", designated).achieved == {1 / 2}
    if field_degree(a, m) == 8:
        assert thm11_consistency(a, m)
    assert box_search(a, m, 150) == []


def test_more_members_obstructed():
    for key, params in [("3.6", (5, 1)), ("3.6", (-3, 1)), ("3.11", (5,)), ("3.11", (11,))]:
        a, m, _ = family_instance(key, *params)
        assert bm_verdict(a, m).verdict is Verdict.OBSTRUCTION, (key, params)


def test_violation_names_clauses():
    with pytest.raises(HypothesisViolation) as info:
        family_instance("3.6", 3, 3)
    assert "prime 3 | d: p = +-1 mod 8 or (a/p) = -1" in info.value.failed
    with pytest.raises(HypothesisViolation) as info:
        family_instance("3.11", 7)
    assert info.value.failed == ["q = +-3 mod 8"]
    a, m, failed = family_instance("3.6", 3, 3, strict=False)
    assert (a, m) == (3, 30) and failed


def test_keys():
    assert normalize_family_key("prop3.10") == "3.10"
    with pytest.raises(KeyError):
        normalize_family_key("3.12")
    with pytest.raises(TypeError):
        family_instance("3.6", 3)


def test_surjectivity_instance():
    a, m, p = find_surjectivity_instance()
    assert (a, m, p) == (-2, -1, 7)
    assert surjectivity_hypotheses(a, m, p) == []
    assert bm_verdict(a, m).verdict is Verdict.NO_OBSTRUCTION
    assert "p does not divide a" in surjectivity_hypotheses(7, -1, 7)


def test_quartic_instances():
    found = find_quartic_instances(200)
    assert found == [(-60, -150, 5)]
    assert quartic_hypotheses(-60, -150, 5) == []
    assert quartic_hypotheses(2, 3, 5)
