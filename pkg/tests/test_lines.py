from fractions import Fraction

import pytest

from markoffbm.errors import DegenerateParameters, HypothesisViolation
from markoffbm.lines import (
    DIVISOR_SUPPORT, Line, cocycle_identity_check, divisor_vanishing_check, f_g_functions,
    incidence, incidence_matrix, quartic_fixtures, gamma_ratio, line_label,
    line_on_surface, lines_catalog, vanishes_on_line, vanishing_lines,
)
from markoffbm.tower import TowerElement

PARAMS = [(2, 3), (3, 14), (5, 7), (-1, -2), (10, 43)]


def _form(params, *coeffs):
    return tuple(TowerElement.scalar(c, params) for c in coeffs)


def test_catalog_shape():
    cat = lines_catalog(2, 3)
    assert len(cat) == 27
    assert sum(1 for k in cat if k.startswith("H")) == 3
    assert cat["H1"].forms == (_form((2, 3), 1, 0, 0, 0), _form((2, 3), 0, 0, 0, 1))
    assert line_label(4, 1, -1) == "l4(1,-1)"


def test_l4_coefficients():
    params = (2, 3)
    one, al, be, ga = TowerElement.generators(params)
    L = lines_catalog(*params)["l4(1,1)"]
    zero = TowerElement.scalar(0, params)
    assert L.forms[0] == (al, zero, zero, -be)
    assert L.forms[1] == (zero, al, -(be + ga) * Fraction(1, 2), zero)


@pytest.mark.parametrize("a,m", PARAMS)
def test_all_lines_on_surface(a, m):
    for label, L in lines_catalog(a, m).items():
        assert line_on_surface(L, a, m), label


def test_line_off_surface():
    params = (2, 3)
    L = Line("x=y=0", (_form(params, 1, 0, 0, 0), _form(params, 0, 1, 0, 0)))
    assert not line_on_surface(L, *params)


@pytest.mark.parametrize("a,m", PARAMS[:3])
def test_incidences(a, m):
    cat = lines_catalog(a, m)
    ls = [line_label(i, 1, 1) for i in range(1, 7)]
    M = incidence_matrix(ls, cat)
    assert all(M[i][j] == 0 for i in range(6) for j in range(6) if i != j)
    assert incidence(cat["H1"], cat["H2"]) == 1
    for j in (1, 2, 3):
        for i in range(1, 7):
            assert incidence(cat[f"H{j}"], cat[ls[i - 1]]) == int((i - j) % 6 in (0, 3))


def test_each_line_meets_ten_others():
    cat = lines_catalog(2, 3)
    labels = list(cat)
    M = incidence_matrix(labels, cat)
    assert all(sum(v for v in row if v is not None) == 10 for row in M)


def test_incidence_rejects_equal_lines():
    cat = lines_catalog(2, 3)
    with pytest.raises(ValueError):
        incidence(cat["H1"], cat["H1"])


def test_catalog_rejects_degenerate():
    with pytest.raises(DegenerateParameters):
        lines_catalog(2, 8)
    with pytest.raises(DegenerateParameters):
        lines_catalog(0, 3)


def test_divisor_support_examples():
    params = (2, 3)
    cat = lines_catalog(*params)
    f, g = f_g_functions(params)
    assert vanishes_on_line(f, cat["l4(1,1)"])
    assert vanishes_on_line(g, cat["l5(1,1)"])
    assert not vanishes_on_line(f, cat["l5(1,1)"])


@pytest.mark.parametrize("a,m", [(2, 3), (3, 14), (-45, -30), (-28, -49)])
def test_divisor_vanishing(a, m):
    assert divisor_vanishing_check("f", a, m)
    assert divisor_vanishing_check("g", a, m)
    assert vanishing_lines("f", a, m) == sorted(line_label(*k) for k in DIVISOR_SUPPORT["f"])
    assert vanishing_lines("g", a, m) == sorted(line_label(*k) for k in DIVISOR_SUPPORT["g"])


def test_divisor_check_unknown_name():
    with pytest.raises(ValueError):
        divisor_vanishing_check("h", 2, 3)


def test_gamma_ratio_validation():
    for a, m in [(-1, -5), (-1, 4), (2, 3)]:
        with pytest.raises(HypothesisViolation):
            gamma_ratio(a, m)
    c = gamma_ratio(-45, -30)
    assert c * c * (-45) * (-30) == -30 - 4 * (-45)


def test_fixtures():
    fx = quartic_fixtures(60)
    assert (-45, -30) in fx and (-28, -49) in fx
    for a, m in fx:
        c = gamma_ratio(a, m)
        assert c * c * a * m == m - 4 * a


@pytest.mark.parametrize("a,m", [(-45, -30), (-28, -49), (-28, -14), (-25, -50)])
def test_cocycle_identities(a, m):
    for sign in (1, -1):
        rep = cocycle_identity_check(a, m, sign)
        assert rep.ok, rep.identities
        assert len(rep.identities) == 4


def test_cocycle_check_requires_hypotheses():
    with pytest.raises(HypothesisViolation) as info:
        cocycle_identity_check(3, 14)
    assert any("rational square" in s for s in info.value.failed)
