import pytest
from hypothesis import given, settings, strategies as st

from markoffbm.errors import NotOnSurface
from markoffbm.padic import surface_value
from markoffbm.search import box_search, vieta_neighbors, vieta_orbit


def brute(a, m, B):
    r = range(-B, B + 1)
    return sorted((x, y, z) for x in r for y in r for z in r if surface_value(a, m, x, y, z) == 0)


def test_small_box():
    pts = box_search(2, 1, 2)
    for p in [(0, 0, 1), (0, 0, -1), (0, 1, 0), (0, -1, 0)]:
        assert p in pts


@settings(max_examples=40, deadline=None)
@given(st.integers(-12, 12), st.integers(-30, 30), st.integers(0, 6))
def test_matches_brute_force(a, m, B):
    assert box_search(a, m, B) == brute(a, m, B)


@settings(max_examples=40, deadline=None)
@given(st.integers(-12, 12), st.integers(-40, 40))
def test_symmetries(a, m):
    pts = set(box_search(a, m, 25))
    for x, y, z in pts:
        assert surface_value(a, m, x, y, z) == 0
        assert (x, z, y) in pts
        assert (x, -y, -z) in pts


def test_sorted_output():
    pts = box_search(1, 5, 30)
    assert pts == sorted(pts)


def test_large_parameters_use_exact_arithmetic():
    # beyond int64 headroom the object path must still be exact
    a, m = 10 ** 12, 10 ** 12 + 1
    assert (1, 1, 0) in box_search(a, m, 3)


@pytest.mark.parametrize("a,m", [(3, 14), (-3, -6), (10, 43)])
def test_obstructed_instances_empty(a, m):
    assert box_search(a, m, 1000) == []


def test_negative_bound():
    with pytest.raises(ValueError):
        box_search(1, 1, -1)


def test_orbit_moves():
    orbit = vieta_orbit((0, 0, 1), 2, 1, 1)
    assert (0, 0, -1) in orbit
    assert vieta_orbit((0, 0, 1), 2, 1, 0) == {(0, 0, 1), (0, 1, 0)}
    assert vieta_neighbors(2, (3, 1, 2)) == [(3, 5, 2), (3, 1, 1), (3, 2, 1)]


def test_orbit_points_on_surface():
    a, m = 2, 4
    seed = next(p for p in box_search(a, m, 10) if any(p))
    orbit = vieta_orbit(seed, a, m, 6)
    assert len(orbit) > 2
    assert all(surface_value(a, m, *p) == 0 for p in orbit)


def test_orbit_cap():
    orbit = vieta_orbit((1, 1, 1), 1, 2, 50, cap=100)
    assert len(orbit) <= 100


def test_orbit_rejects_bad_seed():
    with pytest.raises(NotOnSurface):
        vieta_orbit((1, 1, 1), 2, 1, 3)
