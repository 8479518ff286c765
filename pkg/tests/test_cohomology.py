import random

import pytest
from hypothesis import given, settings, strategies as st

from markoffbm.cohomology import (
    CATALOG_KEYS, BicyclicComplex, CocycleClass, CohomologyGroup, abelian_group_action,
    catalog_h1, class_order, complex_property, h1_bicyclic, h1_cyclic, h1_finite_group,
    h2_cyclic, l5_l4_class, quartic_complex, quartic_family_class, picard_action_catalog,
    random_commuting_involutions,
)
from markoffbm.errors import NotCocycle, RelationError
from markoffbm.linalg import (
    identity, kernel_basis, matmul, matvec, membership_order, quotient_invariants,
    smith_normal_form,
)

SIGN = [[-1]]
TRIV = [[1]]


def test_snf_examples():
    assert smith_normal_form(identity(3))[1] == identity(3)
    assert smith_normal_form([[2, 0], [0, 4]])[1] == [[2, 0], [0, 4]]
    assert smith_normal_form([[2, 0], [0, 3]])[1] == [[1, 0], [0, 6]]


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_snf_is_a_factorization(r, c, data):
    A = [[data.draw(st.integers(-9, 9)) for _ in range(c)] for _ in range(r)]
    U, D, V = smith_normal_form(A)
    assert matmul(matmul(U, A), V) == D
    diag = [D[i][i] for i in range(min(r, c))]
    assert all(D[i][j] == 0 for i in range(r) for j in range(c) if i != j)
    nz = [d for d in diag if d]
    assert all(d > 0 for d in nz)
    assert all(nz[i + 1] % nz[i] == 0 for i in range(len(nz) - 1))
    assert nz == [d for d in diag[:len(nz)]]


def test_kernel_and_quotient():
    A = [[1, 1, 0], [0, 2, 2]]
    K = kernel_basis(A)
    assert len(K) == 1 and all(x == 0 for x in matvec(A, K[0]))
    # Z^2 / <(2, 0), (0, 3)> = Z/6
    assert quotient_invariants(identity(2), [[2, 0], [0, 3]]) == ([6], 0)
    assert quotient_invariants(identity(2), [[2, 0]]) == ([2], 1)
    assert membership_order(identity(2), [[2, 0], [0, 4]], [1, 1]) == 4
    assert membership_order(identity(2), [[2, 0]], [0, 1]) == 0


def test_cyclic_examples():
    assert h1_cyclic(TRIV, 2).is_trivial()
    assert h1_cyclic(SIGN, 2) == CohomologyGroup((2,))
    assert h2_cyclic(SIGN, 2).is_trivial()
    assert h2_cyclic(TRIV, 2) == CohomologyGroup((2,))
    assert h2_cyclic([[-1, 0], [0, -1]], 2).is_trivial()


def test_cyclic_rejects_wrong_order():
    with pytest.raises(RelationError):
        h1_cyclic([[0, 1], [1, 0]], 3)


def test_bicyclic_small():
    assert h1_bicyclic(TRIV, TRIV, 2, 2).is_trivial()
    assert h1_bicyclic(SIGN, SIGN, 2, 2) == h1_finite_group(abelian_group_action([SIGN, SIGN], [2, 2]))
    assert h1_bicyclic(SIGN, TRIV, 2, 2) == CohomologyGroup((2,))


def test_trivial_action_has_no_h1():
    for r in (1, 2, 3):
        I = identity(r)
        assert h1_finite_group(abelian_group_action([I, I], [2, 2])).is_trivial()
        assert h1_finite_group(abelian_group_action([I], [3])).is_trivial()


def test_catalog_table():
    for i in range(1, 5):
        assert catalog_h1(f"prop2.2-case{i}").is_trivial()
    assert catalog_h1("prop2.3") == CohomologyGroup((2, 2))
    g = catalog_h1("lemma5.1")
    assert g == CohomologyGroup((2, 4))
    assert str(g) == "Z/2 + Z/4" and g.order == 8 and g.exponent == 4
    with pytest.raises(KeyError):
        catalog_h1("prop9.9")


def test_catalog_actions_are_consistent():
    cat = picard_action_catalog()
    assert list(cat) == CATALOG_KEYS
    for act in cat.values():
        for name, M in act.generators.items():
            n = act.orders[name]
            P = identity(len(M))
            for _ in range(n):
                P = matmul(P, M)
            assert P == identity(len(M))


def test_group_cocycles_agree_on_catalog():
    act = picard_action_catalog()["lemma5.1"]
    S, T = act.matrix("sigma"), act.matrix("tau")
    assert h1_finite_group(abelian_group_action([S, T], [2, 2])) == CohomologyGroup((2, 4))
    act = picard_action_catalog()["prop2.3"]
    gens = [act.matrix(n) for n in ("sigma", "tau", "theta")]
    assert h1_finite_group(abelian_group_action(gens, [2, 2, 2])) == CohomologyGroup((2, 2))


def test_h2_of_sigma_on_tau_invariants():
    # tau fixes l1 and l2 - l3; sigma negates both
    assert h2_cyclic([[-1, 0], [0, -1]], 2).is_trivial()
    act = picard_action_catalog()["lemma5.1"]
    tau = act.matrix("tau")
    assert matvec(tau, [1, 0, 0, 0]) == [1, 0, 0, 0]
    assert matvec(tau, [0, 1, -1, 0]) == [0, 1, -1, 0]


def test_class_orders():
    cx = quartic_complex()
    assert class_order(CocycleClass((0,) * 4, (0,) * 4), cx) == 1
    assert class_order(l5_l4_class(), cx) == 4
    for y2 in (1, 3, 5):
        for x1 in (0, 1):
            for x2 in (0, 1):
                for y1 in (0, 1):
                    assert class_order(quartic_family_class(x1, x2, y1, y2), cx) == 4
    # even y2 gives classes of order dividing 2
    assert class_order(quartic_family_class(1, 0, 1, 2), cx) in (1, 2)


def test_class_order_rejects_non_cocycle():
    with pytest.raises(NotCocycle):
        class_order(CocycleClass((0, 1, 0, 0), (0, 0, 0, 0)), quartic_complex())
    # reading l5 as l2 + l4 - l1 does not even give a cocycle
    with pytest.raises(NotCocycle):
        class_order(CocycleClass((-1, 1, 0, 1), (0, 0, 0, 1)), quartic_complex())


def test_complex_squares_to_zero():
    assert complex_property(quartic_complex())
    rng = random.Random(3)
    for _ in range(10):
        S, T = random_commuting_involutions(rng.randint(1, 6), rng)
        assert complex_property(BicyclicComplex(S, 2, T, 2))


@pytest.mark.parametrize("seed", range(5))
def test_random_pairs_cross_oracle(seed):
    rng = random.Random(seed)
    for _ in range(10):
        S, T = random_commuting_involutions(rng.randint(1, 6), rng)
        assert matmul(S, T) == matmul(T, S)
        assert h1_bicyclic(S, T, 2, 2) == h1_finite_group(abelian_group_action([S, T], [2, 2]))


def test_group_order_cap():
    with pytest.raises(ValueError):
        abelian_group_action([SIGN] * 5, [2] * 5)
