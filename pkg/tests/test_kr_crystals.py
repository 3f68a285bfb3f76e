import itertools

import pytest
from hypothesis import given, settings, strategies as st

from krcrystals import cartan as ct
from krcrystals import kr_crystals as krc
from krcrystals.crystal_core import check_inverse, serialize, tensor_product
from krcrystals.errors import UnsupportedSpec
from krcrystals.kn_tableaux import weyl_dimension
from krcrystals.kr_crystals import KRSpec, kr, kr_spec


def edge_set(g):
    return {(serialize(b), i, serialize(c)) for b, i, c in g.edges()}


def lattice(max_rank=3, max_s=2, families=ct.FAMILIES):
    for fam in families:
        for n in range(ct.MIN_RANK[fam], max_rank + 1):
            spec = ct.make_spec(fam, n)
            for r in spec.classical_nodes:
                for s in range(1, max_s + 1):
                    yield KRSpec(spec, r, s)


@st.composite
def small_kr(draw, max_rank=3, max_s=2):
    fam = draw(st.sampled_from(ct.FAMILIES))
    n = draw(st.integers(ct.MIN_RANK[fam], max(max_rank, ct.MIN_RANK[fam])))
    spec = ct.make_spec(fam, n)
    r = draw(st.integers(1, n))
    s = draw(st.integers(1, max_s))
    k = KRSpec(spec, r, s)
    expected = sum(weyl_dimension(k.xtype, n, hw) for hw in krc.expected_decomposition(k))
    if expected > 1500:
        k = KRSpec(spec, 1, 1)
    return k


def test_level_one_c2():
    g = kr(kr_spec("C1", 2, 1, 1))
    assert sorted(serialize(b) for b in g.vertices) == ["-1", "-2", "1", "2"]
    assert edge_set(g) == {("1", 1, "2"), ("2", 2, "-2"), ("-2", 1, "-1"), ("-1", 0, "1")}


def test_level_one_b2():
    g = kr(kr_spec("B1", 2, 1, 1))
    assert len(g) == 5
    assert edge_set(g) == {("1", 1, "2"), ("2", 2, "0"), ("0", 2, "-2"), ("-2", 1, "-1"),
                           ("-1", 0, "2"), ("-2", 0, "1")}


def test_type_a_examples():
    g = krc.kr_type_A(2, 1, 1)
    assert edge_set(g) >= {("3", 0, "1")}
    assert [(serialize(b), serialize(c)) for b, i, c in g.edges() if i == 0] == [("3", "1")]
    assert len(krc.kr_type_A(2, 2, 1)) == 3
    assert len(krc.kr_type_A(3, 2, 2)) == 20


def test_regime_and_diamond_tables():
    want = {
        ("A1", 3): [("IRR", "empty")] * 3,
        ("B1", 3): [("AUT", "vertical_domino")] * 2 + [("VIR", "vertical_domino")],
        ("C1", 3): [("VIR", "horizontal_domino")] * 2 + [("IRR", "empty")],
        ("D1", 5): [("AUT", "vertical_domino")] * 3 + [("IRR", "empty")] * 2,
        ("A2odd", 3): [("AUT", "vertical_domino")] * 3,
        ("A2even", 3): [("VIR", "box")] * 3,
        ("D2", 3): [("VIR", "box")] * 2 + [("IRR", "empty")],
    }
    for (fam, n), rows in want.items():
        spec = ct.make_spec(fam, n)
        assert [(krc.regime(spec, r), krc.diamond(spec, r)) for r in spec.classical_nodes] == rows


def test_kr_spec_errors():
    with pytest.raises(UnsupportedSpec):
        kr_spec("A1", 2, 3, 1)
    with pytest.raises(UnsupportedSpec):
        kr_spec("A1", 2, 1, 0)
    with pytest.raises(UnsupportedSpec):
        krc.kr_aut(kr_spec("A1", 2, 1, 1))
    with pytest.raises(UnsupportedSpec):
        krc.kr_virtual(kr_spec("D1", 4, 1, 1))


def test_decomposition_examples():
    cases = [
        (("D1", 4, 2, 1), [(0, 0, 0, 0), (0, 1, 0, 0)]),
        (("A2odd", 2, 1, 1), [(1, 0)]),
        (("B1", 3, 2, 1), [(0, 0, 0), (0, 1, 0)]),
        (("A2even", 2, 1, 1), [(0, 0), (1, 0)]),
        (("D2", 2, 1, 1), [(0, 0), (1, 0)]),
        (("C1", 3, 1, 2), [(0, 0, 0), (2, 0, 0)]),
        (("A2even", 4, 2, 1), [(0, 0, 0, 0), (0, 1, 0, 0), (1, 0, 0, 0)]),
        (("A1", 3, 2, 2), [(0, 2, 0)]),
    ]
    for args, want in cases:
        k = kr_spec(*args)
        assert krc.expected_decomposition(k) == want, args
        ok, found, _ = krc.classical_decomposition_check(k)
        assert ok and found == want, args


def test_decomposition_lattice_rank3():
    for k in lattice(3, 2):
        ok, found, expected = krc.classical_decomposition_check(k)
        assert ok, (k.name(), found, expected)


def test_sizes_match_weyl_dimension():
    for k in lattice(3, 2):
        g = kr(k)
        assert len(g) == sum(weyl_dimension(k.xtype, k.n, hw) for hw in krc.expected_decomposition(k))


@settings(max_examples=25, deadline=None)
@given(small_kr())
def test_regular_connected_inverse(k):
    g = kr(k)
    assert check_inverse(g)
    assert krc.regularity_failures(g, first_only=True) == []
    assert krc.is_connected(g)


def test_lemma_eps0_bounded_on_irr():
    for k in lattice(4, 2):
        if k.regime != krc.IRR:
            continue
        g = kr(k)
        assert all(g.eps(b, 0) <= k.s for b in g.vertices), k.name()


def test_aut_zero_arrows_move_one_vertical_domino():
    for k in lattice(4, 2, families=("B1", "D1", "A2odd")):
        if k.regime != krc.AUT:
            continue
        g = kr(k)
        for b, i, c in g.edges(0):
            _, pb = krc.component_shape(g, b)
            _, pc = krc.component_shape(g, c)
            hb = sorted(pb.columns + (0,) * k.s, reverse=True)[:k.s]
            hc = sorted(pc.columns + (0,) * k.s, reverse=True)[:k.s]
            diff = sorted(abs(x - y) for x, y in zip(sorted(hb), sorted(hc)))
            assert sum(diff) in (0, 2) and max(diff) in (0, 2), (k.name(), serialize(b))


def test_perfectness_verdicts():
    assert not krc.is_perfect(kr(kr_spec("C1", 2, 1, 1)), 1)
    assert krc.is_perfect(kr(kr_spec("B1", 2, 1, 1)), 1)
    assert krc.is_perfect(kr(kr_spec("A1", 2, 1, 1)), 1)
    rep = krc.is_perfect(kr(kr_spec("C1", 2, 1, 1)), 1)
    assert rep.failed


def test_perfect_at_level_c_r():
    for level in (1, 2):
        for fam in ct.FAMILIES:
            for n in range(ct.MIN_RANK[fam], 4):
                spec = ct.make_spec(fam, n)
                for r in spec.classical_nodes:
                    k = KRSpec(spec, r, level * ct.c_coefficient(spec, r))
                    expected = sum(weyl_dimension(k.xtype, n, hw) for hw in krc.expected_decomposition(k))
                    if expected > 1500:
                        continue
                    assert krc.is_perfect(kr(k), level), k.name()


def test_ground_state_examples():
    g = kr(kr_spec("A1", 2, 1, 1))
    assert serialize(krc.ground_state([g, g, g], 1)) == "3#2#1"
    g21 = kr(kr_spec("A1", 2, 2, 1))
    assert serialize(krc.ground_state([g21, g], 1)) == "2,3#1"
    b2 = kr(kr_spec("B1", 2, 1, 1))
    u = krc.level_zero_element(b2, 1)
    assert b2.eps_vector(u) == (1, 0, 0)


def test_u_table():
    # phi(u) = level Lambda_{tau(0)} and the component of u matches the u-table
    for level in (1, 2):
        for fam in ct.FAMILIES:
            for n in range(ct.MIN_RANK[fam], 4):
                spec = ct.make_spec(fam, n)
                for r in spec.classical_nodes:
                    k = KRSpec(spec, r, level * ct.c_coefficient(spec, r))
                    expected = sum(weyl_dimension(k.xtype, n, hw) for hw in krc.expected_decomposition(k))
                    if expected > 1500:
                        continue
                    c, unode, tau = ct.ground_state_table(spec, r)
                    hw, u, _ = krc.ground_state_component(k, level)
                    want = tuple(level if unode == j else 0 for j in spec.classical_nodes)
                    assert hw == want, k.name()
                    g = kr(k)
                    phi = tuple(level if j == tau[0] else 0 for j in spec.index_set)
                    assert g.phi_vector(u) == phi, k.name()


def test_irr_type_a_twisted_route_matches_promotion():
    # independent route: the unique Sigma with Sigma e_j = e_{j+1} Sigma, then f_0 = Sigma^-1 f_1 Sigma
    for n, r, s in ((2, 1, 1), (2, 1, 2), (3, 2, 1), (3, 1, 2), (2, 2, 2)):
        spec = ct.make_spec("A1", n)
        g = krc.kr_type_A(n, r, s)
        classical = g.restrict(spec.classical_nodes)
        tau = ct.promotion_perm(spec, 1)
        cands = list(krc.twisted_candidates(spec, classical, classical, tau, range(1, n)))
        assert len(cands) == 1
        sigma = cands[0]
        inv = {v: u for u, v in sigma.items()}
        f0 = {}
        for b in classical.vertices:
            c = classical.f(sigma[b], tau[0])
            if c is not None:
                f0[b] = inv[c]
        assert f0 == {b: c for b, i, c in g.edges(0)}


def test_promotion_order():
    g = krc.kr_type_A(2, 1, 2)
    for b in g.vertices:
        x = b
        for _ in range(3):
            x = krc.promotion(x, 2)
        assert x == b


def test_virtual_seed_relabelled_classically():
    for args in (("C1", 2, 1, 1), ("A2even", 2, 1, 1), ("D2", 2, 1, 1), ("B1", 2, 2, 1)):
        g = kr(kr_spec(*args))
        assert g.meta.get("labels") == "classical"


def test_tensor_square_connected_for_perfect():
    g = kr(kr_spec("D1", 4, 1, 1))
    assert krc.is_connected(tensor_product([g, g]))
