"""Extended affine Weyl groups: composition, length, walks, cosets."""

import random

import pytest

from affhecke.affweyl import (
    CoxeterGraph,
    affine_weyl,
    format_element,
    format_word,
    parameter_classes,
    parse_element,
    parse_word,
)
from affhecke.coeff import StructureError
from affhecke.rootdata import parse_descriptor


def aw(desc):
    return affine_weyl(parse_descriptor(desc))


def rand_element(ctx, rng, letters=5):
    word = [rng.choice(ctx.index_set) for _ in range(letters)]
    return ctx.element_from_word(word)


def test_compose_examples():
    bc1 = aw("BC1")
    s0, s1 = bc1.generators[0], bc1.generators[1]
    assert s0.compose(s1) == bc1.translation((1,))
    a2 = aw("A2")
    t = a2.translation((1, 2))
    u = a2.translation((0, 1))
    assert t.compose(u) == a2.translation((1, 3))  # translations commute
    rng = random.Random(0)
    for _ in range(20):
        a = rand_element(a2, rng)
        assert a.compose(a2.identity) == a
        assert a.inverse().compose(a) == a2.identity


def test_compose_associativity():
    rng = random.Random(1)
    c2 = aw("C2")
    for _ in range(20):
        a, b, c = (rand_element(c2, rng, 4) for _ in range(3))
        assert a.compose(b).compose(c) == a.compose(b.compose(c))


def test_length_examples():
    bc1 = aw("BC1")
    assert bc1.length(bc1.identity) == 0
    assert bc1.length(bc1.translation((1,))) == 2
    for ctx in (bc1, aw("A2"), aw("C2"), aw("G2")):
        for s in ctx.generators:
            assert ctx.length(s) == 1


def test_length_properties():
    rng = random.Random(2)
    c2 = aw("C2")
    for _ in range(30):
        a, b = rand_element(c2, rng), rand_element(c2, rng)
        assert c2.length(a.compose(b)) <= c2.length(a) + c2.length(b)
        assert c2.length(a.inverse()) == c2.length(a)
    for sigma in c2.sigma.values():
        for _ in range(10):
            a = rand_element(c2, rng)
            assert c2.length(c2.apply_sigma(sigma, a)) == c2.length(a)


def test_reduced_words():
    bc1 = aw("BC1")
    assert bc1.word(bc1.identity) == ()
    assert bc1.word(bc1.translation((1,))) == (0, 1)  # lowest index first
    for ctx in (bc1, aw("A2")):
        for i in ctx.index_set:
            assert ctx.word(ctx.generators[i]) == (i,)
    rng = random.Random(3)
    c2 = aw("C2")
    for _ in range(25):
        w = rand_element(c2, rng, 6)
        v, j = c2.split_length_zero(w)
        word = c2.word(v)
        assert len(word) == c2.length(v)
        assert c2.element_from_word(word, j) == w


def test_q_monomial_word_invariance():
    # recompute q_w along randomized reduced words: identical monomials
    c2 = aw("C2")
    rng = random.Random(4)
    elements = [rand_element(c2, rng, 5) for _ in range(20)]
    for w in elements:
        v, _ = c2.split_length_zero(w)
        expected = c2.q_monomial(v)
        for k in range(10):
            word = c2.word_randomized(v, random.Random(k))
            counts = [0] * len(c2.classes)
            for i in word:
                counts[c2.class_index[i]] += 1
            assert c2.ring.q_monomial(counts) == expected
            assert c2.element_from_word(word) == v


def test_length_zero_group():
    for desc in ("BC1", "BC2"):
        ctx = aw(desc)
        assert set(ctx.g_elements) == {0}
    a2 = aw("A2")
    assert a2.g_elements[0] == a2.identity
    assert a2.sigma[0] == (0, 1, 2)
    c2 = aw("C2")
    assert c2.sigma[2][0] == 2 and c2.sigma[2][2] == 0
    for ctx in (a2, c2):
        for i, g in ctx.g_elements.items():
            assert ctx.length(g) == 0
            assert ctx.sigma[i][0] == i
        # simply transitive on good types
        images = {ctx.sigma[i][0] for i in ctx.rs.good_types}
        assert images == set(ctx.rs.good_types)


def test_sigma_star():
    assert aw("BC1").sigma_star == (0, 1)
    assert aw("BC2").sigma_star == (0, 1, 2)
    assert aw("A2").sigma_star == (0, 2, 1)
    assert aw("C2").sigma_star == (0, 1, 2)
    for desc in ("A2", "C2", "A3"):
        ctx = aw(desc)
        st = ctx.sigma_star
        assert st[0] == 0
        assert tuple(st[st[i]] for i in ctx.index_set) == tuple(ctx.index_set)
        # sigma_* sigma_i sigma_*^{-1} = sigma_{i*}
        for i in ctx.rs.good_types:
            istar = st[i]
            conj = tuple(st[ctx.sigma[i][ctx.sigma_inverse(st)[k]]] for k in ctx.index_set)
            assert conj == ctx.sigma[istar]


def test_w_lambda():
    bc1 = aw("BC1")
    wl, tprime, gl, l = bc1.w_lambda((1,))
    assert wl == bc1.generators[0]
    assert bc1.length(wl) == 1
    assert str(bc1.q_monomial(wl)) == "q0"
    assert tprime == bc1.translation((1,)) and gl == bc1.identity
    a2 = aw("A2")
    assert a2.w_lambda((0, 0))[0] == a2.identity
    # strictly dominant: l(w_lam) = l(t_lam) - l(w_0)
    for lam in [(1, 1), (2, 1), (2, 2)]:
        wl, tp, gl, l = a2.w_lambda(lam)
        assert a2.length(wl) == a2.length(a2.translation(lam)) - 3
    with pytest.raises(StructureError):
        a2.w_lambda((-1, 0))


def test_w_lambda_is_double_coset_minimum():
    for desc in ("A2", "C2", "BC2"):
        ctx = aw(desc)
        for lam in [(0, 1), (1, 0), (1, 1), (2, 1)]:
            wl, tprime, gl, l = ctx.w_lambda(lam)
            J0 = tuple(j for j in ctx.index_set if j != 0)
            Jl = tuple(j for j in ctx.index_set if j != l)
            coset, minimum = ctx.double_coset(J0, tprime, Jl)
            assert minimum == wl
            assert wl in coset
            # uniqueness of the minimum
            lmin = ctx.length(minimum)
            assert sum(1 for v in coset if ctx.length(v) == lmin) == 1


def test_double_coset_examples():
    bc1 = aw("BC1")
    t = bc1.translation((1,))
    coset, minimum = bc1.double_coset((1,), t, (1,))
    assert len(coset) == 4 and minimum == bc1.generators[0]
    c2 = aw("C2")
    w = rand_element(c2, random.Random(7), 4)
    coset, minimum = c2.double_coset((), w, ())
    assert coset == (w,) and minimum == w
    with pytest.raises(StructureError):
        c2.double_coset(c2.index_set, w, ())


def test_double_coset_min_unique_random():
    c2 = aw("C2")
    rng = random.Random(8)
    for _ in range(20):
        lam = (rng.randint(0, 2), rng.randint(0, 2))
        wl, tprime, gl, l = c2.w_lambda(lam)
        J0 = tuple(j for j in c2.index_set if j != 0)
        Jl = tuple(j for j in c2.index_set if j != l)
        coset, minimum = c2.double_coset(J0, tprime, Jl)
        lmin = c2.length(minimum)
        assert sum(1 for v in coset if c2.length(v) == lmin) == 1


def test_poincare_polynomials():
    a2 = aw("A2")
    assert a2.poincare_polynomial([a2.identity]) == a2.ring.one
    w0q = a2.poincare_polynomial(a2.finite_weyl())
    assert w0q == a2.ring.parse("1 + 2*q0 + 2*q0^2 + q0^3")
    bc1 = aw("BC1")
    assert bc1.poincare_polynomial(bc1.finite_weyl()) == bc1.ring.parse("1 + q1")


def test_parameter_classes():
    assert aw("A2").classes == ((0, 1, 2),)
    assert aw("C2").classes == ((0, 2), (1,))
    assert aw("BC2").classes == ((0,), (1,), (2,))
    # 4-3 chain: odd bond forces q1 = q2, the even bond leaves q0 free
    graph = CoxeterGraph(((1, 4, 2), (4, 1, 3), (2, 3, 1)))
    assert parameter_classes(graph, "W") == ((0,), (1, 2))
    with pytest.raises(StructureError):
        parameter_classes(graph, "Wtilde")  # no type-rotating data
    assert parameter_classes(aw("C2").coxeter_graph, "W") == ((0,), (1,), (2,))


def test_star_coset_relation():
    # w_{lam*} = sigma_l^{-1}(w_lam^{-1}) for dominant coords <= 2
    for desc in ("A2", "C2", "BC2"):
        ctx = aw(desc)
        for a in range(3):
            for b in range(3):
                lam = (a, b)
                wl, _, _, l = ctx.w_lambda(lam)
                wstar = ctx.w_lambda(ctx.rs.star(lam))[0]
                expect = ctx.apply_sigma(
                    ctx.sigma_inverse(ctx.sigma[l]), wl.inverse()
                )
                assert wstar == expect


def test_unique_additive_factorization():
    # every w in W_0 w_lam W_l factors uniquely u . w_lam . w' with
    # additive lengths, u among the minimal coset representatives
    for desc in ("A2", "C2"):
        ctx = aw(desc)
        for lam in [(1, 0), (1, 1)]:
            wl, tprime, gl, l = ctx.w_lambda(lam)
            J0 = tuple(j for j in ctx.index_set if j != 0)
            Jl = tuple(j for j in ctx.index_set if j != l)
            coset, _ = ctx.double_coset(J0, wl, Jl)
            reps = ctx.coset_min_reps(lam)
            wlset = ctx.parabolic(Jl)
            for w in coset:
                facts = [
                    (u, v)
                    for u in reps
                    for v in wlset
                    if u.compose(wl).compose(v) == w
                    and ctx.length(u) + ctx.length(wl) + ctx.length(v)
                    == ctx.length(w)
                ]
                assert len(facts) == 1


def test_conjugated_parabolics():
    # g_i W_0 g_i^{-1} = W_i for every good type
    for desc in ("A2", "C2"):
        ctx = aw(desc)
        J0 = tuple(j for j in ctx.index_set if j != 0)
        w0set = set(ctx.parabolic(J0))
        for i in ctx.rs.good_types:
            g, ginv = ctx.g_elements[i], ctx.g_inverses[i]
            conj = {g.compose(w).compose(ginv) for w in w0set}
            assert conj == set(ctx.complement_parabolic(i))


def test_element_descriptor_roundtrip():
    c2 = aw("C2")
    rng = random.Random(9)
    for _ in range(20):
        w = rand_element(c2, rng, 4)
        assert parse_element(c2, format_element(w)) == w
    assert parse_element(c2, "t[1,0]*s1") == c2.translation((1, 0)).compose(
        c2.generators[1]
    )
    assert parse_element(c2, "e") == c2.identity
    assert parse_word("0,1,2,1") == (0, 1, 2, 1)
    assert format_word((0, 1)) == "0,1"
