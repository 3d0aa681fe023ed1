"""Root systems: construction, lattices, Weyl groups, star involution."""

import random
from fractions import Fraction

import pytest

from affhecke.coeff import StructureError
from affhecke.rootdata import (
    build_root_system,
    dot,
    marks_and_good_types,
    parse_descriptor,
    vadd,
    vscale,
)

SYSTEMS = ["A2", "C2", "BC1", "BC2", "G2", "A3", "B3"]


def F(*xs):
    return tuple(Fraction(x) for x in xs)


def test_c2_positive_roots():
    rs = build_root_system("C", 2)
    a1, a2 = rs.simple_roots
    expected = {a1, a2, vadd(a1, a2), vadd(vscale(2, a1), a2)}
    assert set(rs.positive_roots) == expected
    assert rs.coweights[0] == F(1, 0)
    assert rs.coweights[1] == F(Fraction(1, 2), Fraction(1, 2))


def test_bc2_positive_roots():
    rs = build_root_system("BC", 2)
    a1, a2 = rs.simple_roots
    expected = {
        a1,
        a2,
        vadd(a1, a2),
        vadd(a1, vscale(2, a2)),
        vscale(2, a2),
        vadd(vscale(2, a1), vscale(2, a2)),
    }
    assert set(rs.positive_roots) == expected
    assert len(rs.positive_roots) == 6


def test_bc1_lattices():
    rs = build_root_system("BC", 1)
    assert set(rs.all_roots) == {F(1), F(-1), F(2), F(-2)}
    # Q = P: every integer coordinate tuple is in the coroot lattice
    assert all(rs.in_coroot_lattice((k,)) for k in range(-3, 4))


def test_unsupported_pairs():
    for label, rank in [("B", 2), ("D", 3), ("E", 5), ("X", 1)]:
        with pytest.raises(StructureError) as exc:
            build_root_system(label, rank)
        assert "supported" in str(exc.value)


def test_marks_and_good_types():
    assert marks_and_good_types(build_root_system("C", 2))[1] == {0, 2}
    assert marks_and_good_types(build_root_system("BC", 2))[1] == {0}
    assert marks_and_good_types(build_root_system("A", 2))[1] == {0, 1, 2}


def test_highest_root_expansion():
    for desc in SYSTEMS:
        rs = parse_descriptor(desc)
        total = (Fraction(0),) * rs.dim
        for m, a in zip(rs.marks, rs.simple_roots):
            total = vadd(total, vscale(m, a))
        assert total == rs.highest_root


def test_base_property():
    # every root has all-nonneg or all-nonpos integer simple coefficients
    for desc in SYSTEMS:
        rs = parse_descriptor(desc)
        for r in rs.all_roots:
            coeffs = rs._simple_coeffs[r]
            assert all(c.denominator == 1 for c in coeffs)
            assert all(c >= 0 for c in coeffs) or all(c <= 0 for c in coeffs)


def test_coweight_pairings():
    for desc in SYSTEMS:
        rs = parse_descriptor(desc)
        for i, lam in enumerate(rs.coweights):
            for j, a in enumerate(rs.simple_roots):
                assert dot(lam, a) == (1 if i == j else 0)


def test_weyl_orders():
    for desc, order in [("A2", 6), ("C2", 8), ("G2", 12), ("A3", 24),
                        ("B3", 48), ("C3", 48), ("BC3", 48), ("F4", 1152)]:
        rs = parse_descriptor(desc)
        assert rs.weyl_order == order
        if order <= 200:
            assert len(rs.weyl_elements()) == order


def test_orbit_regenerates_roots():
    # reduced types: the W0-orbit of highest root + simple roots covers R
    for desc in ["A2", "C2", "G2", "A3"]:
        rs = parse_descriptor(desc)
        seeds = [rs.highest_root] + list(rs.simple_roots)
        seen = set()
        frontier = list(seeds)
        while frontier:
            nxt = []
            for r in frontier:
                if r in seen:
                    continue
                seen.add(r)
                for s in rs.simple_reflections:
                    nxt.append(s.apply(r))
            frontier = nxt
        assert seen == set(rs.all_roots)


def test_eager_enumeration_refused_for_e_series():
    rs = parse_descriptor("E6")
    assert len(rs.all_roots) == 72
    with pytest.raises(StructureError) as exc:
        rs.weyl_elements()
    assert "1152" in str(exc.value)


def test_dominant_rep_examples():
    a2 = parse_descriptor("A2")
    lam, w = a2.dominant_rep((2, 1))
    assert lam == (2, 1) and w.is_identity()
    lam, w = a2.dominant_rep((-1, 0))
    assert lam == (0, 1)
    assert w.apply_coords((-1, 0)) == (0, 1)
    bc1 = parse_descriptor("BC1")
    lam, w = bc1.dominant_rep((-1,))
    assert lam == (1,)
    assert w == bc1.simple_reflections[0]


def test_dominant_rep_minimality():
    c2 = parse_descriptor("C2")
    rng = random.Random(5)
    for _ in range(20):
        mu = (rng.randint(-3, 3), rng.randint(-3, 3))
        lam, w = c2.dominant_rep(mu)
        best = min(
            c2.weyl_length(v)
            for v in c2.weyl_elements()
            if v.apply_coords(mu) == lam
        )
        assert c2.weyl_length(w) == best


def test_star_examples():
    a2 = parse_descriptor("A2")
    assert a2.star((1, 0)) == (0, 1)
    assert a2.star((0, 0)) == (0, 0)
    bc2 = parse_descriptor("BC2")
    for lam in [(0, 0), (1, 0), (2, 1), (0, 3)]:
        assert bc2.star(lam) == lam  # w0 = -id in type BC
    with pytest.raises(StructureError):
        a2.star((-1, 0))


def test_star_is_involution():
    rng = random.Random(6)
    for desc in SYSTEMS:
        rs = parse_descriptor(desc)
        for _ in range(50):
            lam = tuple(rng.randint(0, 4) for _ in range(rs.rank))
            assert rs.star(rs.star(lam)) == lam


def test_dominance_examples():
    a2 = parse_descriptor("A2")
    assert a2.dominance_leq((1, 1), (1, 1))
    assert a2.dominance_leq((0, 0), (1, 1))  # lam1+lam2 = a1 + a2 coroots
    assert not a2.dominance_leq((0, 0), (1, 0))
    bc1 = parse_descriptor("BC1")
    assert bc1.dominance_leq((1,), (2,))  # (2 alpha_1)^vee = e_1 is a coroot


def test_stabilizers():
    a2 = parse_descriptor("A2")
    els, gens = a2.stabilizer_subgroup((0, 0))
    assert len(els) == 6
    els, gens = a2.stabilizer_subgroup((1, 1))
    assert len(els) == 1
    els, gens = a2.stabilizer_subgroup((1, 0))
    assert len(els) == 2 and gens == (2,)
    # brute-force comparison against the full point stabilizer
    for lam in [(0, 0), (1, 0), (0, 1), (1, 1), (2, 0)]:
        els, _ = a2.stabilizer_subgroup(lam)
        brute = [w for w in a2.weyl_elements() if w.apply_coords(lam) == lam]
        assert set(els) == set(brute)
        assert a2.weyl_order % len(els) == 0


def test_tau_class_stability():
    # each of R3, R1-R3, R2-R3 is W0-stable
    for desc in ["BC1", "BC2", "C2"]:
        rs = parse_descriptor(desc)
        for r in rs.all_roots:
            sub = rs.root_subset(r)
            for w in rs.weyl_elements():
                assert rs.root_subset(w.apply(r)) == sub


def test_json_dump():
    data = parse_descriptor("BC2").to_json_dict()
    assert data["system"] == "BC2"
    assert len(data["positive_roots"]) == 6
    assert data["good_types"] == [0]
