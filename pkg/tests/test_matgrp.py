import random

import pytest

from gl2bounds.matgrp import (CapExceeded, FiniteMatrixGroup, borel_group,
                              cartan_normalizer, cartan_subgroup,
                              close_generators, conjugacy_classes_of_subgroups,
                              dickson_classify, enumerate_subgroups,
                              exceptional_s4_group_mod13, format_group_text,
                              galois_candidate_filter, gl2_generators,
                              gl2_group, gl2_order, irreducibility_report,
                              mat_inv, mat_mul, normalizer_cube_part,
                              parse_group_text, projective_exponent,
                              sl2_group, stable_lines, upper_unitriangular_group)

from gl2bounds.scalars import appendix_counterexample_group


def test_closure_examples():
    assert FiniteMatrixGroup(3, [(0, 1, 1, 0)]).order == 2
    assert FiniteMatrixGroup(2, [(1, 1, 0, 1), (0, 1, 1, 0)]).order == 6


def test_closure_rejects_singular():
    with pytest.raises(ValueError):
        close_generators([(1, 0, 0, 3)], 9)


def test_closure_cap():
    with pytest.raises(CapExceeded):
        close_generators(gl2_generators(5), 5, cap=100)


def test_closure_canonical_order():
    elems = close_generators([(0, 1, 1, 0), (1, 1, 0, 1)], 3)
    assert list(elems) == sorted(elems)


def test_appendix_group_closure():
    H = appendix_counterexample_group()
    assert H.order == 243
    assert H.scalar_subgroup() == (1,)
    assert sorted(H.determinant_image()) == [x for x in range(1, 27) if x % 3 == 1]


def test_scalar_subgroup_examples():
    assert set(gl2_group(5).scalar_subgroup()) == {1, 2, 3, 4}
    assert upper_unitriangular_group(9).scalar_subgroup() == (1,)


def test_determinant_image_examples():
    assert sl2_group(7).determinant_image() == (1,)
    G9 = FiniteMatrixGroup(9, gl2_generators(9))
    assert set(G9.determinant_image()) == {x for x in range(1, 9) if x % 3}
    assert set(borel_group(5).determinant_image()) == {1, 2, 3, 4}


def test_reduction_compatibility():
    rng = random.Random(11)
    for _ in range(10):
        mod = rng.choice((9, 25, 8))
        gens = []
        while len(gens) < 2:
            g = tuple(rng.randrange(mod) for _ in range(4))
            from math import gcd

            if gcd((g[0] * g[3] - g[1] * g[2]) % mod, mod) == 1:
                gens.append(g)
        G = FiniteMatrixGroup(mod, gens)
        for div in (3, 5, 2):
            if mod % div == 0:
                red = {tuple(x % div for x in m) for m in G.elements}
                assert red == set(G.reduce(div).elements)


def test_preimage_counts_and_membership():
    N = cartan_normalizer(5, 2)
    P = N.preimage(25)
    assert P.order == N.order * 5**4
    assert all(tuple(x % 5 for x in m) in N.element_set for m in P.elements)
    # generators really generate the preimage
    regen = close_generators(P.gens, 25)
    assert len(regen) == P.order


def test_cartan_orders_exhaustive():
    for ell in (3, 5, 7, 11, 13):
        squares = {x * x % ell for x in range(1, ell)}
        for delta in range(1, ell):
            C = cartan_subgroup(ell, delta)
            want = (ell - 1) ** 2 if delta in squares else ell * ell - 1
            assert C.order == want
            assert cartan_normalizer(ell, delta).order == 2 * want


def test_cartan_examples():
    assert cartan_subgroup(7, 1).order == 36
    assert cartan_subgroup(7, 3).order == 48
    N = cartan_normalizer(7, 3)
    assert N.order == 96
    C = cartan_subgroup(7, 3)
    w = (1, 0, 0, 6)
    assert all(mat_mul(w, m, 7) in N.element_set for m in C.elements)


def test_cartan_rejects_bad_arguments():
    with pytest.raises(ValueError):
        cartan_subgroup(2, 1)
    with pytest.raises(ValueError):
        cartan_subgroup(9, 1)
    with pytest.raises(ValueError):
        cartan_subgroup(7, 7)


def test_cartan_conjugation_scaling():
    # conjugating by diag(lambda, 1) turns parameter delta into delta*lambda^2
    for ell in (3, 5, 7, 11):
        for delta in range(1, ell):
            for lam in range(1, ell):
                C = cartan_subgroup(ell, delta)
                g = (lam, 0, 0, 1)
                gi = mat_inv(g, ell)
                conj = {mat_mul(mat_mul(g, m, ell), gi, ell) for m in C.elements}
                want = cartan_subgroup(ell, delta * lam * lam % ell)
                assert conj == set(want.elements)


def test_starred_models():
    # starred split with delta=1 is the diagonal torus
    Cs = cartan_subgroup(5, 1, starred=True)
    assert all(m[1] == 0 and m[2] == 0 for m in Cs.elements)
    # starred = conjugate of the standard model by [[1,1],[1,-1]]
    for ell, delta in ((5, 2), (7, 3), (7, 2)):
        C = cartan_subgroup(ell, delta)
        g = (1, 1, 1, ell - 1)
        gi = mat_inv(g, ell)
        conj = {mat_mul(mat_mul(g, m, ell), gi, ell) for m in C.elements}
        assert conj == set(cartan_subgroup(ell, delta, starred=True).elements)
    # the starred normalizer contains tau
    assert (0, 1, 1, 0) in cartan_normalizer(5, 2, starred=True).element_set


def test_normalizer_cube_part():
    K = normalizer_cube_part(5, 2)
    assert K.order == cartan_normalizer(5, 2).order // 3
    N = cartan_normalizer(5, 2)
    assert set(K.elements) <= set(N.elements)
    with pytest.raises(ValueError):
        normalizer_cube_part(7, 3)  # 7 = 1 mod 3
    with pytest.raises(ValueError):
        normalizer_cube_part(5, 1)  # split parameter


def test_dickson_examples():
    assert dickson_classify(gl2_group(5)).tag == "contains-SL2"
    assert dickson_classify(borel_group(7)).tag == "Borel"
    assert dickson_classify(cartan_normalizer(5, 2)).tag == "Cartan-normalizer-nonsplit"
    assert dickson_classify(cartan_normalizer(5, 1)).tag == "Cartan-normalizer-split"
    s4 = exceptional_s4_group_mod13()
    assert dickson_classify(s4).tag == "exceptional-S4"
    with pytest.raises(ValueError):
        dickson_classify(FiniteMatrixGroup(9, [(1, 1, 0, 1)]))


def _brute_force_tag(H):
    """Independent Dickson check from the definitions, on all elements."""
    ell = H.modulus
    sl2 = set(sl2_group(ell).elements)
    if sl2 <= set(H.elements):
        return "contains-SL2"
    lines = [(1, m) for m in range(ell)] + [(0, 1)]

    def stable(g, L):
        x, y = L
        nx, ny = (g[0] * x + g[1] * y) % ell, (g[2] * x + g[3] * y) % ell
        return (nx * y - ny * x) % ell == 0

    if any(all(stable(g, L) for g in H.elements) for L in lines):
        return "Borel"
    return None  # pair/exceptional cases checked via the classifier itself


def test_dickson_consistency_small_primes():
    for ell in (2, 3, 5):
        subs = enumerate_subgroups(gl2_group(ell))
        for H in subs:
            tag = dickson_classify(H).tag
            brute = _brute_force_tag(H)
            if brute is not None:
                assert tag == brute, (ell, H.gens, tag, brute)
            else:
                assert tag != "subline", (ell, H.gens)
                assert tag.startswith("Cartan") or tag.startswith("exceptional")


def test_dickson_on_constructed_families_mod7():
    assert dickson_classify(cartan_normalizer(7, 3)).tag == "Cartan-normalizer-nonsplit"
    assert dickson_classify(cartan_normalizer(7, 2)).tag == "Cartan-normalizer-split"
    assert dickson_classify(cartan_subgroup(7, 3)).tag == "Cartan-normalizer-nonsplit"
    assert dickson_classify(sl2_group(7)).tag == "contains-SL2"
    assert dickson_classify(upper_unitriangular_group(7)).tag == "Borel"


def test_irreducibility_examples():
    assert irreducibility_report(borel_group(7)) == "reducible"
    assert irreducibility_report(cartan_subgroup(5, 2)) == "irreducible"
    assert irreducibility_report(cartan_normalizer(5, 2)) == "absolutely-irreducible"
    assert irreducibility_report(FiniteMatrixGroup(5, [(2, 0, 0, 2)])) == "reducible"


def test_enumerate_subgroups_s3():
    subs = enumerate_subgroups(FiniteMatrixGroup(2, [(1, 1, 0, 1), (0, 1, 1, 0)]))
    assert len(subs) == 6
    assert sorted(H.order for H in subs) == [1, 2, 2, 2, 3, 6]


def test_enumerate_subgroups_complete_by_joins():
    """Independent completeness oracle: every subgroup is a join of cyclic
    subgroups, so closing the cyclic subgroups under joins finds them all."""
    from gl2bounds.matgrp import _IndexedGroup, _subgroups_by_joins

    G = gl2_group(3)
    ix = _IndexedGroup(G)
    joins = _subgroups_by_joins(ix, frozenset(range(ix.n)))
    subs = enumerate_subgroups(G)
    assert len(subs) == len(joins) == 55


def test_enumerate_subgroups_order_divides():
    G = gl2_group(3)
    for H in enumerate_subgroups(G):
        assert G.order % H.order == 0


def test_enumerate_finds_sl2_f5():
    subs = enumerate_subgroups(gl2_group(5))
    assert any(H.order == 120 and H.determinant_image() == (1,) for H in subs)


def test_enumeration_cap():
    with pytest.raises(CapExceeded):
        enumerate_subgroups(gl2_group(5), order_cap=100)


def test_three_conjugacy_classes_mod3():
    G = gl2_group(3)
    subs = enumerate_subgroups(G)
    want = [H for H in subs if (1, 0, 0, 2) in H.element_set
            and len(H.determinant_image()) == 2 and not stable_lines(H)]
    classes = conjugacy_classes_of_subgroups(want, G)
    assert len(classes) == 3
    assert sorted(c[0].order for c in classes) == [8, 16, 48]


def test_s4_group_mod13():
    G = exceptional_s4_group_mod13()
    assert G.order == 288
    assert galois_candidate_filter(G)
    assert projective_exponent(G) >= 3
    # scalar subgroup alone fails: determinant image is only the squares
    S = FiniteMatrixGroup(13, [(2, 0, 0, 2)])
    assert not galois_candidate_filter(S)


def test_group_text_roundtrip():
    G = cartan_normalizer(5, 2)
    text = format_group_text(G)
    H = parse_group_text(text)
    assert H.modulus == 5 and set(H.elements) == set(G.elements)
    with pytest.raises(ValueError):
        parse_group_text("gens=1,0,0,1")


def test_gl2_order_formula():
    assert gl2_group(4).order == gl2_order(4)
    assert gl2_group(6).order == gl2_order(6)
    assert FiniteMatrixGroup(27, gl2_generators(27)).order == gl2_order(27)


def test_determinant_kernel_property():
    """Groups mod l^(n+1) with full determinant and mod-l order prime to l:
    the determinants of elements congruent to Id mod l^n fill out the units
    congruent to 1 mod l^n."""
    rng = random.Random(23)
    cases = 0
    while cases < 6:
        ell = rng.choice((3, 5))
        n = rng.choice((1, 2))
        mod = ell ** (n + 1)
        base = cartan_normalizer(ell, rng.randrange(1, ell))
        G = base.preimage(mod)
        units = [x for x in range(1, mod) if x % ell]
        if sorted(G.determinant_image()) != units:
            continue
        if G.reduce(ell).order % ell == 0:
            continue
        kernel_dets = sorted({(m[0] * m[3] - m[1] * m[2]) % mod
                              for m in G.elements
                              if m[1] % ell**n == 0 and m[2] % ell**n == 0
                              and (m[0] - 1) % ell**n == 0
                              and (m[3] - 1) % ell**n == 0})
        want = sorted(x for x in units if (x - 1) % ell**n == 0)
        assert kernel_dets == want, (ell, n)
        cases += 1


def test_teichmuller_scalar_membership_in_preimages():
    """Full preimages of mod-l groups containing lambda*Id mod l contain the
    Teichmuller lift of lambda at the working level."""
    from gl2bounds.residue import ResidueRing, teichmuller_lift

    for ell, level in ((3, 27), (5, 25), (7, 49)):
        base = cartan_normalizer(ell, 1 if ell == 3 else 2)
        G = base.preimage(level)
        R = ResidueRing(level)
        for lam in range(1, ell):
            if (lam, 0, 0, lam) in base.element_set:
                w = teichmuller_lift(R.element(lam)).value
                assert (w, 0, 0, w) in G.element_set
