import pytest

from gl2bounds.residue import (Mat2, ResidueRing, mat_valuation,
                               scalar_power_stabilize, teichmuller_lift,
                               valuation)


def test_valuation_examples():
    assert valuation(ResidueRing(81).element(27)) == 3
    assert valuation(ResidueRing(81).element(0)) == 4
    assert valuation(ResidueRing(49).element(30)) == 0


def test_valuation_requires_prime_power():
    with pytest.raises(ValueError):
        valuation(ResidueRing(6).element(2))


def test_ring_tagging():
    assert ResidueRing(27).prime == 3 and ResidueRing(27).level == 3
    assert ResidueRing(10).prime is None
    with pytest.raises(ValueError):
        ResidueRing(1)
    with pytest.raises(ValueError):
        ResidueRing.prime_power(4, 2)


def test_teichmuller_examples():
    # brute-force oracle: the unique x with x^7 = x, x = 2 mod 7 in Z/49
    R = ResidueRing(49)
    oracle = [x for x in range(49) if x % 7 == 2 and pow(x, 7, 49) == x]
    assert oracle == [30]
    assert teichmuller_lift(R.element(2)).value == 30
    for ell, k in ((3, 3), (5, 2), (7, 2)):
        R = ResidueRing(ell**k)
        assert teichmuller_lift(R.element(1)).value == 1
        assert teichmuller_lift(R.element(ell - 1)).value == ell**k - 1


def test_teichmuller_rejects_non_units():
    with pytest.raises(ValueError):
        teichmuller_lift(ResidueRing(49).element(7))


def test_teichmuller_multiplicative():
    for ell in (3, 5, 7, 11, 13):
        for k in (1, 2, 3):
            R = ResidueRing(ell**k)
            lifts = {l: teichmuller_lift(R.element(l)).value
                     for l in range(1, ell)}
            for a in range(1, ell):
                for b in range(1, ell):
                    assert lifts[a] * lifts[b] % R.modulus == lifts[a * b % ell]


def test_power_valuation_growth():
    # for a unit h = 1 mod l, v(h^n - 1) > v_l(n) whenever v_l(n) < k
    for ell, k in ((3, 4), (5, 4)):
        R = ResidueRing(ell**k)
        for h in range(1, R.modulus, ell):
            for n in range(1, 51):
                vn = 0
                nn = n
                while nn % ell == 0:
                    nn //= ell
                    vn += 1
                if vn >= k:
                    continue
                hn = pow(h, n, R.modulus)
                assert valuation(R.element(hn - 1)) > vn


def test_matrix_valuation():
    R = ResidueRing(27)
    assert mat_valuation(Mat2(3, 9, 0, 6, R)) == 1
    assert mat_valuation(Mat2(0, 0, 0, 0, R)) == 3
    with pytest.raises(ValueError):
        mat_valuation(Mat2(1, 0, 0, 1, ResidueRing(12)))


def test_stabilize_examples():
    R = ResidueRing(27)
    assert scalar_power_stabilize(Mat2.identity(R)).entries == (1, 0, 0, 1)
    assert scalar_power_stabilize(Mat2(1, 3, 0, 1, R)).entries == (1, 0, 0, 1)
    R49 = ResidueRing(49)
    out = scalar_power_stabilize(Mat2(2, 0, 0, 2, R49))
    assert out.entries == (30, 0, 0, 30)
    # direct powering oracle for the unipotent example
    m = Mat2(1, 3, 0, 1, R)
    assert (m ** (3**3)).entries == (1, 0, 0, 1)


def test_stabilize_idempotent():
    R = ResidueRing(125)
    for lam in (2, 3, 4, 6):
        g = Mat2(lam, 5, 10, lam, R)
        out = scalar_power_stabilize(g)
        assert scalar_power_stabilize(out).entries == out.entries
        assert out.is_scalar()


def test_stabilize_rejects_non_scalar_reduction():
    R = ResidueRing(25)
    with pytest.raises(ValueError):
        scalar_power_stabilize(Mat2(1, 1, 0, 1, R))


def test_mat2_arithmetic():
    R = ResidueRing(7)
    m = Mat2(1, 2, 3, 4, R)
    assert (m * m.inverse()).entries == (1, 0, 0, 1)
    assert m.det().value == (4 - 6) % 7
    assert m.trace().value == 5
