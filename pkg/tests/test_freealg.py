import math
import random
from fractions import Fraction

import pytest

from liequant.freealg import (AssocPoly, LiePoly, lie_bracket, expand, dynkin,
                              is_lie, substitute, cbh, assoc_to_lie,
                              expand_leftnormed, lyndon_words, expand_lyndon,
                              lie_to_json, lie_from_json, NotLieElement)


def rand_lie(rng, n, terms=3):
    """Random multilinear Lie polynomial of degree n."""
    out = LiePoly()
    for _ in range(terms):
        perm = list(range(1, n))
        rng.shuffle(perm)
        mono = (0,) + tuple(perm)
        out = out + Fraction(rng.randint(-4, 4)) * LiePoly({mono: Fraction(1)})
    return out


def test_assoc_mul_unit_and_associativity():
    x1, x2, x3 = (AssocPoly.gen(i) for i in range(3))
    assert x1 * x2 == AssocPoly.word((0, 1))
    assert AssocPoly.unit() * x1 == x1
    assert (x1 * x2) * x3 == x1 * (x2 * x3)


def test_bracket_antisymmetry_and_jacobi_random():
    rng = random.Random(1)
    for n in (2, 3):
        a, b, c = (rand_lie(rng, n) for _ in range(3))
        assert lie_bracket(a, b) == -1 * lie_bracket(b, a)
        jac = lie_bracket(a, lie_bracket(b, c)) \
            + lie_bracket(b, lie_bracket(c, a)) \
            + lie_bracket(c, lie_bracket(a, b))
        assert not jac


def test_expand_examples():
    x1, x2, x3 = (LiePoly.gen(i) for i in range(3))
    assert expand(lie_bracket(x1, x2)) == AssocPoly.word((0, 1)) - AssocPoly.word((1, 0))
    assert expand(x1) == AssocPoly.gen(0)
    p = lie_bracket(x1, lie_bracket(x2, x3))
    expected = (AssocPoly.word((0, 1, 2)) - AssocPoly.word((0, 2, 1))
                - AssocPoly.word((1, 2, 0)) + AssocPoly.word((2, 1, 0)))
    assert expand(p) == expected


def test_dynkin_examples():
    assert dynkin(AssocPoly.word((0, 1))) == LiePoly.leftnormed((0, 1))
    p = AssocPoly.word((0, 1)) - AssocPoly.word((1, 0))
    assert dynkin(p) == Fraction(2) * LiePoly.leftnormed((0, 1))
    q = lie_bracket(LiePoly.gen(0), lie_bracket(LiePoly.gen(1), LiePoly.gen(2)))
    assert dynkin(expand(q)) == Fraction(3) * q


def test_is_lie():
    assert not is_lie(AssocPoly.word((0, 1)))
    assert is_lie(AssocPoly.word((0, 1)) - AssocPoly.word((1, 0)))
    rng = random.Random(2)
    for n in (2, 3, 4):
        assert is_lie(expand(rand_lie(rng, n)))


def test_reut_prop_random_to_degree_6():
    rng = random.Random(3)
    for n in range(2, 7):
        p = rand_lie(rng, n)
        assert dynkin(expand(p)) == Fraction(n) * p


def test_prereut_every_position():
    # every last-letter slice of a Lie element rebrackets right-normed to
    # the whole element
    rng = random.Random(4)
    for n in (3, 4, 5):
        p = rand_lie(rng, n)
        exp = expand(p)
        for k in range(n):
            out = AssocPoly()
            for w, c in exp.terms.items():
                if w[-1] != k:
                    continue
                acc = AssocPoly.gen(w[-1])
                for a in reversed(w[:-1]):
                    acc = AssocPoly.gen(a) * acc - acc * AssocPoly.gen(a)
                out = out + c * acc
            assert out == exp


def test_chrono_lemma():
    # [X, x] = sum X_sigma [x_sigma(1),[...,[x_sigma(n), x]]]
    rng = random.Random(5)
    for n in (2, 3, 4):
        p = rand_lie(rng, n)
        fresh = LiePoly.gen(n)
        lhs = expand(lie_bracket(p, fresh))
        out = AssocPoly()
        for w, c in expand(p).terms.items():
            acc = AssocPoly.gen(n)
            for a in reversed(w):
                acc = AssocPoly.gen(a) * acc - acc * AssocPoly.gen(a)
            out = out + c * acc
        assert out == lhs


def test_substitute_examples(borel):
    alg = borel.algebra
    h, e = alg.basis(0), alg.basis(1)
    br = substitute(LiePoly.leftnormed((0, 1)), [h, e], alg.carrier())
    assert br == {1: Fraction(1)}
    assert substitute(LiePoly.gen(0), [h], alg.carrier()) == h
    p = lie_bracket(LiePoly.gen(0), lie_bracket(LiePoly.gen(1), LiePoly.gen(2)))
    assert substitute(p, [h, e, e], alg.carrier()) == {}


def test_cbh_values_and_round_trip():
    t = cbh(5)
    assert t[(1, 0)] == LiePoly.gen(0) and t[(0, 1)] == LiePoly.gen(1)
    assert t[(1, 1)] == Fraction(1, 2) * LiePoly.leftnormed((0, 1))
    e01 = expand_leftnormed((0, 1))
    x_xy = AssocPoly.gen(0) * e01 - e01 * AssocPoly.gen(0)   # [x,[x,y]]
    assert t[(2, 1)] == assoc_to_lie(Fraction(1, 12) * x_xy, check=False)
    # exp(B) == exp(x) exp(y) exactly to total degree 5
    N = 5

    def texp(p):
        out = AssocPoly.unit()
        power = AssocPoly.unit()
        for k in range(1, N + 1):
            power = AssocPoly({w: c for w, c in (power * p).terms.items()
                               if len(w) <= N})
            out = out + Fraction(1, math.factorial(k)) * power
        return out

    total = LiePoly()
    for v in t.values():
        total = total + v
    lhs = texp(total.expand())
    rhs_full = texp(LiePoly.gen(0).expand()) * texp(LiePoly.gen(1).expand())
    rhs = AssocPoly({w: c for w, c in rhs_full.terms.items() if len(w) <= N})
    assert lhs == rhs


def test_lyndon_basis_round_trip():
    words = lyndon_words(((0, 2), (1, 1)))
    assert words == [(0, 0, 1), (0, 1, 0)] or all(len(w) == 3 for w in words)
    for w in words:
        p = assoc_to_lie(expand_lyndon(w))
        assert p == LiePoly({w: Fraction(1)})


def test_not_lie_rejected():
    with pytest.raises(NotLieElement):
        assoc_to_lie(AssocPoly.word((0, 1)))


def test_lie_json_round_trip():
    rng = random.Random(6)
    p = rand_lie(rng, 4) + Fraction(1, 3) * LiePoly({(0, 0, 1): Fraction(1)})
    assert lie_from_json(lie_to_json(p)) == p
