import itertools
import json
from fractions import Fraction

from liequant.bfamily import BFamily, solve_bfamily
from liequant.freealg import LiePoly, lie_bracket
from liequant.liealg import tensor_add, tensor_smul
from liequant.rmatrix import (lambda_table, Ln, rmatrix_terms,
                              quasitri_residual, rmatrix_by_solving,
                              pair_elem, _all_same_canonical, kappa_ab,
                              uelem_to_json, uelem_from_json, pretty_rmatrix)
from liequant.unitensor import (UElem, a_atom, b_atom, u_mul, canonical,
                                instantiate_tensor, collapse_single_letters)


def _term(legA, legB, c):
    key = (tuple(tuple(l) for l in legA), tuple(tuple(l) for l in legB))
    return UElem(2, {key: Fraction(c)})


def test_lambda_one_and_degree_two(B4):
    tab = lambda_table(B4, 3)
    assert tab.entries[(1,)] == pair_elem(0)
    lam11 = tab.entries[(1, 1)]
    expected = _term([[a_atom(0)], [a_atom(1)]], [[b_atom(0), b_atom(1)]],
                     Fraction(1, 2))
    assert canonical(lam11, {0: 0, 1: 1}) == canonical(expected, {0: 0, 1: 1})


def test_lambda_zero_family_vanishes():
    fam = BFamily(Fraction(0), 3, {(1, 1): LiePoly()})
    tab = lambda_table(fam, 3)
    assert set(tab.entries) == {(1,)}
    # R_n reduces to the grouplike-free shuffle part
    r2 = tab.rmatrix(2)
    assert all(len(k[0]) == len(k[1]) == 2 for k in r2.terms)


def test_Ln_values(B4):
    assert Ln(B4, 1) == LiePoly.gen(0)
    assert Ln(B4, 2) == Fraction(1, 2) * LiePoly.leftnormed((0, 1))
    x, y, z = (LiePoly.gen(i) for i in range(3))
    expected = Fraction(1, 6) * (lie_bracket(x, lie_bracket(y, z))
                                 + lie_bracket(lie_bracket(x, y), z))
    assert Ln(B4, 3) == expected


def test_printed_r2_and_r3(B4):
    tab = lambda_table(B4, 3)
    sh = ("sh", B4)
    one = lambda i: _term([[a_atom(i)]], [[b_atom(i)]], 1)
    # R2 = 1/2 (a_i a_j) x ([b_i,b_j]) + (a_i)(a_j) x (b_j b_i)
    printed2 = _term([[a_atom(0)], [a_atom(1)]], [[b_atom(0), b_atom(1)]],
                     Fraction(1, 2)) \
        + u_mul(one(0), one(1), (sh, "conc")).reverse_leg(1)
    assert _all_same_canonical(printed2) == _all_same_canonical(tab.rmatrix(2))
    # R3: (a_i)(a_j)(a_k) x (b_k b_j b_i) + 1/2 (a_i a_j)(a_k) x (b_k [b_i,b_j])
    #     + 1/2 (a_i)(a_j a_k) x ([b_j,b_k] b_i) + (a_i a_j a_k) x (L3(b))
    T1 = u_mul(u_mul(one(0), one(1), (sh, "conc")), one(2), (sh, "conc")) \
        .reverse_leg(1)
    T2 = u_mul(_term([[a_atom(0)], [a_atom(1)]], [[b_atom(0), b_atom(1)]],
                     Fraction(1, 2)), one(2), (sh, "conc")).reverse_leg(1)
    T3 = u_mul(one(0), _term([[a_atom(1)], [a_atom(2)]],
                             [[b_atom(1), b_atom(2)]], Fraction(1, 2)),
               (sh, "conc")).reverse_leg(1)
    T4 = UElem.zero(2)
    for mono, c in Ln(B4, 3).terms.items():
        T4 = T4 + _term([[a_atom(0)], [a_atom(1)], [a_atom(2)]],
                        [tuple(b_atom(i) for i in mono)], c)
    printed3 = T1 + T2 + T3 + T4
    assert _all_same_canonical(printed3) == _all_same_canonical(tab.rmatrix(3))


def test_quasitri_identities_symbolic(B4):
    rl = rmatrix_terms(B4, 3)
    for n in range(0, 4):
        res = quasitri_residual(B4, rl, n)
        assert not res["delta1"] and not res["delta2"] and not res["antipode"]


def test_quasitri_corrupted_negative_control(B4):
    rl = rmatrix_terms(B4, 2)
    # drop the bracket term of R2
    bad = UElem(2, {k: c for k, c in rl[2].terms.items()
                    if all(len(letter) == 1 for leg in k for letter in leg)})
    res = quasitri_residual(B4, [rl[0], rl[1], bad], 2)
    assert res["delta1"] or res["delta2"]


def test_quasitri_on_double(B4, dbl):
    """(Delta x id)(R_n) = sum R_k^13 R_{n-k}^23 instantiated exactly."""
    from liequant.shuffle import ShContext, ShTensor
    ctx = ShContext(dbl.algebra, B4, 0)
    tab = lambda_table(B4, 3)
    rl = [ShTensor(ctx, 2, instantiate_tensor(tab.rmatrix(n), dbl.algebra, dbl.r))
          for n in range(4)]
    for n in (2, 3):
        lhs = rl[n].comul_leg(0)
        rhs = ShTensor(ctx, 3, {})
        for k in range(n + 1):
            rhs = rhs + rl[k].place((1, 3), 3).mul(rl[n - k].place((2, 3), 3))
        assert lhs == rhs


def test_oracle_matches_terms(B4):
    tab = lambda_table(B4, 3)
    sols = rmatrix_by_solving(B4, 3)
    for n in (2, 3):
        assert _all_same_canonical(sols[n]) == _all_same_canonical(tab.rmatrix(n))


def test_dual_symmetry(B4):
    """R'_n(r^{21})^{21} = R'_n(r): universally, swapping the two sides of
    every pair and the two legs is a symmetry of the primed terms."""
    tab = lambda_table(B4, 3)
    for n in (1, 2, 3):
        rp = tab.rprime(n)
        swapped = UElem(2, {})
        for (la, lb), c in rp.terms.items():
            key = (tuple(tuple((p, 1 - s) for (p, s) in letter) for letter in lb),
                   tuple(tuple((p, 1 - s) for (p, s) in letter) for letter in la))
            swapped = swapped + UElem(2, {key: c})
        assert _all_same_canonical(swapped) == _all_same_canonical(rp)


def test_kappa_representative_invariance(B4, dbl):
    tab = lambda_table(B4, 3)
    lam = tab.entries[(1, 1)]
    img1 = instantiate_tensor(lam, dbl.algebra, dbl.r)
    relabeled = lam.relabel({0: 1, 1: 0})
    img2 = instantiate_tensor(relabeled, dbl.algebra, dbl.r)
    assert img1 == img2
    # kappa of lambda_1 is r itself
    img = collapse_single_letters(
        instantiate_tensor(tab.entries[(1,)], dbl.algebra, dbl.r), 2)
    assert img == dbl.r


def test_uelem_json_round_trip(B4):
    tab = lambda_table(B4, 3)
    r2 = tab.rmatrix(2)
    back = uelem_from_json(json.loads(json.dumps(uelem_to_json(r2))))
    assert back == r2
    assert pretty_rmatrix(tab.rmatrix(1)) == "1 (a1)(x)(b1)"
