import itertools
import random
from fractions import Fraction

from liequant.scalars import HSeries, as_series
from liequant.bfamily import BFamily, solve_bfamily
from liequant.freealg import LiePoly, substitute
from liequant.liealg import abelian, sl2
from liequant.shuffle import (ShContext, ShElem, ShTensor, sh_mul, sh_comul,
                              sh_antipode, sh_antipode_closed, sh_antipode_inv,
                              hopf_report, shuffle0, poisson_m1, sym_word,
                              is_symmetric, LieCoalgebra, TensContext,
                              TensElem, t_comul, delta_P, pairing, qfsh_delta,
                              qfsh_member, ordered_surjection_count,
                              all_words, sh_to_json, sh_from_json)


def ctx_borel(B4, borel, order=3):
    return ShContext(borel.algebra, B4, order)


def test_product_examples(B4, borel):
    ctx = ctx_borel(B4, borel)
    h, e = ShElem.letter(ctx, 0), ShElem.letter(ctx, 1)
    # (x)(y) = (xy) + (yx) + 1/2([x,y]) with [h,e] = e
    assert sh_mul(h, e) == (ShElem.word(ctx, (0, 1)) + ShElem.word(ctx, (1, 0))
                            + ShElem.word(ctx, (1,), Fraction(1, 2)))
    # abelian: plain shuffle
    actx = ShContext(abelian(2), B4, 3)
    a, b = ShElem.letter(actx, 0), ShElem.letter(actx, 1)
    assert sh_mul(a, b) == ShElem.word(actx, (0, 1)) + ShElem.word(actx, (1, 0))


def test_explicit_products_match_displays(B4):
    """(xx')(y), (x)(yy') against the normalized degree-3 displays,
    evaluated in the free Lie algebra on three generators."""
    # model the free 3-generator Lie algebra truncated at bracket depth 3
    # through a concrete faithful instantiation: use the table directly
    from liequant.unitensor import UElem, a_atom, u_mul
    sh = ("sh", B4)
    x, xp, y = (a_atom(i) for i in range(3))

    def word(letters):
        return UElem(2, {(tuple((a,) for a in letters), ()): Fraction(1)})

    prod = u_mul(word((x, xp)), word((y,)), (sh, "conc"))
    # expected: (xx'y) + (xyx') + (yxx') + 1/2 (x [x',y]) + 1/2 ([x,y] x')
    #           + B21-term  (letters in the left leg)
    expect = {}
    X, XP, Y = (0, 0), (1, 0), (2, 0)
    for w, c in ((((X,), (XP,), (Y,)), 1), (((X,), (Y,), (XP,)), 1),
                 (((Y,), (X,), (XP,)), 1)):
        expect[(w, ())] = Fraction(c)
    expect[(((X,), (XP, Y)), ())] = Fraction(1, 2)     # (x [x',y])
    expect[(((X, Y), (XP,)), ())] = Fraction(1, 2)     # ([x,y] x')
    # degree-1 part: B21(x,x'|y) = 1/24([x,[x',y]] + [x',[x,y]])
    expect[(((X, XP, Y),), ())] = Fraction(-1, 24)     # see below
    # [x,[x',y]] + [x',[x,y]] in the left-normed basis:
    # [x,[x',y]] = [[x,x'],y] - [[x,y],x'];  [x',[x,y]] = [[x,y],x'] hmm -
    # assemble honestly instead:
    from liequant.freealg import lie_bracket, LiePoly as LP
    b21 = Fraction(1, 24) * (lie_bracket(LP.gen(0), lie_bracket(LP.gen(1), LP.gen(2)))
                             + lie_bracket(LP.gen(1), lie_bracket(LP.gen(0), LP.gen(2))))
    expect.pop((((X, XP, Y),), ()))
    for mono, c in b21.terms.items():
        key = ((tuple((i, 0) for i in mono),), ())
        expect[key] = expect.get(key, Fraction(0)) + c
    assert dict(prod.terms) == {k: v for k, v in expect.items() if v}


def test_comul_and_counit(B4, borel):
    ctx = ctx_borel(B4, borel)
    a = ShElem.word(ctx, (0, 1))
    co = sh_comul(a)
    assert co.terms == {((), (0, 1)): as_series(1, 3),
                        ((0,), (1,)): as_series(1, 3),
                        ((0, 1), ()): as_series(1, 3)}
    assert sh_comul(ShElem.unit(ctx)).terms == {((), ()): as_series(1, 3)}


def test_antipode_examples(B4, borel):
    ctx = ctx_borel(B4, borel)
    assert sh_antipode(ShElem.unit(ctx)) == ShElem.unit(ctx)
    assert sh_antipode(ShElem.letter(ctx, 0)) == -1 * ShElem.letter(ctx, 0)
    s = sh_antipode(ShElem.word(ctx, (0, 1)))
    assert s == ShElem.word(ctx, (1, 0)) + ShElem.word(ctx, (1,), Fraction(1, 2))
    for w in all_words(2, 4):
        a = ShElem.word(ctx, w)
        assert sh_antipode(a) == sh_antipode_closed(a)
        assert sh_antipode(sh_antipode_inv(a)) == a


def test_hopf_report_borel2(B4, borel):
    assert hopf_report(borel.algebra, B4, 3, 2).ok()


def test_hopf_report_corrupted_family(B4, borel):
    table = dict(B4.table)
    table.pop((1, 2))
    bad = BFamily(B4.lam, 3, {k: v for k, v in table.items()
                              if sum(k) <= 3})
    rep = hopf_report(borel.algebra, bad, 3, 2)
    assert not rep.ok()
    assert any(kind == "associativity" for kind, _ in rep.failures)


def test_poisson_m1(B4, borel):
    ctx = ctx_borel(B4, borel, 0)
    m1 = poisson_m1(ctx, (0,), (1,))
    assert m1 == ShElem.word(ctx, (1,))       # ([h,e]) = (e)
    actx = ShContext(abelian(2), B4, 0)
    assert not poisson_m1(actx, (0, 1), (0,))
    # classical limit: sh(a,b) - sh(b,a) at top degree reproduces m1
    for u, v in (((0,), (1,)), ((0, 1), (1,)), ((0,), (1, 1))):
        a, b = ShElem.word(ctx, u), ShElem.word(ctx, v)
        comm = sh_mul(a, b) - sh_mul(b, a)
        top = comm.component(len(u) + len(v) - 1)
        assert top == poisson_m1(ctx, u, v)
        half = sh_mul(a, b) - shuffle0(ctx, u, v)
        assert half.component(len(u) + len(v) - 1) == \
            Fraction(1, 2) * poisson_m1(ctx, u, v)


def test_sym_embedding(B4, borel):
    ctx = ctx_borel(B4, borel)
    x = ShElem.letter(ctx, 1)
    assert sh_mul(x, x) == ShElem.word(ctx, (1, 1), 2)
    xxx = sh_mul(sh_mul(x, x), x)
    assert xxx == ShElem.word(ctx, (1, 1, 1), 6)    # x^3 -> 3!(xxx)
    s1 = sym_word(ctx, (0,))
    s2 = sym_word(ctx, (1,))
    assert is_symmetric(sh_mul(s1, s2))
    assert is_symmetric(sh_mul(sym_word(ctx, (0, 1)), s2))
    # iota(x y - y x - [x,y]) = 0
    h, e = ShElem.letter(ctx, 0), ShElem.letter(ctx, 1)
    assert not (sh_mul(h, e) - sh_mul(e, h) - ShElem.letter(ctx, 1))


def test_reversal_is_hopf_iso_between_dual_families(B4, borel):
    """m_Sh(B) o (Psi x Psi) = Psi o m_Sh(B-dual) on random words."""
    ctx = ShContext(borel.algebra, B4, 3)
    ctx_dual = ShContext(borel.algebra, B4.dual(), 3)
    rng = random.Random(8)
    for _ in range(10):
        u = tuple(rng.randrange(2) for _ in range(rng.randint(0, 3)))
        v = tuple(rng.randrange(2) for _ in range(rng.randint(0, 3)))
        lhs = sh_mul(ShElem.word(ctx, u).reverse(), ShElem.word(ctx, v).reverse())
        rhs = sh_mul(ShElem.word(ctx_dual, u), ShElem.word(ctx_dual, v)).reverse()
        assert lhs.terms == rhs.terms


def test_projection_bracket_lemma(B4, borel):
    """pr([iota(a), T]) = [a, pr(T)] for words T of degree <= 4."""
    ctx = ctx_borel(B4, borel)
    alg = borel.algebra
    for a_idx in range(2):
        a = ShElem.letter(ctx, a_idx)
        for w in all_words(2, 4):
            T = ShElem.word(ctx, w)
            lhs = (sh_mul(a, T) - sh_mul(T, a)).pr()
            rhs = alg.bracket(alg.basis(a_idx), alg.basis(w[0])) \
                if len(w) == 1 else {}
            assert lhs == {k: as_series(v, 3) for k, v in rhs.items()}


def test_homotopy_formula(B4, borel):
    """id = Delta~ o conc~ + conc~(2) o (Delta~ x id - id x Delta~) on
    pairs of nonempty words of total degree <= 4 (operator identity on
    the word coordinates; the maps do not involve the deformation)."""
    words = [w for w in all_words(2, 3) if w]
    for u in words:
        for v in words:
            n = len(u) + len(v)
            if n > 4:
                continue
            # Delta~ o conc~ : proper deconcatenations of (uv) / (n-1)
            total = {}
            for i in range(1, n):
                key = ((u + v)[:i], (u + v)[i:])
                total[key] = total.get(key, 0) + Fraction(1, n - 1)
            # conc~(2) of (Delta~ x id - id x Delta~)(u x v):
            # each triple (w1, w2, w3) maps to (w1w2, w3)/(n-1) - (w1, w2w3)/(n-1)
            for i in range(1, len(u)):
                w1, w2 = u[:i], u[i:]
                total[(w1 + w2, v)] = total.get((w1 + w2, v), 0) + Fraction(1, n - 1)
                total[(w1, w2 + v)] = total.get((w1, w2 + v), 0) - Fraction(1, n - 1)
            for j in range(1, len(v)):
                w2, w3 = v[:j], v[j:]
                total[(u + w2, w3)] = total.get((u + w2, w3), 0) - Fraction(1, n - 1)
                total[(u, w2 + w3)] = total.get((u, w2 + w3), 0) + Fraction(1, n - 1)
            total = {k: c for k, c in total.items() if c}
            assert total == {(u, v): Fraction(1)}


def test_delta_P(B4, borel):
    co = LieCoalgebra.from_bialgebra(borel)
    # P = x1: identity
    t = delta_P(co, LiePoly.gen(0), 1)
    assert t == {(1,): Fraction(1)}
    # P = [x1,x2]: the cobracket itself
    t2 = delta_P(co, LiePoly.leftnormed((0, 1)), 1)
    assert t2 == {(0, 1): Fraction(1), (1, 0): Fraction(-1)}
    # zero coalgebra in higher degree
    co0 = LieCoalgebra(2, {})
    assert delta_P(co0, LiePoly.leftnormed((0, 1)), 0) == {}
    # adjointness against substitution on the dual algebra
    dual = co.dual_algebra()
    for (p, q), ent in B4.table.items():
        if p + q > 3:
            continue
        n = p + q
        for a in range(2):
            t = delta_P(co, ent, a)
            for bs in itertools.product(range(2), repeat=n):
                lhs = t.get(tuple(bs), Fraction(0))
                val = substitute(ent, [dual.basis(b) for b in bs],
                                 dual.carrier()).get(a, Fraction(0))
                assert lhs == val


def test_t_comul(B4, borel):
    co0 = LieCoalgebra(2, {})
    tctx0 = TensContext(co0, B4, 3)
    d = t_comul(tctx0, TensElem.word(tctx0, (0,)))
    assert d == {((), (0,)): as_series(1, 3), ((0,), ()): as_series(1, 3)}
    co = LieCoalgebra.from_bialgebra(borel)
    tctx = TensContext(co, B4, 3)
    d2 = t_comul(tctx, TensElem.word(tctx, (1,)))
    assert d2[((0,), (1,))].coeff(1) == Fraction(1, 2)
    assert d2[((1,), (0,))].coeff(1) == Fraction(-1, 2)
    # counit law
    for i in range(2):
        dd = t_comul(tctx, TensElem.word(tctx, (i,)))
        left = {}
        for (u, v), c in dd.items():
            if u == ():
                left[v] = left.get(v, as_series(0, 3)) + c
        assert left == {(i,): as_series(1, 3)}
    # coassociativity mod hbar^4 on generators and a 2-word
    for x in (TensElem.word(tctx, (1,)), TensElem.word(tctx, (0, 1))):
        d1 = {}
        for (u, v), c in t_comul(tctx, x).items():
            for (u2, v2), c2 in t_comul(tctx, TensElem.word(tctx, u)).items():
                k = (u2, v2, v)
                d1[k] = d1.get(k, as_series(0, 3)) + c * c2
        d2m = {}
        for (u, v), c in t_comul(tctx, x).items():
            for (u2, v2), c2 in t_comul(tctx, TensElem.word(tctx, v)).items():
                k = (u, u2, v2)
                d2m[k] = d2m.get(k, as_series(0, 3)) + c * c2
        assert {k: v for k, v in d1.items() if v} == \
            {k: v for k, v in d2m.items() if v}


def test_pairing(B4, borel):
    """The Hopf pairing between the dual shuffle algebra and the deformed
    tensor algebra of borel2."""
    dual_alg = LieCoalgebra.from_bialgebra(borel).dual_algebra()
    ctx = ShContext(dual_alg, B4, 3)
    co = LieCoalgebra.from_bialgebra(borel)
    tctx = TensContext(co, B4, 3)
    # <(e^), e> = hbar^-1
    p = pairing(ShElem.letter(ctx, 1), TensElem.word(tctx, (1,)))
    assert p.pole == 1 and p.series == 1
    # mismatched degrees -> 0
    p0 = pairing(ShElem.letter(ctx, 1), TensElem.word(tctx, (1, 1)))
    assert not p0.series
    # duality 1: <xi eta, x> = sum <xi, x1> <eta, x2>
    rng = random.Random(9)
    for _ in range(8):
        xi = ShElem.word(ctx, tuple(rng.randrange(2) for _ in range(rng.randint(0, 2))))
        eta = ShElem.word(ctx, tuple(rng.randrange(2) for _ in range(rng.randint(0, 2))))
        x = TensElem.word(tctx, tuple(rng.randrange(2) for _ in range(rng.randint(0, 3))))
        lhs = pairing(sh_mul(xi, eta), x)
        tot_pole = 0
        acc = as_series(0, 3)
        pieces = []
        for (u, v), c in t_comul(tctx, x).items():
            p1 = pairing(xi, TensElem.word(tctx, u))
            p2 = pairing(eta, TensElem.word(tctx, v))
            pieces.append((p1, p2, c))
        # compare as coefficient of the common pole hbar^-deg(x)
        n = max((len(w) for w in x.terms), default=0)
        lhs_val = lhs.series.shift(lhs.pole - n) if lhs.pole <= n else None
        rhs_val = as_series(0, 3)
        ok = True
        for p1, p2, c in pieces:
            pole = p1.pole + p2.pole
            if pole > n:
                prod = p1.series * p2.series * c
                if prod:
                    ok = False
                    break
                continue
            rhs_val = rhs_val + (p1.series * p2.series * c).shift(pole - n)
        assert ok and lhs_val is not None
        assert lhs_val == rhs_val
    # duality 2: <xi, x y> = sum <xi1, x><xi2, y>
    for _ in range(8):
        xi = ShElem.word(ctx, tuple(rng.randrange(2) for _ in range(rng.randint(0, 3))))
        x = TensElem.word(tctx, tuple(rng.randrange(2) for _ in range(rng.randint(0, 2))))
        y = TensElem.word(tctx, tuple(rng.randrange(2) for _ in range(rng.randint(0, 2))))
        lhs = pairing(xi, x * y)
        n = max((len(w) for w in (x * y).terms), default=0)
        lhs_val = lhs.series.shift(lhs.pole - n) if lhs.pole <= n else None
        rhs_val = as_series(0, 3)
        ok = True
        for (u, v), c in sh_comul(xi).terms.items():
            p1 = pairing(ShElem.word(ctx, u), x)
            p2 = pairing(ShElem.word(ctx, v), y)
            pole = p1.pole + p2.pole
            prod = p1.series * p2.series * c
            if pole > n:
                if prod:
                    ok = False
                    break
                continue
            rhs_val = rhs_val + prod.shift(pole - n)
        assert ok and lhs_val is not None and lhs_val == rhs_val


def test_qfsh(B4, borel):
    ctx = ctx_borel(B4, borel)
    # conc o delta_n multiplies pure tensors by the ordered-surjection count
    for k in (1, 2, 3, 4):
        w = tuple([0, 1, 0, 1][:k])
        a = ShElem.word(ctx, w)
        for n in (1, 2, 3, 4):
            d = qfsh_delta(a, n)
            conc = {}
            for key, c in d.terms.items():
                word = sum(key, ())
                conc[word] = conc.get(word, as_series(0, 3)) + c
            conc = {kk: v for kk, v in conc.items() if v}
            cnt = ordered_surjection_count(n, k)
            assert conc == ({w: as_series(cnt, 3)} if cnt else {})
    assert ordered_surjection_count(2, 1) == 0    # zero iff k < n
    assert ordered_surjection_count(2, 2) == 1
    assert ordered_surjection_count(2, 3) == 2
    # membership: hbar^k-divisibility per degree-k part
    h2 = HSeries.hpow(2, 1, 3)
    assert qfsh_member(ShElem(ctx, {(0, 1): h2}))
    assert not qfsh_member(ShElem.word(ctx, (0, 1)))
    assert qfsh_member(ShElem.unit(ctx))


def test_sh_json_round_trip(B4, borel):
    ctx = ctx_borel(B4, borel)
    a = sh_mul(ShElem.letter(ctx, 0), ShElem.word(ctx, (1, 1)))
    import json as _json
    blob = _json.dumps(sh_to_json(a))
    assert sh_from_json(ctx, _json.loads(blob)) == a


def test_hopf_report_sl2_small(B4):
    assert hopf_report(sl2(), B4, 2, 2).ok()
