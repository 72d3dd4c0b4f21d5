"""Universal spaces for CYBE solutions: normal ordering, coboundaries,
cohomology, and the unique solution of the universal Lie QYB equations.

Elements live in the multi-slot word calculus of unitensor: each formal
pair contributes an "a" atom in one slot and a "b" atom in a later slot.
Inner slots multiply associatively under instantiation, so words there
can be reordered at the cost of commutators; the mixed commutator
[b, a] rewrites through the universal CYBE identity, moving the two
atoms onto their partners.  Normal-ordered terms have every inner slot
of the shape a...a b...b, which spans the direct sum of the F-spaces.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from . import linalg
from .bfamily import positive_compositions
from .freealg import LiePoly, expand_leftnormed, substitute, FreeLieCarrier
from .rmatrix import LambdaTable, independent_subset, _shift_pids
from .unitensor import (UElem, a_atom, b_atom, canonical, u_mul,
                        pr_word_product, instantiate_tensor,
                        collapse_single_letters)


# ---------------------------------------------------------------------------
# normal ordering
# ---------------------------------------------------------------------------

def expand_to_words(elem):
    """Expand every multi-atom letter into plain single-atom words."""
    out = UElem(elem.legs, {})
    for k, c in elem.terms.items():
        pieces = [((), c)]
        for leg in k:
            opts = [((), Fraction(1))]
            for letter in leg:
                if len(letter) == 1:
                    opts = [(w + letter, cc) for w, cc in opts]
                else:
                    exp = expand_leftnormed(tuple(letter))
                    opts = [(w + word, cc * cw)
                            for w, cc in opts
                            for word, cw in exp.terms.items()]
            pieces = [(key + (w,), c1 * c2) for key, c1 in pieces
                      for w, c2 in opts]
        for key, cc in pieces:
            key = tuple(tuple((a,) for a in w) for w in key)
            s = out.terms.get(key, 0) + cc
            if s:
                out.terms[key] = s
            else:
                out.terms.pop(key, None)
    return out


def _find_atom(k, atom):
    for slot, leg in enumerate(k):
        for pos, letter in enumerate(leg):
            if letter == (atom,):
                return slot, pos
    return None


def normal_order(elem):
    """Rewrite so every inner slot is a-atoms then b-atoms.

    Input letters may be Lie monomials; the output is in plain word form.
    The mixed commutator move is the universal three-term identity; its
    instantiation is the CYBE for the formal pair.
    """
    elem = expand_to_words(elem)
    legs = elem.legs
    middles = range(1, legs - 1)
    done = {}
    work = dict(elem.terms)

    def push(key, coeff):
        s = work.get(key, 0) + coeff
        if s:
            work[key] = s
        else:
            work.pop(key, None)

    while work:
        k, c = work.popitem()
        target = None
        for s in middles:
            w = k[s]
            for i in range(len(w) - 1):
                if w[i][0][1] == 1 and w[i + 1][0][1] == 0:
                    target = (s, i)
                    break
            if target:
                break
        if target is None:
            sdone = done.get(k, 0) + c
            if sdone:
                done[k] = sdone
            else:
                done.pop(k, None)
            continue
        s, i = target
        w = k[s]
        bj = w[i][0]
        ap = w[i + 1][0]
        # swap term
        w_swap = w[:i] + (w[i + 1], w[i]) + w[i + 2:]
        push(k[:s] + (w_swap,) + k[s + 1:], c)
        # CYBE move for the commutator [b_j, a_p]
        j, p = bj[0], ap[0]
        loc_aj = _find_atom(k, (j, 0))
        loc_bp = _find_atom(k, (p, 1))
        assert loc_aj is not None and loc_bp is not None, "unpaired atom"
        ks, ki = loc_aj
        ls, li = loc_bp
        assert ks != s and ls != s
        # [b_j, a_p] in an inner slot rewrites to
        #   - (a_j -> [a_j, a_p] at its slot) x (b_j stays)
        #   - (a_p stays) x (b_p -> [b_j, b_p] at its slot),
        # instantiating to the CYBE for the formal pairs j, p.
        mid_b = k[:s] + (w[:i] + ((bj,),) + w[i + 2:],) + k[s + 1:]
        mid_a = k[:s] + (w[:i] + ((ap,),) + w[i + 2:],) + k[s + 1:]
        legk = mid_b[ks]
        w1 = legk[:ki] + (((j, 0),), (ap,)) + legk[ki + 1:]
        w2 = legk[:ki] + ((ap,), ((j, 0),)) + legk[ki + 1:]
        push(mid_b[:ks] + (w1,) + mid_b[ks + 1:], -c)
        push(mid_b[:ks] + (w2,) + mid_b[ks + 1:], c)
        legl = mid_a[ls]
        v1 = legl[:li] + ((bj,), ((p, 1),)) + legl[li + 1:]
        v2 = legl[:li] + (((p, 1),), (bj,)) + legl[li + 1:]
        push(mid_a[:ls] + (v1,) + mid_a[ls + 1:], -c)
        push(mid_a[:ls] + (v2,) + mid_a[ls + 1:], c)
    return UElem(legs, done)


# ---------------------------------------------------------------------------
# gradings and class utilities
# ---------------------------------------------------------------------------

def pid_types(k):
    """dict pid -> (slot of a, slot of b), 0-based slots."""
    t = {}
    for slot, leg in enumerate(k):
        for letter in leg:
            for (p, s) in letter:
                cur = t.setdefault(p, [None, None])
                cur[s] = slot
    return {p: tuple(v) for p, v in t.items()}


def grading(k):
    """Multiset of pair types as a sorted tuple."""
    return tuple(sorted(pid_types(k).values()))


def canonical_classes(elem):
    """Symmetrized word-form representative, grouped by pair type."""
    return canonical(elem, None)


def split_by_grading(elem):
    out = {}
    for k, c in elem.terms.items():
        g = grading(k)
        out.setdefault(g, UElem(elem.legs, {})).terms[k] = c
    return out


def lie_form(elem):
    """Read a word-form class as sums of Lie-letter tensors, with proof.

    Every slot word of every graded piece must assemble into a tensor of
    Lie polynomials; the coordinates are read from the word tuples whose
    every slot starts with its minimal atom.  The reconstruction is
    verified by expanding back (raises AssertionError otherwise).
    """
    out = UElem(elem.legs, {})
    for k, c in elem.terms.items():
        mins = []
        ok = True
        for leg in k:
            atoms = [letter[0] for letter in leg]
            if not atoms:
                ok = False
                break
            if atoms[0] != min(atoms):
                ok = False
                break
        if not ok:
            continue
        key = tuple((tuple(letter[0] for letter in leg),) for leg in k)
        s = out.terms.get(key, 0) + c
        if s:
            out.terms[key] = s
        else:
            out.terms.pop(key, None)
    back = canonical_classes(expand_to_words(out))
    orig = canonical_classes(expand_to_words(elem))
    assert back == orig, "element is not a tensor of Lie polynomials"
    return out


# ---------------------------------------------------------------------------
# r-insertions and coboundaries
# ---------------------------------------------------------------------------

def r_pair(pid, spots, legs):
    """r^(spots) for one formal pair: a in spots[0], b in spots[1]."""
    key = [()] * legs
    key[spots[0] - 1] = ((a_atom(pid),),)
    key[spots[1] - 1] = ((b_atom(pid),),)
    return UElem(legs, {tuple(key): Fraction(1)})


CONC3 = ("conc", "conc", "conc")
CONC4 = ("conc", "conc", "conc", "conc")


def _comm(x, y, modes):
    return u_mul(x, y, modes) - u_mul(y, x, modes)


def delta3(x):
    """Coboundary F_n -> F^{Lie,(3)}_{n+1}: six commutators with r, then
    normal ordering.  x: 2-slot element; output: canonical 3-slot form."""
    legs = 3
    pids = x.pids()
    fresh = max(pids, default=-1) + 1
    acc = UElem.zero(legs)
    for (spots_x, spots_r, sign) in (((1, 3), (1, 2), -1), ((2, 3), (1, 2), -1),
                                     ((2, 3), (1, 3), -1),
                                     ((1, 2), (1, 3), 1), ((1, 2), (2, 3), 1),
                                     ((1, 3), (2, 3), 1)):
        xe = x.place(spots_x, legs)
        re = r_pair(fresh, spots_r, legs)
        term = _comm(xe, re, CONC3)
        acc = acc + (Fraction(sign) * term)
    return canonical_classes(normal_order(acc))


def delta4(x):
    """Coboundary on 3-slot classes: commutators with r in four slots."""
    legs = 4
    pids = x.pids()
    fresh = max(pids, default=-1) + 1
    groups = (
        ((2, 3, 4), (((1, 2), 1), ((1, 3), 1), ((1, 4), 1))),
        ((1, 3, 4), (((1, 2), 1), ((2, 3), -1), ((2, 4), -1))),
        ((1, 2, 4), (((1, 3), -1), ((2, 3), -1), ((3, 4), 1))),
        ((1, 2, 3), (((1, 4), 1), ((2, 4), 1), ((3, 4), 1))),
    )
    acc = UElem.zero(legs)
    for spots_x, rs in groups:
        xe = x.place(spots_x, legs)
        for spots_r, sign in rs:
            re = r_pair(fresh, spots_r, legs)
            acc = acc + Fraction(sign) * _comm(re, xe, CONC4)
    return canonical_classes(normal_order(acc))


def mu_lie(elem3):
    """Normal ordering of a 3-slot tensor of Lie letters; asserts that the
    output is again a tensor of Lie polynomials (middle slot pure)."""
    res = canonical_classes(normal_order(elem3))
    for k in res.terms:
        mid_sides = [a[1] for letter in k[1] for a in letter]
        assert not (0 in mid_sides and 1 in mid_sides), \
            "mixed middle slot survived normal ordering of Lie input"
    lie_form(res)  # raises if any slot fails to be a Lie polynomial
    return res


def f3_mul(x, y):
    """Product of 3-slot classes: slotwise concatenation + normal order."""
    shift = max(x.pids(), default=-1) + 1
    y2 = _shift_pids(y, shift)
    return canonical_classes(normal_order(u_mul(x, y2, CONC3)))


def entretien_cybe(i, j, k):
    """[r^(ij), r^(ik)] + [r^(ij), r^(jk)] + [r^(ik), r^(jk)] in 4 slots."""
    acc = UElem.zero(4)
    for (s1, s2) in (((i, j), (i, k)), ((i, j), (j, k)), ((i, k), (j, k))):
        acc = acc + _comm(r_pair(0, s1, 4), r_pair(1, s2, 4), CONC4)
    return canonical_classes(normal_order(acc))


# ---------------------------------------------------------------------------
# bases of the Lie coinvariant spaces
# ---------------------------------------------------------------------------

def _lie_monomials(atoms):
    """Left-normed basis monomials of the multilinear part on the atoms."""
    atoms = sorted(atoms)
    if not atoms:
        return [()]
    lo, rest = atoms[0], atoms[1:]
    return [(lo,) + perm for perm in itertools.permutations(rest)]


def basis_F(n):
    """Basis of F_n: classes of P x Q, both slots on the same n pairs."""
    a_atoms = [a_atom(i) for i in range(n)]
    b_atoms = [b_atom(i) for i in range(n)]
    raw = []
    for ma in _lie_monomials(a_atoms):
        for mb in _lie_monomials(b_atoms):
            e = canonical_classes(UElem(2, {((ma,), (mb,)): Fraction(1)}))
            if e:
                lead = min(e.terms)
                raw.append((1 / e.terms[lead]) * e)
    uniq = {}
    for e in raw:
        uniq.setdefault(tuple(sorted(e.terms.items())), e)
    return independent_subset(list(uniq.values()))


def basis_F3lie(N):
    """Basis of the degree-N three-slot Lie space (aab and abb pieces)."""
    out = []
    for p in range(1, N):
        q = N - p
        # aab: p pairs (slot1, slot3), q pairs (slot2, slot3)
        t13 = list(range(p))
        t23 = list(range(p, N))
        for m1 in _lie_monomials([a_atom(i) for i in t13]):
            for m2 in _lie_monomials([a_atom(i) for i in t23]):
                for m3 in _lie_monomials([b_atom(i) for i in range(N)]):
                    e = canonical_classes(UElem(3, {((m1,), (m2,), (m3,)): Fraction(1)}))
                    if e:
                        lead = min(e.terms)
                        out.append((1 / e.terms[lead]) * e)
        # abb: p pairs (slot1, slot2), q pairs (slot1, slot3)
        t12 = list(range(p))
        t13b = list(range(p, N))
        for m1 in _lie_monomials([a_atom(i) for i in range(N)]):
            for m2 in _lie_monomials([b_atom(i) for i in t12]):
                for m3 in _lie_monomials([b_atom(i) for i in t13b]):
                    e = canonical_classes(UElem(3, {((m1,), (m2,), (m3,)): Fraction(1)}))
                    if e:
                        lead = min(e.terms)
                        out.append((1 / e.terms[lead]) * e)
    uniq = {}
    for e in out:
        uniq.setdefault(tuple(sorted(e.terms.items())), e)
    return independent_subset(list(uniq.values()))


def _coords(elems, images):
    """Matrix of images over the union of their term keys."""
    keys = sorted({k for im in images for k in im.terms}, key=str)
    index = {k: i for i, k in enumerate(keys)}
    cols = []
    for im in images:
        v = [Fraction(0)] * len(keys)
        for k, c in im.terms.items():
            v[index[k]] = c
        cols.append(v)
    rows = [[cols[j][i] for j in range(len(cols))] for i in range(len(keys))]
    return rows, keys, index


def cohomology_dims(N_max):
    """Table {N: (dim H^2_N, dim H^3_N or None)} for N = 1..N_max."""
    table = {}
    fbases = {n: basis_F(n) for n in range(1, N_max + 1)}
    d3 = {n: [delta3(e) for e in fbases[n]] for n in range(1, N_max + 1)}
    for N in range(1, N_max + 1):
        rows, _, _ = _coords(fbases[N], d3[N])
        h2 = len(fbases[N]) - linalg.rank(rows, len(fbases[N]))
        h3 = None
        if N >= 2:
            f3b = basis_F3lie(N)
            imgs = [delta4(e) for e in f3b]
            rows4, _, _ = _coords(f3b, imgs)
            ker4 = len(f3b) - linalg.rank(rows4, len(f3b))
            rows3, _, _ = _coords(fbases[N - 1], d3[N - 1])
            rk3 = linalg.rank(rows3, len(fbases[N - 1]))
            h3 = ker4 - rk3
        table[N] = (h2, h3)
    return table


# ---------------------------------------------------------------------------
# the universal Lie QYBE residual, Phi_N and the solution
# ---------------------------------------------------------------------------

def _substitute_pairs(elem, pair_map):
    """Replace each formal pair by a 2-slot pair element (fresh pids).

    pair_map: pid -> UElem with 2 slots, each a single letter (the a- and
    b-sides of the replacement).  Letters of elem may be Lie monomials;
    substitution happens inside letters via the free Lie algebra.
    """
    out = UElem(elem.legs, {})
    for k, c in elem.terms.items():
        pids = sorted(pid_types(k))
        combos = [({}, c)]
        for pid in pids:
            rep = pair_map[pid]
            nxt = []
            for amap, cc in combos:
                for rk, rc in rep.terms.items():
                    (aw, bw) = rk
                    assert len(aw) == 1 and len(bw) == 1
                    m = dict(amap)
                    m[pid] = (aw[0], bw[0])
                    nxt.append((m, cc * rc))
            combos = nxt
        for amap, cc in combos:
            reterm = [((), Fraction(1))]
            ok = True
            for leg in k:
                opts = [((), Fraction(1))]
                for letter in leg:
                    # substitute replacement polys into the letter monomial
                    labels = list(letter)
                    args = [LiePoly({tuple(amap[p][s]): Fraction(1)})
                            for (p, s) in labels]
                    lp = LiePoly({tuple(range(len(labels))): Fraction(1)})
                    val = substitute(lp, args, FreeLieCarrier)
                    if not val:
                        ok = False
                        break
                    opts = [(w + (mono,), c2 * cv)
                            for w, c2 in opts
                            for mono, cv in val.terms.items()]
                if not ok:
                    break
                reterm = [(key + (tuple(w),), c3 * c4) for key, c3 in reterm
                          for w, c4 in opts]
            if not ok:
                continue
            for key, c5 in reterm:
                s = out.terms.get(key, 0) + cc * c5
                if s:
                    out.terms[key] = s
                else:
                    out.terms.pop(key, None)
    return out


def ins(elem, varrho, total_degree):
    """Insertion of a family into the pair slots of a universal class.

    Replaces every formal pair of elem by entries of varrho (a dict
    degree -> 2-slot class), summing over all ways the degrees add up to
    total_degree.  Multilinear in the varrho entries; the identity family
    {1: varrho_one()} acts as a relabeling.
    """
    pids = sorted({p for k in elem.terms for leg in k for letter in leg
                   for (p, _s) in letter})
    n = len(pids)
    out = UElem.zero(elem.legs)
    for degs in positive_compositions(total_degree, n):
        if any(m not in varrho or not varrho[m] for m in degs):
            continue
        pair_map = {}
        off = 1000
        for pid, m in zip(pids, degs):
            pair_map[pid] = _shift_pids(varrho[m], off)
            off += m
        out = out + _substitute_pairs(elem, pair_map)
    return canonical_classes(out)


class UnivContext:
    """Caches the lambda-table R' assemblies and rho-inserted R-terms."""

    def __init__(self, bfam, max_degree):
        from .rmatrix import lambda_table as _lt
        self.bfam = bfam
        self.table = _lt(bfam, max_degree)
        self.max_degree = max_degree

    def r_terms_with_rho(self, varrho, N):
        """Terms of R(rho) of total pair-degree d for d = 0..N.

        varrho: dict m -> F_m element (2-slot, single Lie letters); rho is
        the formal sum of their kappa-insertions.  Returns a list indexed
        by degree; each entry is a UElem whose pids are fresh per degree.
        """
        out = [UElem.unit(2)]
        for d in range(1, N + 1):
            acc = {}
            for n in range(1, d + 1):
                rn = self.table.rmatrix(n)
                # distribute insertion degrees over the n pair slots
                for degs in positive_compositions(d, n):
                    if any(m not in varrho or not varrho[m] for m in degs):
                        continue
                    pair_map = {}
                    off = 1000
                    for pid, m in enumerate(degs):
                        rep = _shift_pids(varrho[m], off)
                        off += m
                        pair_map[pid] = rep
                    for k, c in _substitute_pairs(rn, pair_map).terms.items():
                        s = acc.get(k, 0) + c
                        if s:
                            acc[k] = s
                        else:
                            acc.pop(k, None)
            out.append(UElem(2, acc))
        return out


def univ_qybe_residual(bfam, varrho, N, max_table=None):
    """Degree-N component of pr^(x3)(R12 R13 R23 - R23 R13 R12) with
    rho = sum of the varrho insertions, as a canonical 3-slot class."""
    ctx = UnivContext(bfam, max_table or N)
    rterms = ctx.r_terms_with_rho(varrho, N)
    acc = {}
    for d12 in range(0, N + 1):
        for d13 in range(0, N + 1 - d12):
            d23 = N - d12 - d13
            t12 = rterms[d12]
            t13 = _shift_pids(rterms[d13], 2000)
            t23 = _shift_pids(rterms[d23], 4000)
            for (u12, v12), c1 in t12.terms.items():
                for (u13, v13), c2 in t13.terms.items():
                    for (u23, v23), c3 in t23.terms.items():
                        c = c1 * c2 * c3
                        # LHS ordering R12 R13 R23
                        L1 = pr_word_product(bfam, u12, u13)
                        if L1:
                            L2 = pr_word_product(bfam, v12, u23)
                            if L2:
                                L3 = pr_word_product(bfam, v13, v23)
                                if L3:
                                    _triple(acc, L1, L2, L3, c)
                        # RHS ordering R23 R13 R12
                        M1 = pr_word_product(bfam, u13, u12)
                        if M1:
                            M2 = pr_word_product(bfam, u23, v12)
                            if M2:
                                M3 = pr_word_product(bfam, v23, v13)
                                if M3:
                                    _triple(acc, M1, M2, M3, -c)
    return canonical_classes(normal_order(UElem(3, acc)))


def _triple(acc, L1, L2, L3, c):
    for m1, c1 in L1.terms.items():
        for m2, c2 in L2.terms.items():
            for m3, c3 in L3.terms.items():
                key = ((tuple(m1),), (tuple(m2),), (tuple(m3),))
                s = acc.get(key, 0) + c * c1 * c2 * c3
                if s:
                    acc[key] = s
                else:
                    acc.pop(key, None)


def varrho_one():
    """The first entry: the class of x (x) x in F_1."""
    return UElem(2, {(((a_atom(0),),), ((b_atom(0),),)): Fraction(1)})


def phi_N(bfam, varrho, N, check_delta3=False):
    """Phi_N: the degree-N residual with varrho_{N-1} set to zero.

    With check_delta3, also asserts that restoring varrho_{N-1} changes
    the residual by exactly delta3(varrho_{N-1}).
    """
    reduced = {m: v for m, v in varrho.items() if m <= N - 2}
    reduced[1] = varrho_one()
    phi = univ_qybe_residual(bfam, reduced, N)
    if check_delta3 and (N - 1) in varrho and varrho[N - 1]:
        full = dict(reduced)
        full[N - 1] = varrho[N - 1]
        total = univ_qybe_residual(bfam, full, N)
        diff = canonical_classes(total - phi)
        assert diff == canonical_classes(delta3(varrho[N - 1])), \
            "residual difference is not delta3(varrho_{N-1})"
    return phi


class Obstructed(ValueError):
    pass


class NonUnique(ValueError):
    pass


def solve_varrho(bfam, N):
    """The unique solution (varrho_n) of the universal equations, n <= N.

    Degree by degree: checks the obstruction delta4(Phi) = 0, solves
    delta3(x) = -Phi exactly and asserts the kernel is trivial.
    """
    varrho = {1: varrho_one()}
    for M in range(2, N + 1):
        phi = phi_N(bfam, varrho, M + 1)
        obstruction = delta4(phi)
        if obstruction:
            raise Obstructed(M + 1)
        fb = basis_F(M)
        imgs = [delta3(e) for e in fb]
        rows, keys, index = _coords(fb, imgs)
        rhs = [Fraction(0)] * len(keys)
        for k, c in phi.terms.items():
            if k not in index:
                raise Obstructed(M + 1)
            rhs[index[k]] = -c
        try:
            x, null = linalg.solve_affine(rows, len(fb), rhs)
        except linalg.InconsistentSystem:
            raise Obstructed(M + 1)
        if null:
            raise NonUnique(M)
        sol = UElem.zero(2)
        for c, e in zip(x, fb):
            sol = sol + c * e
        varrho[M] = canonical_classes(sol)
    return varrho


# ---------------------------------------------------------------------------
# instantiation
# ---------------------------------------------------------------------------

def instantiate(elem, alg, r, order=None):
    """kappa on a class of tensors of Lie polynomials: an exact tensor
    over the algebra basis (degree = number of slots).  Word-form input
    is first rewritten through lie_form (which proves the class is a
    tensor of Lie polynomials)."""
    if any(len(w) != 1 for k in elem.terms for w in k):
        elem = lie_form(elem)
    t = instantiate_tensor(elem, alg, r, order)
    return collapse_single_letters(t, elem.legs)


def instantiate_words(elem, alg, r, order=None):
    """kappa-tensor form for word-form classes (words per slot kept)."""
    return instantiate_tensor(elem, alg, r, order)
