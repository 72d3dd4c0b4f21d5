"""Universal R-matrix terms in shuffle algebras.

The recursion table lambda assigns to each composition (n_1..n_k) an
element of the coinvariant space with k first-leg Lie factors and one
last factor; assembling kappa-images of table entries with legwise
products and reversing the second leg yields the terms R_n satisfying
the quasitriangularity identities.  An independent degree-by-degree
linear solver provides the oracle characterization.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from . import linalg
from .bfamily import compositions, positive_compositions, deformed_word_product
from .freealg import FreeLieCarrier, LiePoly
from .unitensor import (UElem, a_atom, b_atom, u_mul, canonical, deconcat_leg,
                        antipode_leg, pr_word_product, letter_poly,
                        instantiate_tensor)


def pair_elem(pid):
    """The elementary pair a_pid x b_pid as a 2-leg element."""
    return UElem.single(2, (((a_atom(pid),),), ((b_atom(pid),),)))


class LambdaTable:
    """Entries indexed by compositions; block i owns a contiguous pid range."""

    def __init__(self, bfam, max_degree):
        self.bfam = bfam
        self.bdual = bfam.dual()
        self.max_degree = max_degree
        self.entries = {(1,): pair_elem(0)}
        self._rprime = {0: UElem.unit(2), 1: pair_elem(0)}
        for n in range(2, max_degree + 1):
            self._build_degree(n)

    # -- assembly of R'_j from the table --------------------------------

    def aggregated(self, m):
        """Sum of the entries over all compositions of m."""
        out = UElem.zero(2)
        for k in range(1, m + 1):
            for comp in positive_compositions(m, k):
                e = self.entries.get(comp)
                if e:
                    out = out + e
        return out

    def rprime(self, j):
        """R'_j: legwise (deformed product x concatenation) assembly."""
        hit = self._rprime.get(j)
        if hit is not None:
            return hit
        total = UElem.zero(2)
        for k in range(1, j + 1):
            for comp in positive_compositions(j, k):
                cur = None
                off = 0
                for m in comp:
                    factor = _shift_pids(self.aggregated(m), off)
                    off += m
                    if cur is None:
                        cur = factor
                    else:
                        cur = u_mul(cur, factor, (("sh", self.bfam), "conc"))
                if cur:
                    total = total + cur
        self._rprime[j] = total
        return total

    def _build_degree(self, n):
        """kappa(lambda_n) = sum_k (conc~ x pr) (R'_k^(13) R'_(n-k)^(23))."""
        acc = {}
        for k in range(1, n):
            r1 = self.rprime(k)
            r2 = _shift_pids(self.rprime(n - k), k)
            for (a1, bword1), c1 in r1.terms.items():
                for (a2, bword2), c2 in r2.terms.items():
                    la, lb = len(a1), len(a2)
                    if la + lb < 2:
                        continue
                    prb = pr_word_product(self.bdual, bword1, bword2)
                    if not prb:
                        continue
                    weight = Fraction(1, la + lb - 1) * c1 * c2
                    aword = a1 + a2
                    for mono, cm in prb.terms.items():
                        key = (aword, (tuple(mono),))
                        s = acc.get(key, 0) + weight * cm
                        if s:
                            acc[key] = s
                        else:
                            acc.pop(key, None)
        # split by composition of the first-leg letter supports
        buckets = {}
        for key, c in acc.items():
            aword = key[0]
            blocks = [sorted(p for (p, _s) in letter) for letter in aword]
            comp = tuple(len(b) for b in blocks)
            # relabel pids so block i owns the contiguous range
            mapping = {}
            off = 0
            for b in blocks:
                for p in b:
                    mapping[p] = None
            pos = 0
            for b in blocks:
                for p in b:
                    mapping[p] = pos
                    pos += 1
            buckets.setdefault(comp, []).append(
                (UElem(2, {key: c}).relabel(mapping)))
        for comp, pieces in buckets.items():
            total = UElem.zero(2)
            for p in pieces:
                total = total + p
            groups = {}
            off = 0
            for i, m in enumerate(comp):
                for p in range(off, off + m):
                    groups[p] = i
                off += m
            ent = canonical(total, groups)
            if ent:
                if len(comp) == 1:
                    raise AssertionError("single-block entry should vanish")
                self.entries[comp] = ent

    def rmatrix(self, n):
        """R_n: reversal of the second leg of R'_n."""
        return self.rprime(n).reverse_leg(1)


def _shift_pids(elem, offset):
    if offset == 0:
        return elem
    return elem.relabel({p: p + offset for p in elem.pids()})


_TABLE_CACHE = {}


def lambda_table(bfam, N):
    """Shared per-family table cache (tables only ever grow)."""
    key = id(bfam)
    hit = _TABLE_CACHE.get(key)
    if hit is None or hit.max_degree < N:
        hit = LambdaTable(bfam, N)
        _TABLE_CACHE[key] = hit
    return hit


def Ln(bfam, n):
    """Degree-one part of the product (x_1)...(x_n), as a LiePoly."""
    words = [(Fraction(1), (LiePoly.gen(0),))]
    for i in range(1, n):
        nxt = []
        for c, w in words:
            for c2, w2 in deformed_word_product(bfam, w, (LiePoly.gen(i),),
                                                FreeLieCarrier):
                nxt.append((c * c2, w2))
        words = nxt
    out = LiePoly()
    for c, w in words:
        if len(w) == 1:
            out = out + c * w[0]
    return out


def rmatrix_terms(bfam, N):
    """[R_0, ..., R_N] as universal 2-leg elements."""
    table = lambda_table(bfam, N)
    return [table.rmatrix(n) for n in range(N + 1)]


def _all_same_canonical(elem):
    pids = elem.pids()
    return canonical(elem, {p: 0 for p in pids})


def quasitri_residual(bfam, rlist, n):
    """Residuals of the two coproduct identities and the antipode identity.

    Returns a dict with keys "delta1", "delta2", "antipode"; zero elements
    certify the identities at index n.
    """
    sh = ("sh", bfam)
    rn = rlist[n]
    lhs1 = deconcat_leg(rn, 0)
    rhs1 = UElem.zero(3)
    for k in range(0, n + 1):
        x = rlist[k].place((1, 3), 3)
        y = _shift_pids(rlist[n - k], k).place((2, 3), 3)
        rhs1 = rhs1 + u_mul(x, y, (sh, sh, sh))
    res1 = _all_same_canonical(lhs1 - rhs1)

    lhs2 = deconcat_leg(rn, 1)
    rhs2 = UElem.zero(3)
    for k in range(0, n + 1):
        x = rlist[k].place((1, 3), 3)
        y = _shift_pids(rlist[n - k], k).place((1, 2), 3)
        rhs2 = rhs2 + u_mul(x, y, (sh, sh, sh))
    res2 = _all_same_canonical(lhs2 - rhs2)

    lhs3 = antipode_leg(rn, 0, bfam)
    rhs3 = antipode_inv_leg(rn, 1, bfam)
    res3 = _all_same_canonical(lhs3 - rhs3)
    return {"delta1": res1, "delta2": res2, "antipode": res3}


def antipode_inv_leg(x, leg, B):
    """Inverse antipode on one leg: S^{-1}(w) = -sum (tail) S^{-1}(head)."""
    cache = {}

    def s_word(w):
        if w in cache:
            return cache[w]
        if len(w) == 0:
            r = [(Fraction(1), ())]
        else:
            r = []
            for i in range(len(w)):
                for c1, head in s_word(w[:i]):
                    from .unitensor import _word_mul_sh
                    for c2, prod in _word_mul_sh(B, w[i:], head):
                        r.append((-c1 * c2, prod))
        cache[w] = r
        return r

    out = UElem(x.legs, {})
    for k, c in x.terms.items():
        for cc, ww in s_word(k[leg]):
            key = k[:leg] + (ww,) + k[leg + 1:]
            s = out.terms.get(key, 0) + c * cc
            if s:
                out.terms[key] = s
            else:
                out.terms.pop(key, None)
    return out


# ---------------------------------------------------------------------------
# independent oracle: degree-by-degree linear solve
# ---------------------------------------------------------------------------

def _ordered_set_partitions(items):
    items = list(items)
    if not items:
        yield []
        return
    first = items[0]
    rest = items[1:]
    for k in range(0, len(rest) + 1):
        for comb in itertools.combinations(rest, k):
            block = [first] + list(comb)
            remaining = [x for x in rest if x not in comb]
            for tail in _ordered_set_partitions(remaining):
                # insert block at every position
                for pos in range(len(tail) + 1):
                    yield tail[:pos] + [block] + tail[pos:]


def _leg_structures(pids, side):
    """All words of Lie basis letters on the given atoms."""
    out = []
    for parts in _ordered_set_partitions(pids):
        options = [()]
        for block in parts:
            atoms = sorted((p, side) for p in block)
            lo, rest = atoms[0], atoms[1:]
            monos = [(lo,) + perm for perm in itertools.permutations(rest)]
            options = [w + (m,) for w in options for m in monos]
        out.extend(options)
    return out


def universal_basis_deg(n):
    """Canonical basis of the universal 2-leg space of degree n.

    Symmetrized representatives of raw generators span the space but are
    not independent; an exact rank filter keeps a true basis.
    """
    pids = list(range(n))
    seen = {}
    for awords in _leg_structures(pids, 0):
        for bwords in _leg_structures(pids, 1):
            e = canonical(UElem(2, {(awords, bwords): Fraction(1)}),
                          {p: 0 for p in pids})
            if not e:
                continue
            # normalize the sign/scale so proportional duplicates collapse
            lead = min(e.terms)
            e = (1 / e.terms[lead]) * e
            key = tuple(sorted(e.terms.items()))
            if key not in seen:
                seen[key] = e
    return independent_subset(list(seen.values()))


def independent_subset(elems):
    """Greedy exact rank filter over the term-key coordinates."""
    keys = sorted({k for e in elems for k in e.terms}, key=str)
    index = {k: i for i, k in enumerate(keys)}
    rows = []
    out = []
    for e in elems:
        vec = [Fraction(0)] * len(keys)
        for k, c in e.terms.items():
            vec[index[k]] = c
        cand = rows + [vec]
        if linalg.rank(cand, len(keys)) == len(cand):
            rows.append(vec)
            out.append(e)
    return out


class NoSolution(ValueError):
    pass


class NonUnique(ValueError):
    pass


def rmatrix_by_solving(bfam, N):
    """Solve the coproduct identities for R_n degree by degree.

    Constraints: R_0 = 1, R_1 = the elementary pair, both coproduct
    identities, and vanishing of the (pr x pr)-part for n >= 2.  The
    solution is asserted unique; this is the independent oracle for
    rmatrix_terms.
    """
    sh = ("sh", bfam)
    rlist = [UElem.unit(2), pair_elem(0)]
    for n in range(2, N + 1):
        basis = universal_basis_deg(n)

        def residuals(cand):
            rows = {}
            full = rlist + [cand]
            lhs1 = deconcat_leg(cand, 0)
            rhs1 = UElem.zero(3)
            lhs2 = deconcat_leg(cand, 1)
            rhs2 = UElem.zero(3)
            for k in range(0, n + 1):
                x = full[k].place((1, 3), 3)
                y = _shift_pids(full[n - k], k).place((2, 3), 3)
                rhs1 = rhs1 + u_mul(x, y, (sh, sh, sh))
                y2 = _shift_pids(full[n - k], k).place((1, 2), 3)
                rhs2 = rhs2 + u_mul(x, y2, (sh, sh, sh))
            r1 = _all_same_canonical(lhs1 - rhs1)
            r2 = _all_same_canonical(lhs2 - rhs2)
            pp = _all_same_canonical(cand.pr_leg(0).pr_leg(1))
            for tag, r in (("d1", r1), ("d2", r2), ("pp", pp)):
                for key, c in r.terms.items():
                    rows[(tag, key)] = c
            return rows

        base = residuals(UElem.zero(2))
        cols = []
        rowkeys = set(base)
        for e in basis:
            r = residuals(e)
            diff = {}
            for key in set(r) | set(base):
                d = r.get(key, Fraction(0)) - base.get(key, Fraction(0))
                if d:
                    diff[key] = d
            cols.append(diff)
            rowkeys.update(diff)
        rowkeys = sorted(rowkeys)
        A = [[col.get(rk, Fraction(0)) for col in cols] for rk in rowkeys]
        b = [-base.get(rk, Fraction(0)) for rk in rowkeys]
        try:
            x, null = linalg.solve_affine(A, len(basis), b)
        except linalg.InconsistentSystem:
            raise NoSolution(n)
        if null:
            raise NonUnique(n)
        rn = UElem.zero(2)
        for c, e in zip(x, basis):
            rn = rn + c * e
        rlist.append(rn)
    return rlist


# ---------------------------------------------------------------------------
# instantiation on a concrete algebra
# ---------------------------------------------------------------------------

def kappa_ab(elem, alg, r, order=None):
    """kappa: universal 2-leg element -> ShTensor-like dict of word pairs."""
    return instantiate_tensor(elem, alg, r, order)


def uelem_to_json(elem):
    return {"legs": elem.legs,
            "terms": [{"key": [[[list(a) for a in letter] for letter in leg]
                               for leg in k],
                       "coeff": str(c)}
                      for k, c in sorted(elem.terms.items())]}


def uelem_from_json(d):
    terms = {}
    for t in d["terms"]:
        key = tuple(tuple(tuple(tuple(a) for a in letter) for letter in leg)
                    for leg in t["key"])
        terms[key] = Fraction(t["coeff"])
    return UElem(d["legs"], terms)


def pretty_rmatrix(elem, aname="a", bname="b"):
    """Paper-style rendering (a...)x(b...) of a universal 2-leg element."""
    def letter_str(letter, nm):
        if len(letter) == 1:
            return "%s%d" % (nm, letter[0][0] + 1)
        s = "%s%d" % (nm, letter[0][0] + 1)
        for (p, _s) in letter[1:]:
            s = "[%s,%s%d]" % (s, nm, p + 1)
        return s
    bits = []
    for (la, lb), c in sorted(elem.terms.items()):
        wa = "(" + " ".join(letter_str(x, aname) for x in la) + ")"
        wb = "(" + " ".join(letter_str(x, bname) for x in lb) + ")"
        bits.append("%s %s(x)%s" % (c, wa, wb))
    return " + ".join(bits) if bits else "0"
