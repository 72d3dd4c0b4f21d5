"""Deformed shuffle Hopf algebras of a Lie algebra and their tensor duals.

ShElem: word-indexed elements of the deformed shuffle algebra of g, with
truncated hbar-series coefficients.  TensElem: elements of the deformed
tensor Hopf algebra of a Lie coalgebra (undeformed concatenation product,
deformed coproduct).  ShTensor: small tensor powers of ShElem legs.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

from .scalars import HSeries, as_series, DEFAULT_ORDER
from .liealg import tensor_add


class ShContext:
    """A Lie algebra together with a B-family; caches B evaluations and
    word products (the same word pairs recur massively in tensor work)."""

    def __init__(self, alg, bfam, order=None):
        self.alg = alg
        self.bfam = bfam
        self.order = DEFAULT_ORDER if order is None else order
        self._bcache = {}
        self._mulcache = {}

    def b_eval(self, p, q, idx):
        """B_pq on basis elements (tuple idx, first p = first group)."""
        key = (p, q, idx)
        hit = self._bcache.get(key)
        if hit is None:
            args = [self.alg.basis(i) for i in idx]
            hit = self.bfam.eval(p, q, args, self.alg.carrier())
            self._bcache[key] = hit
        return hit

    def word_mul(self, wa, wb):
        """Cached product of two basis words: dict word -> HSeries."""
        hit = self._mulcache.get((wa, wb))
        if hit is None:
            hit = _word_product(self, wa, wb)
            self._mulcache[(wa, wb)] = hit
        return hit


def _norm_terms(terms, order):
    out = {}
    for w, c in terms.items():
        c = as_series(c, order)
        if c:
            out[tuple(w)] = c
    return out


class ShElem:
    """Element of the deformed shuffle algebra: dict word -> HSeries."""

    def __init__(self, ctx, terms=None):
        self.ctx = ctx
        self.terms = _norm_terms(terms or {}, ctx.order)

    @staticmethod
    def unit(ctx, c=1):
        return ShElem(ctx, {(): as_series(c, ctx.order)})

    @staticmethod
    def word(ctx, letters, c=1):
        return ShElem(ctx, {tuple(letters): as_series(c, ctx.order)})

    @staticmethod
    def letter(ctx, i, c=1):
        return ShElem(ctx, {(i,): as_series(c, ctx.order)})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, ShElem) and self.terms == other.terms

    def __add__(self, other):
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out.get(w, 0) + c
            if s:
                out[w] = s
            else:
                out.pop(w, None)
        return ShElem(self.ctx, out)

    def __neg__(self):
        return ShElem(self.ctx, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, c):
        return ShElem(self.ctx, {w: c * v for w, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, ShElem):
            return sh_mul(self, other)
        return self.__rmul__(other)

    def counit(self):
        return self.terms.get((), as_series(0, self.ctx.order))

    def pr(self):
        """Degree-1 component as a vector over the algebra basis."""
        return {w[0]: c for w, c in self.terms.items() if len(w) == 1}

    def component(self, k):
        return ShElem(self.ctx, {w: c for w, c in self.terms.items() if len(w) == k})

    def max_degree(self):
        return max((len(w) for w in self.terms), default=0)

    def reverse(self):
        """The word-reversal automorphism Psi."""
        return ShElem(self.ctx, {tuple(reversed(w)): c for w, c in self.terms.items()})

    def __repr__(self):
        bits = []
        for w in sorted(self.terms, key=lambda w: (len(w), w)):
            name = "(" + " ".join(self.ctx.alg.basis_names[i] for i in w) + ")"
            bits.append("[%s]%s" % (self.terms[w], name))
        return " + ".join(bits) if bits else "0"


def _insert_letters(ctx, letters, coeff, acc):
    """Distribute a list of basis-vector letters over words."""
    words = [((), coeff)]
    for v in letters:
        nxt = []
        for w, c in words:
            for i, ci in v.items():
                nxt.append((w + (i,), c * ci))
        words = nxt
    for w, c in words:
        s = acc.get(w, 0) + c
        if s:
            acc[w] = s
        else:
            acc.pop(w, None)
    return acc


def _word_product(ctx, wa, wb):
    """Product of two basis words (uncached core of sh_mul)."""
    out = {}
    n, m = len(wa), len(wb)
    if n == 0 or m == 0:
        out[wa + wb] = as_series(1, ctx.order)
        return out
    for k in range(1, n + m + 1):
        for pc in _compositions(n, k):
            for qc in _compositions(m, k):
                letters = []
                ox = oy = 0
                ok = True
                for pb, qb in zip(pc, qc):
                    if pb + qb == 0:
                        ok = False
                        break
                    v = ctx.b_eval(pb, qb, wa[ox:ox + pb] + wb[oy:oy + qb])
                    ox += pb
                    oy += qb
                    if not v:
                        ok = False
                        break
                    letters.append(v)
                if ok:
                    _insert_letters(ctx, letters, as_series(1, ctx.order), out)
    return out


def sh_mul(a, b):
    """Product of the deformed shuffle algebra (sum over composition pairs)."""
    ctx = a.ctx
    out = {}
    for wa, ca in a.terms.items():
        for wb, cb in b.terms.items():
            c = ca * cb
            for w, cw in ctx.word_mul(wa, wb).items():
                s = out.get(w, 0) + c * cw
                if s:
                    out[w] = s
                else:
                    out.pop(w, None)
    return ShElem(ctx, out)


def _compositions(n, k):
    if k == 0:
        return [()] if n == 0 else []
    out = []
    for first in range(n + 1):
        for rest in _compositions(n - first, k - 1):
            out.append((first,) + rest)
    return out


def sh_comul(a):
    """Deconcatenation coproduct, as a 2-leg ShTensor."""
    out = {}
    for w, c in a.terms.items():
        for i in range(len(w) + 1):
            k = (w[:i], w[i:])
            s = out.get(k, 0) + c
            if s:
                out[k] = s
    return ShTensor(a.ctx, 2, out)


def sh_antipode(a):
    """Recursive antipode."""
    ctx = a.ctx
    out = ShElem(ctx, {})
    cache = {}

    def s_word(w):
        if w in cache:
            return cache[w]
        if len(w) == 0:
            r = ShElem.unit(ctx)
        else:
            r = ShElem(ctx, {})
            for i in range(len(w)):
                r = r - sh_mul(s_word(w[:i]), ShElem.word(ctx, w[i:]))
        cache[w] = r
        return r

    for w, c in a.terms.items():
        out = out + c * s_word(w)
    return out


def sh_antipode_closed(a):
    """Closed partition formula for the antipode."""
    ctx = a.ctx
    out = ShElem(ctx, {})
    for w, c in a.terms.items():
        n = len(w)
        if n == 0:
            out = out + ShElem.unit(ctx, c)
            continue
        acc = ShElem(ctx, {})
        for k in range(1, n + 1):
            for pc in _positive_compositions(n, k):
                prod = ShElem.unit(ctx)
                off = 0
                for pb in pc:
                    prod = sh_mul(prod, ShElem.word(ctx, w[off:off + pb]))
                    off += pb
                acc = acc + Fraction((-1) ** k) * prod
        out = out + c * acc
    return out


def sh_antipode_inv(a):
    """Inverse antipode (antipode for the co-opposite coproduct)."""
    ctx = a.ctx
    cache = {}

    def s_word(w):
        if w in cache:
            return cache[w]
        if len(w) == 0:
            r = ShElem.unit(ctx)
        else:
            r = ShElem(ctx, {})
            for i in range(len(w)):
                r = r - sh_mul(ShElem.word(ctx, w[i:]), s_word(w[:i]))
        cache[w] = r
        return r

    out = ShElem(ctx, {})
    for w, c in a.terms.items():
        out = out + c * s_word(w)
    return out


def _positive_compositions(n, k):
    return [c for c in _compositions(n, k) if all(x > 0 for x in c)]


# ---------------------------------------------------------------------------
# tensor powers of the shuffle algebra
# ---------------------------------------------------------------------------

class ShTensor:
    """Element of Sh(g)^(x legs): dict (word, ..., word) -> HSeries."""

    def __init__(self, ctx, legs, terms=None):
        self.ctx = ctx
        self.legs = legs
        self.terms = {}
        for k, c in (terms or {}).items():
            c = as_series(c, ctx.order)
            if c:
                self.terms[tuple(tuple(w) for w in k)] = c

    @staticmethod
    def unit(ctx, legs, c=1):
        return ShTensor(ctx, legs, {((),) * legs: as_series(c, ctx.order)})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, ShTensor) and self.legs == other.legs \
            and self.terms == other.terms

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return ShTensor(self.ctx, self.legs, out)

    def __neg__(self):
        return ShTensor(self.ctx, self.legs, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, c):
        return ShTensor(self.ctx, self.legs, {k: c * v for k, v in self.terms.items()})

    def mul(self, other):
        """Legwise product (all legs commute past each other)."""
        out = ShTensor(self.ctx, self.legs, {})
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                # multiply leg by leg, expanding word products
                legs_out = [None] * self.legs
                ok = True
                for leg in range(self.legs):
                    u = ShElem.word(self.ctx, k1[leg])
                    v = ShElem.word(self.ctx, k2[leg])
                    legs_out[leg] = sh_mul(u, v)
                    if not legs_out[leg]:
                        ok = False
                        break
                if not ok:
                    continue
                # distribute
                combos = [((), c1 * c2)]
                for leg in range(self.legs):
                    nxt = []
                    for key, c in combos:
                        for w, cw in legs_out[leg].terms.items():
                            nxt.append((key + (w,), c * cw))
                    combos = nxt
                for key, c in combos:
                    s = out.terms.get(key, 0) + c
                    if s:
                        out.terms[key] = s
                    else:
                        out.terms.pop(key, None)
        return out

    def place(self, spots, legs):
        """Embed into more legs, with empty words elsewhere (1 in that slot)."""
        out = {}
        for k, c in self.terms.items():
            key = [()] * legs
            for spot, w in zip(spots, k):
                key[spot - 1] = w
            out[tuple(key)] = c
        return ShTensor(self.ctx, legs, out)

    def apply_leg(self, leg, fn):
        """Apply an ShElem -> ShElem map to one leg, distributing the rest."""
        out = ShTensor(self.ctx, self.legs, {})
        for k, c in self.terms.items():
            img = fn(ShElem.word(self.ctx, k[leg]))
            for w, cw in img.terms.items():
                key = k[:leg] + (w,) + k[leg + 1:]
                s = out.terms.get(key, 0) + c * cw
                if s:
                    out.terms[key] = s
                else:
                    out.terms.pop(key, None)
        return out

    def comul_leg(self, leg):
        """Deconcatenate one leg, producing legs+1 legs (split in place)."""
        out = ShTensor(self.ctx, self.legs + 1, {})
        for k, c in self.terms.items():
            w = k[leg]
            for i in range(len(w) + 1):
                key = k[:leg] + (w[:i], w[i:]) + k[leg + 1:]
                s = out.terms.get(key, 0) + c
                if s:
                    out.terms[key] = s
        return out

    def pr_legs(self):
        """Apply the degree-1 projection to every leg; tensor over basis."""
        out = {}
        for k, c in self.terms.items():
            if all(len(w) == 1 for w in k):
                idx = tuple(w[0] for w in k)
                s = out.get(idx, 0) + c
                if s:
                    out[idx] = s
                else:
                    out.pop(idx, None)
        return out

    def hcoeff(self, k):
        """Coefficient of hbar^k: plain-rational ShTensor data."""
        out = {}
        for key, c in self.terms.items():
            v = c.coeff(k)
            if v:
                out[key] = v
        return out


# ---------------------------------------------------------------------------
# Hopf axioms report
# ---------------------------------------------------------------------------

def all_words(dim, max_len):
    out = [()]
    for n in range(1, max_len + 1):
        out.extend(itertools.product(range(dim), repeat=n))
    return out


class HopfReport:
    def __init__(self):
        self.failures = []

    def ok(self):
        return not self.failures

    def add(self, kind, witness):
        self.failures.append((kind, witness))

    def __repr__(self):
        return "HopfReport(ok)" if self.ok() else "HopfReport(%d failures: %s...)" % (
            len(self.failures), self.failures[:3])


def hopf_report(alg, bfam, deg, hord):
    """Check all Hopf axioms on basis words up to tensor degree deg."""
    ctx = ShContext(alg, bfam, hord)
    rep = HopfReport()
    words = all_words(alg.dim, deg)
    nonempty = [w for w in words if w]
    # associativity
    for u in nonempty:
        for v in nonempty:
            if len(u) + len(v) > deg:
                continue
            for w in nonempty:
                if len(u) + len(v) + len(w) > deg:
                    continue
                a, b, c = (ShElem.word(ctx, x) for x in (u, v, w))
                if sh_mul(sh_mul(a, b), c) != sh_mul(a, sh_mul(b, c)):
                    rep.add("associativity", (u, v, w))
    # coassociativity and counit
    for u in words:
        a = ShElem.word(ctx, u)
        if sh_comul(a).comul_leg(0) != sh_comul(a).comul_leg(1):
            rep.add("coassociativity", u)
        left = ShElem(ctx, {})
        right = ShElem(ctx, {})
        for (w1, w2), c in sh_comul(a).terms.items():
            if not w1:
                left = left + ShElem.word(ctx, w2, c)
            if not w2:
                right = right + ShElem.word(ctx, w1, c)
        if left != a or right != a:
            rep.add("counit", u)
    # bialgebra compatibility Delta(uv) = Delta(u)Delta(v)
    for u in nonempty:
        for v in nonempty:
            if len(u) + len(v) > deg:
                continue
            a, b = ShElem.word(ctx, u), ShElem.word(ctx, v)
            lhs = ShTensor(ctx, 2, {})
            for w, c in sh_mul(a, b).terms.items():
                lhs = lhs + c * sh_comul(ShElem.word(ctx, w))
            rhs = sh_comul(a).mul(sh_comul(b))
            if lhs != rhs:
                rep.add("bialgebra", (u, v))
    # antipode axioms and closed form
    for u in words:
        a = ShElem.word(ctx, u)
        conv = ShElem(ctx, {})
        conv2 = ShElem(ctx, {})
        for (w1, w2), c in sh_comul(a).terms.items():
            conv = conv + c * sh_mul(sh_antipode(ShElem.word(ctx, w1)),
                                     ShElem.word(ctx, w2))
            conv2 = conv2 + c * sh_mul(ShElem.word(ctx, w1),
                                       sh_antipode(ShElem.word(ctx, w2)))
        target = ShElem.unit(ctx, a.counit()) if u == () else ShElem(ctx, {})
        if conv != target or conv2 != target:
            rep.add("antipode", u)
        if sh_antipode(a) != sh_antipode_closed(a):
            rep.add("antipode-closed-form", u)
    return rep


# ---------------------------------------------------------------------------
# Poisson term of the undeformed structure
# ---------------------------------------------------------------------------

def shuffle0(ctx, u, v):
    """Plain shuffle product of two words (no deformation)."""
    out = {}

    def rec(prefix, a, b, coeff):
        if not a and not b:
            s = out.get(prefix, 0) + coeff
            if s:
                out[prefix] = s
            return
        if a:
            rec(prefix + (a[0],), a[1:], b, coeff)
        if b:
            rec(prefix + (b[0],), a, b[1:], coeff)

    rec((), tuple(u), tuple(v), as_series(1, ctx.order))
    return ShElem(ctx, out)


def poisson_m1(ctx, u, v):
    """First-order Poisson term: bracket one letter of u with one of v,
    shuffling the prefixes and the suffixes separately."""
    out = ShElem(ctx, {})
    u, v = tuple(u), tuple(v)
    for i in range(len(u)):
        for j in range(len(v)):
            br = ctx.alg.bracket(ctx.alg.basis(u[i]), ctx.alg.basis(v[j]))
            if not br:
                continue
            pre = shuffle0(ctx, u[:i], v[:j])
            suf = shuffle0(ctx, u[i + 1:], v[j + 1:])
            for wp, cp in pre.terms.items():
                for ws, cs in suf.terms.items():
                    for m, cb in br.items():
                        w = wp + (m,) + ws
                        cur = out.terms.get(w, 0) + cp * cs * cb
                        if cur:
                            out.terms[w] = cur
                        else:
                            out.terms.pop(w, None)
    return out


# ---------------------------------------------------------------------------
# Lie coalgebras, delta^(P), and the deformed tensor algebra
# ---------------------------------------------------------------------------

class LieCoalgebra:
    """delta(e_i) = sum c_i^{jk} e_j x e_k, exact co-Jacobi assumed."""

    def __init__(self, dim, delta, basis_names=None):
        self.dim = dim
        self.delta_table = {i: dict(t) for i, t in delta.items()}
        self.basis_names = basis_names or ["a%d" % i for i in range(dim)]

    @staticmethod
    def from_bialgebra(bia):
        return LieCoalgebra(bia.algebra.dim, bia.cobracket, bia.algebra.basis_names)

    @staticmethod
    def dual_of_algebra(alg):
        """Coalgebra on the dual basis, dual to the bracket of alg."""
        delta = {}
        for k in range(alg.dim):
            t = {}
            for i in range(alg.dim):
                for j in range(alg.dim):
                    c = alg.bracket_basis(i, j).get(k, Fraction(0))
                    if c:
                        t[(i, j)] = c
            if t:
                delta[k] = t
        return LieCoalgebra(alg.dim, delta, [n + "*" for n in alg.basis_names])

    def dual_algebra(self):
        """Lie algebra on the dual basis, dual to this cobracket."""
        br = {}
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                out = {}
                for k in range(self.dim):
                    c = self.delta_table.get(k, {}).get((i, j), Fraction(0))
                    if c:
                        out[k] = c
                if out:
                    br[(i, j)] = out
        from .liealg import LieAlgebra
        return LieAlgebra(self.dim, [n + "^" for n in self.basis_names], br)

    def delta_vec(self, v):
        out = {}
        for i, a in v.items():
            for jk, c in self.delta_table.get(i, {}).items():
                out = tensor_add(out, {jk: a * c})
        return out

    def iterated_delta(self, v, n):
        """Left-iterated cobracket (delta x id^(n-2)) ... delta: A -> A^(xn)."""
        cur = {(i,): c for i, c in v.items()}
        for _ in range(n - 1):
            nxt = {}
            for idx, c in cur.items():
                for (j, k), cb in self.delta_table.get(idx[0], {}).items():
                    nxt = tensor_add(nxt, {(j, k) + idx[1:]: c * cb})
            cur = nxt
        return cur


def delta_P(coalg, P, a, order=None):
    """The map attached to a multilinear Lie polynomial P of degree n.

    Adjoint to substitution into P on the dual algebra:
    <delta_P(a), b_1 x...x b_n> = <a, P(b_1,...,b_n)>.
    Computed as (1/n) sum_sigma P_sigma sigma.(iterated cobracket), where
    P_sigma are the word coefficients of P and sigma permutes slots.
    """
    exp = P.expand()
    if not exp:
        return {}
    n = len(next(iter(exp.terms)))
    out = {}
    av = a if isinstance(a, dict) else {a: Fraction(1)}
    base = coalg.iterated_delta(av, n)
    for word, c in exp.terms.items():
        # word (w_1..w_n) encodes sigma(i) = w_i + 1; slot sigma(i) <- factor i
        for idx, cb in base.items():
            new = [None] * n
            for i in range(n):
                new[word[i]] = idx[i]
            out = tensor_add(out, {tuple(new): Fraction(1, n) * c * cb})
    return out


class TensElem:
    """Element of the deformed tensor Hopf algebra of a Lie coalgebra."""

    def __init__(self, ctx, terms=None):
        self.ctx = ctx              # a TensContext
        self.terms = _norm_terms(terms or {}, ctx.order)

    @staticmethod
    def unit(ctx, c=1):
        return TensElem(ctx, {(): as_series(c, ctx.order)})

    @staticmethod
    def word(ctx, letters, c=1):
        return TensElem(ctx, {tuple(letters): as_series(c, ctx.order)})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, TensElem) and self.terms == other.terms

    def __add__(self, other):
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out.get(w, 0) + c
            if s:
                out[w] = s
            else:
                out.pop(w, None)
        return TensElem(self.ctx, out)

    def __neg__(self):
        return TensElem(self.ctx, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, c):
        return TensElem(self.ctx, {w: c * v for w, v in self.terms.items()})

    def __mul__(self, other):
        """Concatenation (the algebra structure is undeformed)."""
        if not isinstance(other, TensElem):
            return self.__rmul__(other)
        out = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                k = w1 + w2
                s = out.get(k, 0) + c1 * c2
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        return TensElem(self.ctx, out)

    def counit(self):
        return self.terms.get((), as_series(0, self.ctx.order))


class TensContext:
    """Lie coalgebra + B-family, with the generator coproduct cached."""

    def __init__(self, coalg, bfam, order=None):
        self.coalg = coalg
        self.bfam = bfam
        self.order = DEFAULT_ORDER if order is None else order
        self._gen_comul = {}

    def generator_comul(self, i):
        """Delta(a) = sum_{p,q} hbar^(p+q-1) mu_pq(delta^(B_pq)(a))."""
        hit = self._gen_comul.get(i)
        if hit is not None:
            return hit
        out = {}
        maxn = self.bfam.max_degree
        for p in range(0, maxn + 1):
            for q in range(0, maxn + 1 - p):
                if p + q == 0:
                    continue
                ent = self.bfam.entry(p, q)
                if not ent:
                    continue
                t = delta_P(self.coalg, ent, i, self.order)
                if not t:
                    continue
                h = HSeries.hpow(p + q - 1, 1, self.order)
                for idx, c in t.items():
                    key = (idx[:p], idx[p:])
                    s = out.get(key, 0) + h * c
                    if s:
                        out[key] = s
                    else:
                        out.pop(key, None)
        self._gen_comul[i] = out
        return out


def t_comul(ctx, x):
    """Coproduct of the deformed tensor algebra (algebra-map extension)."""
    out = {((), ()): as_series(1, ctx.order)}
    result = {}
    for w, c in x.terms.items():
        cur = {((), ()): c}
        for i in w:
            gen = ctx.generator_comul(i)
            nxt = {}
            for (u1, u2), cc in cur.items():
                for (v1, v2), cg in gen.items():
                    key = (u1 + v1, u2 + v2)
                    s = nxt.get(key, 0) + cc * cg
                    if s:
                        nxt[key] = s
                    else:
                        nxt.pop(key, None)
            cur = nxt
        for k, cc in cur.items():
            s = result.get(k, 0) + cc
            if s:
                result[k] = s
            else:
                result.pop(k, None)
    return result


# ---------------------------------------------------------------------------
# Hopf pairing  Sh(g*) x T(g)
# ---------------------------------------------------------------------------

class PoleSeries:
    """hbar^(-pole) * series, for pairing values with a finite pole."""

    def __init__(self, pole, series):
        self.pole = pole
        self.series = series

    def as_series(self):
        if self.pole == 0:
            return self.series
        return self.series.shift(-self.pole)  # raises if not divisible

    def __repr__(self):
        return "h^-%d*(%s)" % (self.pole, self.series)


def pairing(xi, x):
    """<(xi_1...xi_m), x_1 x...x x_n> = hbar^-n delta_{nm} prod <xi_i, x_i>.

    xi: ShElem over the dual basis of g (so letter i pairs to delta_ij
    with the g-basis), x: TensElem over g.  Returns a PoleSeries.
    """
    order = xi.ctx.order
    acc = {}
    for w1, c1 in xi.terms.items():
        for w2, c2 in x.terms.items():
            if w1 == w2:
                n = len(w1)
                acc[n] = acc.get(n, as_series(0, order)) + c1 * c2
    if not acc:
        return PoleSeries(0, as_series(0, order))
    pole = max(acc)
    total = as_series(0, order)
    for n, c in acc.items():
        total = total + c.shift(pole - n)
    return PoleSeries(pole, total)


# ---------------------------------------------------------------------------
# QFSH filter
# ---------------------------------------------------------------------------

def qfsh_delta(a, n):
    """delta_n = (id - eps)^(xn) o Delta^(n): splits into n nonempty blocks."""
    ctx = a.ctx
    out = {}
    for w, c in a.terms.items():
        if n == 0:
            continue
        for pc in _positive_compositions(len(w), n):
            key = []
            off = 0
            for pb in pc:
                key.append(w[off:off + pb])
                off += pb
            k = tuple(key)
            s = out.get(k, 0) + c
            if s:
                out[k] = s
    return ShTensor(ctx, n, out)


def ordered_surjection_count(n, k):
    """Order-preserving surjections {1..k} -> {1..n}: C(k-1, n-1)."""
    if n < 1 or k < n:
        return 0
    return math.comb(k - 1, n - 1)


def qfsh_member(a):
    """x in (Sh^w)' iff each degree-k part is divisible by hbar^k."""
    for w, c in a.terms.items():
        k = len(w)
        if k == 0:
            continue
        val = c.valuation()
        if val is not None and val < min(k, a.ctx.order + 1):
            return False
    return True


# ---------------------------------------------------------------------------
# symmetric tensors / enveloping algebra embedding
# ---------------------------------------------------------------------------

def sh_to_json(a):
    return {"terms": [{"word": list(w), "coeff": [str(x) for x in c.coeffs]}
                      for w, c in sorted(a.terms.items())]}


def sh_from_json(ctx, d):
    return ShElem(ctx, {tuple(t["word"]): HSeries([Fraction(x) for x in t["coeff"]],
                                                  ctx.order)
                        for t in d["terms"]})


def sym_word(ctx, letters):
    """Symmetrized tensor of the given letters."""
    out = {}
    for p in itertools.permutations(letters):
        s = out.get(tuple(p), 0) + as_series(1, ctx.order)
        if s:
            out[tuple(p)] = s
    return ShElem(ctx, out)


def is_symmetric(a):
    for w, c in a.terms.items():
        for p in itertools.permutations(range(len(w))):
            wp = tuple(w[i] for i in p)
            if a.terms.get(wp, as_series(0, a.ctx.order)) != c:
                return False
    return True
