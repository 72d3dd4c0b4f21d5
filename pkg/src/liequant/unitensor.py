"""Universal multilinear tensors over formal r-matrix pairs.

An atom is (pid, side) with side 0 for the first tensor factor of the
formal pair ("a") and 1 for the second ("b").  A letter is a flat tuple
of distinct atoms standing for the left-normed Lie monomial on them
(minimal atom first); single-atom letters are the atoms themselves.
A term assigns each leg a word (tuple) of letters; elements are dicts
{term key: Fraction}.

The same structure serves the shuffle legs of universal R-matrices
(letters = Lie monomials), and the F-space word calculus (letters =
single atoms) used by the normal-ordering rewriting.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .freealg import LiePoly, substitute, FreeLieCarrier, expand_leftnormed
from .bfamily import compositions


def a_atom(pid):
    return (pid, 0)


def b_atom(pid):
    return (pid, 1)


class UElem:
    """Formal sum of multi-leg word tensors over paired atoms."""

    __slots__ = ("legs", "terms")

    def __init__(self, legs, terms=None):
        self.legs = legs
        self.terms = {}
        if terms:
            for k, c in terms.items():
                if c:
                    self.terms[k] = c

    @staticmethod
    def zero(legs):
        return UElem(legs, {})

    @staticmethod
    def unit(legs, c=Fraction(1)):
        return UElem(legs, {((),) * legs: c})

    @staticmethod
    def single(legs, key, c=Fraction(1)):
        return UElem(legs, {key: c})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, UElem) and self.legs == other.legs \
            and self.terms == other.terms

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return UElem(self.legs, out)

    def __neg__(self):
        return UElem(self.legs, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, c):
        if not c:
            return UElem(self.legs, {})
        return UElem(self.legs, {k: c * v for k, v in self.terms.items()})

    def pids(self):
        out = set()
        for k in self.terms:
            for leg in k:
                for letter in leg:
                    for (pid, _side) in letter:
                        out.add(pid)
        return out

    def relabel(self, mapping):
        """Rename pids; letters are renormalized to the canonical basis."""
        out = {}
        for k, c in self.terms.items():
            nk = _relabel_term(k, mapping)
            s = out.get(nk, 0) + c
            if s:
                out[nk] = s
            else:
                out.pop(nk, None)
        return normalize_letters(UElem(self.legs, out))

    def place(self, spots, legs):
        """Spread the legs of self into the given 1-based spots."""
        out = {}
        for k, c in self.terms.items():
            key = [()] * legs
            for spot, leg in zip(spots, k):
                key[spot - 1] = leg
            out[tuple(key)] = c
        return UElem(legs, out)

    def reverse_leg(self, leg):
        out = {}
        for k, c in self.terms.items():
            nk = k[:leg] + (tuple(reversed(k[leg])),) + k[leg + 1:]
            out[nk] = out.get(nk, 0) + c
        return UElem(self.legs, out)

    def pr_leg(self, leg):
        """Keep only terms whose given leg has exactly one letter."""
        return UElem(self.legs, {k: c for k, c in self.terms.items()
                                 if len(k[leg]) == 1})

    def grade(self):
        """Total number of pairs occurring (assumes homogeneous use)."""
        return len(self.pids())


def letter_poly(letter):
    """The LiePoly of a letter."""
    return LiePoly({tuple(letter): Fraction(1)})


def normalize_letters(elem):
    """Renormalize every letter to the canonical left-normed basis.

    Needed after relabelings that can disturb the minimal-first
    convention.  Multi-distributes letters that decompose into several
    basis monomials.
    """
    out = UElem(elem.legs, {})
    for k, c in elem.terms.items():
        for key, cc in _normalize_term_letters(k):
            s = out.terms.get(key, 0) + c * cc
            if s:
                out.terms[key] = s
            else:
                out.terms.pop(key, None)
    return out


def from_assoc_letter(letter):
    """Canonical LiePoly of a left-normed monomial given in any order."""
    return LiePoly.leftnormed(tuple(letter))


# ---------------------------------------------------------------------------
# products
# ---------------------------------------------------------------------------

def _word_mul_conc(u, v):
    return [(Fraction(1), u + v)]


_BEVAL_CACHE = {}


def b_eval_letters(B, p, q, letters):
    """B_pq on canonical Lie-letter arguments; memoized per family."""
    key = (id(B), p, q, letters)
    hit = _BEVAL_CACHE.get(key)
    if hit is None:
        args = [letter_poly(x) for x in letters]
        hit = B.eval(p, q, args, FreeLieCarrier)
        _BEVAL_CACHE[key] = hit
    return hit


_WORDMUL_CACHE = {}


def _word_mul_sh(B, u, v):
    """Deformed product of two words of Lie letters: list (coeff, word)."""
    n, m = len(u), len(v)
    if n == 0:
        return [(Fraction(1), v)]
    if m == 0:
        return [(Fraction(1), u)]
    ck = (id(B), u, v)
    hit = _WORDMUL_CACHE.get(ck)
    if hit is not None:
        return hit
    out = []
    for k in range(1, n + m + 1):
        for pc in compositions(n, k):
            for qc in compositions(m, k):
                if any(pb + qb == 0 for pb, qb in zip(pc, qc)):
                    continue
                # each block: substitute letters into B_{pb,qb}
                pieces = [(Fraction(1), ())]
                ox = oy = 0
                dead = False
                for pb, qb in zip(pc, qc):
                    val = b_eval_letters(B, pb, qb,
                                         u[ox:ox + pb] + v[oy:oy + qb])
                    ox += pb
                    oy += qb
                    if not val:
                        dead = True
                        break
                    pieces = [(c * cv, w + (mono,))
                              for c, w in pieces
                              for mono, cv in val.terms.items()]
                if not dead:
                    out.extend(pieces)
    _WORDMUL_CACHE[ck] = out
    return out


def u_mul(x, y, modes):
    """Legwise product; modes[i] is "conc" or ("sh", B)."""
    out = UElem(x.legs, {})
    for k1, c1 in x.terms.items():
        for k2, c2 in y.terms.items():
            partial = [((), c1 * c2)]
            for leg in range(x.legs):
                mode = modes[leg]
                if mode == "conc":
                    prods = _word_mul_conc(k1[leg], k2[leg])
                else:
                    prods = _word_mul_sh(mode[1], k1[leg], k2[leg])
                partial = [(key + (w,), c * cw)
                           for key, c in partial
                           for cw, w in prods]
            for key, c in partial:
                s = out.terms.get(key, 0) + c
                if s:
                    out.terms[key] = s
                else:
                    out.terms.pop(key, None)
    return out


def u_commutator(x, y, modes):
    return u_mul(x, y, modes) - u_mul(y, x, modes)


def pr_word_product(B, u, v):
    """Degree-one part of the deformed product of two words: B_{|u|,|v|}."""
    return b_eval_letters(B, len(u), len(v), tuple(u) + tuple(v))


def deconcat_leg(x, leg):
    """Split one leg, producing legs+1 legs."""
    out = UElem(x.legs + 1, {})
    for k, c in x.terms.items():
        w = k[leg]
        for i in range(len(w) + 1):
            key = k[:leg] + (w[:i], w[i:]) + k[leg + 1:]
            s = out.terms.get(key, 0) + c
            if s:
                out.terms[key] = s
    return out


def antipode_leg(x, leg, B):
    """Antipode on one leg (closed partition formula, deformed products)."""
    out = UElem(x.legs, {})
    for k, c in x.terms.items():
        w = k[leg]
        n = len(w)
        if n == 0:
            out = out + UElem.single(x.legs, k, c)
            continue
        total = []
        for kk in range(1, n + 1):
            for pc in compositions(n, kk):
                if any(p == 0 for p in pc):
                    continue
                words = [(Fraction((-1) ** kk), ())]
                off = 0
                for pb in pc:
                    block = w[off:off + pb]
                    off += pb
                    words = [(cc * cw, ww2)
                             for cc, ww in words
                             for cw, ww2 in _word_mul_sh(B, ww, block)]
                total.extend(words)
        for cc, ww in total:
            key = k[:leg] + (ww,) + k[leg + 1:]
            s = out.terms.get(key, 0) + c * cc
            if s:
                out.terms[key] = s
            else:
                out.terms.pop(key, None)
    return out


# ---------------------------------------------------------------------------
# canonical forms of coinvariant classes
# ---------------------------------------------------------------------------

def canonical(elem, groups=None):
    """Symmetrized representative of a coinvariant class.

    groups: dict pid -> group label; pids in the same group are
    interchangeable (simultaneous relabeling of both atoms).  Defaults to
    grouping by the atom-slot type of each pid.  Relabeling acts linearly
    (it mixes the Lie-letter basis), so the projection onto coinvariants
    is the averaging idempotent over the group, applied after a canonical
    base renumbering of the pids.  Zero classes map to the empty element;
    the output is idempotent under re-canonicalization.
    """
    elem = normalize_letters(elem)
    out = UElem(elem.legs, {})
    for k, c in elem.terms.items():
        if groups is None:
            g = _type_groups(k)
        else:
            g = groups
        pids = sorted({p for leg in k for letter in leg for (p, _s) in letter})
        # canonical base relabel: pids -> 0..N-1 ordered by (group, pid)
        base = {p: i for i, p in enumerate(sorted(pids, key=lambda p: (str(g.get(p)), p)))}
        base_groups = {}
        for p in pids:
            base_groups.setdefault(str(g.get(p)), []).append(base[p])
        term0 = _relabel_term(k, base)
        perms = list(_group_perms(base_groups))
        w = Fraction(1, len(perms))
        for perm_map in perms:
            for key, cc in _normalize_term_letters(_relabel_term(term0, perm_map)):
                s = out.terms.get(key, 0) + c * cc * w
                if s:
                    out.terms[key] = s
                else:
                    out.terms.pop(key, None)
    return out


def _type_groups(k):
    g = {}
    for slot, leg in enumerate(k):
        for letter in leg:
            for (p, s) in letter:
                cur = g.get(p, [None, None])
                cur[s] = slot
                g[p] = cur
    return {p: tuple(v) for p, v in g.items()}


def _relabel_term(k, mapping):
    return tuple(tuple(tuple((mapping.get(p, p), s) for (p, s) in letter)
                       for letter in leg)
                 for leg in k)


_NORM_CACHE = {}


def _normalize_term_letters(k):
    """Expand letters into the canonical basis; sorted list of (term, coeff)."""
    hit = _NORM_CACHE.get(k)
    if hit is not None:
        return hit
    expanded = [((), Fraction(1))]
    for leg in k:
        options = [((), Fraction(1))]
        for letter in leg:
            if len(letter) <= 1 or letter[0] == min(letter):
                options = [(w + (tuple(letter),), c) for w, c in options]
            else:
                p = from_assoc_letter(letter)
                options = [(w + (mono,), c * cm)
                           for w, c in options
                           for mono, cm in p.terms.items()]
        expanded = [(key + (tuple(w),), c * cw)
                    for key, c in expanded
                    for w, cw in options]
    expanded.sort()
    _NORM_CACHE[k] = expanded
    return expanded


def _group_perms(groups):
    """All simultaneous relabelings permuting each group's pids."""
    labels = sorted(groups)
    pools = []
    for lab in labels:
        members = sorted(groups[lab])
        pools.append([dict(zip(members, p)) for p in itertools.permutations(members)])
    for combo in itertools.product(*pools):
        m = {}
        for d in combo:
            m.update(d)
        yield m


# ---------------------------------------------------------------------------
# instantiation
# ---------------------------------------------------------------------------

def instantiate_tensor(elem, alg, r, order=None):
    """kappa: substitute concrete pairs for the formal pairs.

    r: dict {(i, j): coeff} in alg x alg.  Every leg must consist of
    single Lie letters or words of letters; the result maps each term to
    a tensor with one algebra element per letter, flattened legwise into
    a tuple-of-words tensor {(word, word, ...): coeff} over basis indices.
    """
    from .scalars import as_series
    rterms = list(r.items())
    out = {}
    carrier = alg.carrier()
    for k, c in elem.terms.items():
        pids = sorted({p for leg in k for letter in leg for (p, _s) in letter})
        for choice in itertools.product(range(len(rterms)), repeat=len(pids)):
            coeff = c
            amap = {}
            bmap = {}
            for pid, ci in zip(pids, choice):
                (i, j), rc = rterms[ci]
                amap[pid] = i
                bmap[pid] = j
                coeff = coeff * rc
            if not coeff:
                continue
            # evaluate letters
            legs_out = [[] for _ in range(elem.legs)]
            for leg_i, leg in enumerate(k):
                for letter in leg:
                    args = []
                    for (p, s) in letter:
                        args.append(alg.basis(amap[p] if s == 0 else bmap[p]))
                    if len(letter) == 1:
                        val = args[0]
                    else:
                        val = _eval_leftnormed(args, carrier)
                    legs_out[leg_i].append(val)
            # distribute letters over basis indices
            combos = [((), coeff)]
            for leg_vals in legs_out:
                words = [((), Fraction(1))]
                for v in leg_vals:
                    words = [(w + (i,), cw * cv) for w, cw in words
                             for i, cv in v.items()]
                combos = [(key + (w,), cc * cw) for key, cc in combos
                          for w, cw in words]
            for key, cc in combos:
                s = out.get(key, 0) + cc
                if (isinstance(s, Fraction) and s) or (not isinstance(s, Fraction) and s):
                    out[key] = s
                else:
                    out.pop(key, None)
    return out


def _eval_leftnormed(args, carrier):
    val = args[0]
    for a in args[1:]:
        val = carrier.bracket(val, a)
    return val


def collapse_single_letters(tensor_terms, legs):
    """Tensor over words of length 1 per leg -> plain index tensor."""
    out = {}
    for key, c in tensor_terms.items():
        assert all(len(w) == 1 for w in key)
        idx = tuple(w[0] for w in key)
        s = out.get(idx, 0) + c
        if s:
            out[idx] = s
        else:
            out.pop(idx, None)
    return out
