"""Free associative and free Lie algebras over exact scalars.

Words are plain tuples of generator labels.  Labels are usually the
integers 0..n-1, but any ordered hashable labels work (the universal
machinery uses (pair, side) tuples as labels).

LiePoly storage convention (per homogeneous multidegree component):

* multilinear components (all letters distinct) are stored on the
  left-normed basis {[[x_s(1),x_s(2)],...,x_s(n)] : s(1) = min}, keyed by
  the letter sequence (s(1),...,s(n));
* components with repeated letters are stored on the Lyndon basis, keyed
  by the Lyndon word, which stands for its standard bracketing.

The multidegree of a key decides its interpretation, so the two kinds
coexist in one terms dict without ambiguity.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

from .scalars import HSeries, scalar_is_zero


def _multidegree(word):
    counts = {}
    for a in word:
        counts[a] = counts.get(a, 0) + 1
    return tuple(sorted(counts.items()))


def _is_multilinear(word):
    return len(set(word)) == len(word)


def label_str(a):
    if isinstance(a, int):
        return "x%d" % (a + 1)
    return str(a)


# ---------------------------------------------------------------------------
# associative side
# ---------------------------------------------------------------------------

class AssocPoly:
    """Sparse element of a free associative algebra: dict word -> coeff."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for w, c in terms.items():
                if not scalar_is_zero(c):
                    self.terms[tuple(w)] = c

    @staticmethod
    def zero():
        return AssocPoly()

    @staticmethod
    def unit(c=Fraction(1)):
        return AssocPoly({(): c})

    @staticmethod
    def gen(label):
        return AssocPoly({(label,): Fraction(1)})

    @staticmethod
    def word(letters, c=Fraction(1)):
        return AssocPoly({tuple(letters): c})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, AssocPoly):
            return NotImplemented
        return _dict_eq(self.terms, other.terms)

    def __add__(self, other):
        out = dict(self.terms)
        for w, c in other.terms.items():
            _acc(out, w, c)
        return AssocPoly(out)

    def __neg__(self):
        return AssocPoly({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, c):
        if scalar_is_zero(c):
            return AssocPoly()
        return AssocPoly({w: c * v for w, v in self.terms.items()})

    def __mul__(self, other):
        """Concatenation product."""
        if isinstance(other, (int, Fraction, HSeries)):
            return self.__rmul__(other)
        out = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                _acc(out, w1 + w2, c1 * c2)
        return AssocPoly(out)

    def truncate_degree(self, n):
        return AssocPoly({w: c for w, c in self.terms.items() if len(w) <= n})

    def component(self, degree):
        return AssocPoly({w: c for w, c in self.terms.items() if len(w) == degree})

    def multidegree_component(self, mdeg):
        return AssocPoly({w: c for w, c in self.terms.items() if _multidegree(w) == mdeg})

    def coeff(self, word):
        return self.terms.get(tuple(word), Fraction(0))

    def max_degree(self):
        return max((len(w) for w in self.terms), default=0)

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for w in sorted(self.terms, key=lambda w: (len(w), tuple(map(str, w)))):
            bits.append("%s*%s" % (self.terms[w], "".join(label_str(a) for a in w) or "1"))
        return " + ".join(bits)


def _acc(d, k, c):
    v = d.get(k)
    if v is None:
        if not scalar_is_zero(c):
            d[k] = c
    else:
        v = v + c
        if scalar_is_zero(v):
            del d[k]
        else:
            d[k] = v


def _dict_eq(a, b):
    if set(a) != set(b):
        return False
    return all(a[k] == b[k] for k in a)


def assoc_commutator(a, b):
    return a * b - b * a


def expand_leftnormed(letters):
    """AssocPoly expansion of the left-normed bracket [[x1,x2],...,xk]."""
    out = AssocPoly.word(letters[:1])
    for a in letters[1:]:
        out = assoc_commutator(out, AssocPoly.gen(a))
    return out


# ---------------------------------------------------------------------------
# Lyndon words
# ---------------------------------------------------------------------------

def is_lyndon(w):
    """True for nonempty words strictly smaller than all proper suffixes."""
    n = len(w)
    if n == 0:
        return False
    return all(w < w[i:] for i in range(1, n))


def lyndon_standard_bracketing(w):
    """Nested-tuple standard bracketing of a Lyndon word.

    Returns the label itself for single letters, else a pair (left, right)
    with right the longest proper Lyndon suffix.
    """
    if len(w) == 1:
        return w[0]
    for i in range(1, len(w)):
        if is_lyndon(w[i:]):
            return (lyndon_standard_bracketing(w[:i]), lyndon_standard_bracketing(w[i:]))
    raise ValueError("not a Lyndon word: %r" % (w,))


def _expand_tree(t):
    if not isinstance(t, tuple):
        return AssocPoly.gen(t)
    return assoc_commutator(_expand_tree(t[0]), _expand_tree(t[1]))


def expand_lyndon(w):
    return _expand_tree(lyndon_standard_bracketing(w))


def lyndon_words(mdeg):
    """All Lyndon words of a given multidegree ((label, count), ...)."""
    letters = []
    for a, k in mdeg:
        letters.extend([a] * k)
    seen = set()
    out = []
    for p in set(itertools.permutations(letters)):
        if p not in seen and is_lyndon(p):
            seen.add(p)
            out.append(p)
    return sorted(out)


# ---------------------------------------------------------------------------
# Lie side
# ---------------------------------------------------------------------------

class NotLieElement(ValueError):
    pass


class LiePoly:
    """Canonical element of a free Lie algebra; see module docstring."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for w, c in terms.items():
                if not scalar_is_zero(c):
                    self.terms[tuple(w)] = c

    @staticmethod
    def zero():
        return LiePoly()

    @staticmethod
    def gen(label):
        return LiePoly({(label,): Fraction(1)})

    @staticmethod
    def leftnormed(letters, c=Fraction(1)):
        """c*[[x_a1,x_a2],...,x_ak]; letters must be canonical (see expand)."""
        return assoc_to_lie(c * expand_leftnormed(letters))

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, LiePoly):
            return NotImplemented
        return _dict_eq(self.terms, other.terms)

    def __add__(self, other):
        out = dict(self.terms)
        for w, c in other.terms.items():
            _acc(out, w, c)
        return LiePoly(out)

    def __neg__(self):
        return LiePoly({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, c):
        if scalar_is_zero(c):
            return LiePoly()
        return LiePoly({w: c * v for w, v in self.terms.items()})

    def labels(self):
        out = set()
        for w in self.terms:
            out.update(w)
        return out

    def is_multilinear(self):
        return all(_is_multilinear(w) for w in self.terms)

    def relabel(self, mapping):
        """Apply a label substitution (must stay injective per monomial)."""
        return assoc_to_lie(AssocPoly(
            {tuple(mapping.get(a, a) for a in w): c for w, c in self.expand().terms.items()}))

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for w in sorted(self.terms, key=lambda w: (len(w), tuple(map(str, w)))):
            if _is_multilinear(w):
                s = label_str(w[0])
                for a in w[1:]:
                    s = "[%s,%s]" % (s, label_str(a))
            else:
                s = _tree_str(lyndon_standard_bracketing(w))
            bits.append("%s*%s" % (self.terms[w], s))
        return " + ".join(bits)

    def expand(self):
        """Canonical embedding into the free associative algebra."""
        out = AssocPoly()
        for w, c in self.terms.items():
            if _is_multilinear(w):
                out = out + c * expand_leftnormed(w)
            else:
                out = out + c * expand_lyndon(w)
        return out


def _tree_str(t):
    if not isinstance(t, tuple):
        return label_str(t)
    return "[%s,%s]" % (_tree_str(t[0]), _tree_str(t[1]))


def assoc_to_lie(p, check=True):
    """Rewrite a Lie element of the free associative algebra canonically.

    Multilinear components: read coefficients of the words starting with
    the minimal label (those words biject with the left-normed basis).
    Other components: triangular elimination against the Lyndon basis.
    Raises NotLieElement when the input fails to be a Lie polynomial and
    check is set.
    """
    terms = {}
    remaining_mdegs = {}
    for w, c in p.terms.items():
        remaining_mdegs.setdefault(_multidegree(w), AssocPoly()).terms[w] = c
    for mdeg, comp in remaining_mdegs.items():
        if sum(k for _, k in mdeg) == 0:
            if comp:
                raise NotLieElement("constant term present")
            continue
        if all(k == 1 for _, k in mdeg):
            lo = min(a for a, _ in mdeg)
            for w, c in comp.terms.items():
                if w[0] == lo:
                    terms[w] = c
            if check:
                agg = AssocPoly()
                for w, c in list(terms.items()):
                    if _multidegree(w) == mdeg:
                        agg = agg + c * expand_leftnormed(w)
                if not _dict_eq(agg.terms, comp.terms):
                    raise NotLieElement("not a Lie element (multilinear component)")
        else:
            rem = AssocPoly(dict(comp.terms))
            while rem:
                w = min(rem.terms)
                if not is_lyndon(w):
                    raise NotLieElement("not a Lie element (Lyndon conversion)")
                c = rem.terms[w]
                terms[w] = c
                rem = rem - c * expand_lyndon(w)
    return LiePoly(terms)


def lie_bracket(a, b):
    """Bracket of two LiePoly, canonical output."""
    return assoc_to_lie(assoc_commutator(a.expand(), b.expand()), check=False)


def expand(p):
    """LiePoly -> AssocPoly (alias of the method, for module-level use)."""
    return p.expand()


def dynkin(p):
    """Left-normed bracketing map on a multilinear homogeneous AssocPoly.

    Sends sum c_w * w to sum c_w * [[w_1,w_2],...,w_n].  On Lie elements
    of degree n this equals n times the identity.
    """
    out = AssocPoly()
    degree = None
    for w, c in p.terms.items():
        if not _is_multilinear(w):
            raise ValueError("dynkin needs a multilinear polynomial")
        if degree is None:
            degree = len(w)
        elif len(w) != degree:
            raise ValueError("dynkin needs a homogeneous polynomial")
        out = out + c * expand_leftnormed(w)
    return assoc_to_lie(out, check=False)


def is_lie(p):
    """Dynkin criterion: p multilinear of degree n is Lie iff dynkin(p) = n*p."""
    if not p.terms:
        return True
    n = len(next(iter(p.terms)))
    return dynkin(p).expand() == Fraction(n) * p


# ---------------------------------------------------------------------------
# substitution into bracket carriers
# ---------------------------------------------------------------------------

class FreeLieCarrier:
    """Carrier whose elements are LiePoly."""

    @staticmethod
    def zero():
        return LiePoly()

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def smul(c, a):
        return c * a

    @staticmethod
    def bracket(a, b):
        return lie_bracket(a, b)


def substitute(p, args, carrier=FreeLieCarrier):
    """Image of a LiePoly under generator -> args[generator index].

    The generators of p must be integers 0..n-1 with n = len(args); the
    carrier provides zero/add/smul/bracket.
    """
    out = carrier.zero()
    for w, c in p.terms.items():
        for a in w:
            if not (isinstance(a, int) and 0 <= a < len(args)):
                raise ValueError("substitute: arity mismatch for generator %r" % (a,))
        if _is_multilinear(w):
            val = args[w[0]]
            for a in w[1:]:
                val = carrier.bracket(val, args[a])
        else:
            val = _subst_tree(lyndon_standard_bracketing(w), args, carrier)
        out = carrier.add(out, carrier.smul(c, val))
    return out


def _subst_tree(t, args, carrier):
    if not isinstance(t, tuple):
        return args[t]
    return carrier.bracket(_subst_tree(t[0], args, carrier),
                           _subst_tree(t[1], args, carrier))


# ---------------------------------------------------------------------------
# Campbell-Baker-Hausdorff series
# ---------------------------------------------------------------------------

def _trunc_mul(a, b, n):
    out = {}
    for w1, c1 in a.terms.items():
        for w2, c2 in b.terms.items():
            if len(w1) + len(w2) <= n:
                _acc(out, w1 + w2, c1 * c2)
    return AssocPoly(out)


def cbh(N):
    """CBH table {(p, q): LiePoly} with p+q <= N from log(exp(x) exp(y)).

    Generators are 0 (for x) and 1 (for y); the (p, q) entry is the
    bidegree-(p, q) part, recovered in Lie form by the Dynkin projection
    divided by p+q.
    """
    if N < 1:
        raise ValueError("N >= 1 required")
    ex = AssocPoly.unit()
    for k in range(1, N + 1):
        ex = ex + Fraction(1, math.factorial(k)) * AssocPoly.word((0,) * k)
    ey = AssocPoly.unit()
    for k in range(1, N + 1):
        ey = ey + Fraction(1, math.factorial(k)) * AssocPoly.word((1,) * k)
    prod = _trunc_mul(ex, ey, N)
    u = prod - AssocPoly.unit()
    log = AssocPoly()
    upow = AssocPoly.unit()
    for k in range(1, N + 1):
        upow = _trunc_mul(upow, u, N)
        log = log + Fraction((-1) ** (k + 1), k) * upow
    table = {}
    for p in range(0, N + 1):
        for q in range(0, N + 1 - p):
            if p + q == 0:
                continue
            comp = AssocPoly({w: c for w, c in log.terms.items()
                              if w.count(0) == p and w.count(1) == q})
            if not comp:
                table[(p, q)] = LiePoly()
                continue
            # log of a group-like is primitive, hence Lie: Dynkin recovers it
            br = AssocPoly()
            for w, c in comp.terms.items():
                br = br + c * expand_leftnormed(w)
            table[(p, q)] = assoc_to_lie(Fraction(1, p + q) * br, check=False)
    return table


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def _label_to_json(a):
    if isinstance(a, int):
        return a
    return list(a) if isinstance(a, tuple) else a


def assoc_to_json(p):
    return {"terms": [{"monomial": {"word": [_label_to_json(a) for a in w]},
                       "coeff": str(c)}
                      for w, c in sorted(p.terms.items(),
                                         key=lambda kv: (len(kv[0]), tuple(map(str, kv[0]))))]}


def assoc_from_json(d):
    return AssocPoly({tuple(m["monomial"]["word"]): Fraction(m["coeff"])
                      for m in d["terms"]})


def lie_to_json(p):
    out = []
    for w, c in sorted(p.terms.items(), key=lambda kv: (len(kv[0]), tuple(map(str, kv[0])))):
        kind = "leftnormed" if _is_multilinear(w) else "lyndon"
        out.append({"monomial": {"kind": kind, "letters": [_label_to_json(a) for a in w]},
                    "coeff": str(c)})
    return {"terms": out}


def lie_from_json(d):
    p = LiePoly()
    for m in d["terms"]:
        letters = tuple(m["monomial"]["letters"])
        c = Fraction(m["coeff"])
        if m["monomial"].get("kind", "leftnormed") == "leftnormed":
            p = p + LiePoly.leftnormed(letters, c)
        else:
            p = p + assoc_to_lie(c * expand_lyndon(letters))
    return p


def lie_text(p):
    """Nested-bracket text form, e.g. '1/8*[[x1,x2],x3]'."""
    return repr(p)
