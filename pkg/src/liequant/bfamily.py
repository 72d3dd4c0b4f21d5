"""Families (B_pq) of multilinear Lie polynomials with associativity control.

Index convention: the table key (p, q) means p first-group arguments and q
second-group arguments, matching the product formula and the associativity
equations.  (The degree-3 display in the source normalization uses the
transposed labels; `PAPER3_B21`/`PAPER3_B12` below carry the values under
this convention.)

Boundary entries B_10 = B_01 = id and B_p0 = B_0p = 0 (p != 1) are implicit;
the table stores only p, q >= 1.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from . import linalg
from .freealg import (FreeLieCarrier, LiePoly, lie_bracket, substitute, cbh,
                      lie_to_json, lie_from_json)


class Obstructed(ValueError):
    """Associativity system has no solution at some degree."""


def compositions(n, k):
    """All k-tuples of nonnegative integers summing to n."""
    if k == 0:
        return [()] if n == 0 else []
    out = []
    for first in range(n + 1):
        for rest in compositions(n - first, k - 1):
            out.append((first,) + rest)
    return out


def positive_compositions(n, k):
    return [c for c in compositions(n, k) if all(x > 0 for x in c)]


def leftnormed_basis(n):
    """Left-normed basis monomials of multilinear FL_n on labels 0..n-1."""
    return [(0,) + rest for rest in itertools.permutations(range(1, n))]


class BFamily:
    def __init__(self, lam, max_degree, table):
        self.lam = Fraction(lam) if not hasattr(lam, "coeffs") else lam
        self.max_degree = max_degree
        self.table = dict(table)

    def entry(self, p, q):
        """B_pq as a LiePoly in p+q generators (0..p-1 | p..p+q-1)."""
        if (p, q) in ((1, 0), (0, 1)):
            return LiePoly.gen(0)
        if p == 0 or q == 0:
            return LiePoly()
        return self.table.get((p, q), LiePoly())

    def eval(self, p, q, args, carrier=FreeLieCarrier):
        """B_pq evaluated on carrier elements (first p = first group)."""
        if (p, q) == (1, 0) or (p, q) == (0, 1):
            return args[0]
        if p == 0 or q == 0:
            return carrier.zero()
        e = self.table.get((p, q))
        if e is None or not e:
            return carrier.zero()
        return substitute(e, list(args), carrier)

    def dual(self):
        """The involution: reverse both argument groups in every entry."""
        table = {}
        for (p, q), e in self.table.items():
            mapping = {i: p - 1 - i for i in range(p)}
            mapping.update({p + j: p + q - 1 - j for j in range(q)})
            table[(p, q)] = e.relabel(mapping)
        return BFamily(self.lam, self.max_degree, table)


def involution(B):
    return B.dual()


def scale(r, B):
    if r == 0:
        raise ValueError("scaling by zero is not allowed")
    table = {}
    for (p, q), e in B.table.items():
        table[(p, q)] = (r ** (p + q - 1)) * e
    return BFamily(r * B.lam, B.max_degree, table)


# ---------------------------------------------------------------------------
# associativity residuals
# ---------------------------------------------------------------------------

def assoc_residual(B, p, q, r):
    """LHS minus RHS of the associativity equation at (p, q, r).

    Generators: x = 0..p-1, y = p..p+q-1, z = p+q..p+q+r-1.  Zero output
    certifies the equation.
    """
    if not (p > 0 and q > 0 and r > 0):
        raise ValueError("p, q, r must be positive")
    if p + q + r > B.max_degree:
        raise ValueError("degree out of range")
    xs = [LiePoly.gen(i) for i in range(p)]
    ys = [LiePoly.gen(p + i) for i in range(q)]
    zs = [LiePoly.gen(p + q + i) for i in range(r)]
    lhs = LiePoly()
    for alpha in range(1, p + q + 1):
        for pc in compositions(p, alpha):
            for qc in compositions(q, alpha):
                if any(pb + qb == 0 for pb, qb in zip(pc, qc)):
                    continue
                blocks = []
                ox = oy = 0
                for pb, qb in zip(pc, qc):
                    blocks.append(B.eval(pb, qb, xs[ox:ox + pb] + ys[oy:oy + qb]))
                    ox += pb
                    oy += qb
                if any(not b for b in blocks):
                    continue
                lhs = lhs + B.eval(alpha, r, blocks + zs)
    rhs = LiePoly()
    for alpha in range(1, q + r + 1):
        for qc in compositions(q, alpha):
            for rc in compositions(r, alpha):
                if any(qb + rb == 0 for qb, rb in zip(qc, rc)):
                    continue
                blocks = []
                oy = oz = 0
                for qb, rb in zip(qc, rc):
                    blocks.append(B.eval(qb, rb, ys[oy:oy + qb] + zs[oz:oz + rb]))
                    oy += qb
                    oz += rb
                if any(not b for b in blocks):
                    continue
                rhs = rhs + B.eval(p, alpha, xs + blocks)
    return lhs - rhs


def all_residuals_zero(B):
    for n in range(3, B.max_degree + 1):
        for p in range(1, n - 1):
            for q in range(1, n - p):
                r = n - p - q
                if assoc_residual(B, p, q, r):
                    return False
    return True


# ---------------------------------------------------------------------------
# solving
# ---------------------------------------------------------------------------

# degree-3 entries of the normalized family (first-group size first):
# B_21(x,x'|y) = ([x,[x',y]] + [x',[x,y]])/24 on generators (x,x',y) = (0,1,2),
# B_12(x|y,y') = ([y,[y',x]] + [y',[y,x]])/24 on generators (x,y,y') = (0,1,2).
def _nested(a, b, c):
    return lie_bracket(LiePoly.gen(a), lie_bracket(LiePoly.gen(b), LiePoly.gen(c)))


PAPER3_B21 = Fraction(1, 24) * (_nested(0, 1, 2) + _nested(1, 0, 2))
PAPER3_B12 = Fraction(1, 24) * (_nested(1, 2, 0) + _nested(2, 1, 0))


def _unknown_slots(n):
    """Coordinate slots ((p, q), monomial) for degree-n entries, ordered."""
    slots = []
    for p in range(1, n):
        q = n - p
        for mono in sorted(leftnormed_basis(n)):
            slots.append(((p, q), mono))
    return slots


def solve_bfamily(lam, N, gauge="rref-zero"):
    """Solve the associativity equations degree by degree up to N.

    gauge "rref-zero": free variables of the exact linear system are set
    to zero under the fixed ((p,q), monomial) ordering.  gauge "paper3":
    additionally pins the degree-3 entries to the explicit normalized
    values (requires lam = 1/2).
    """
    if N < 2:
        raise ValueError("N >= 2 required")
    if gauge not in ("rref-zero", "paper3"):
        raise ValueError("unknown gauge mode %r" % (gauge,))
    if gauge == "paper3" and lam != Fraction(1, 2):
        raise ValueError("paper3 gauge requires lam = 1/2")
    lam = Fraction(lam)
    table = {(1, 1): lam * LiePoly.leftnormed((0, 1))}
    # all unknown coordinates for degrees 3..N at once; the system is
    # linear through degree 4 and quadratic from degree 5 on (an unknown
    # degree-3 entry can sit inside another unknown entry), so the solve
    # is exact Newton iteration, which converges in one step while the
    # system is linear
    slots = []
    for n in range(3, N + 1):
        slots.extend(_unknown_slots(n))
    if not slots:
        return BFamily(lam, N, table)

    pins = []
    if gauge == "paper3":
        for (p, q), target in (((2, 1), PAPER3_B21), ((1, 2), PAPER3_B12)):
            for mono in sorted(leftnormed_basis(3)):
                pins.append((((p, q), mono),
                             target.terms.get(mono, Fraction(0))))

    def with_coords(vec):
        tbl = dict(table)
        for ((pq, mono), c) in zip(slots, vec):
            if c:
                cur = tbl.get(pq, LiePoly())
                tbl[pq] = cur + c * LiePoly({mono: Fraction(1)})
        return tbl

    def residual_rows(vec):
        fam = BFamily(lam, N, with_coords(vec))
        rows = []
        for n in range(3, N + 1):
            for p in range(1, n - 1):
                for q in range(1, n - p):
                    res = assoc_residual(fam, p, q, n - p - q)
                    for mono in sorted(leftnormed_basis(n)):
                        rows.append(res.terms.get(mono, Fraction(0)))
        coords = dict(zip(slots, vec))
        for slot, target in pins:
            rows.append(coords.get(slot, Fraction(0)) - target)
        return rows

    cur = [Fraction(0)] * len(slots)
    if N >= 5:
        # warm start from the solved lower-degree family: the system is
        # quadratic, and Newton from zero can start in a degenerate spot
        lower = solve_bfamily(lam, N - 1, gauge)
        coords = {}
        for (p, q), e in lower.table.items():
            for mono, c in e.terms.items():
                coords[((p, q), mono)] = c
        cur = [coords.get(slot, Fraction(0)) for slot in slots]
    for _ in range(8):
        f = residual_rows(cur)
        if not any(f):
            fam = BFamily(lam, N, with_coords(cur))
            assert all_residuals_zero(fam)
            return fam
        cols = []
        for i in range(len(slots)):
            bumped = list(cur)
            bumped[i] = bumped[i] + 1
            cols.append([a - b for a, b in zip(residual_rows(bumped), f)])
        A = [[cols[j][i] for j in range(len(slots))] for i in range(len(f))]
        try:
            delta, _ = linalg.solve_affine(A, len(slots), [-v for v in f])
        except linalg.InconsistentSystem:
            raise Obstructed(N)
        cur = [a + d for a, d in zip(cur, delta)]
    raise Obstructed(N)


# ---------------------------------------------------------------------------
# gauge group
# ---------------------------------------------------------------------------

class GaugeSeq:
    """Sequence (P_n), P_1 = x; entries multilinear LiePoly in n generators."""

    def __init__(self, table, max_degree):
        self.table = dict(table)
        self.max_degree = max_degree

    def entry(self, n):
        if n == 1:
            return LiePoly.gen(0)
        return self.table.get(n, LiePoly())

    def eval(self, n, args, carrier=FreeLieCarrier):
        if n == 1:
            return args[0]
        e = self.table.get(n)
        if e is None or not e:
            return carrier.zero()
        return substitute(e, list(args), carrier)

    @staticmethod
    def identity(max_degree):
        return GaugeSeq({}, max_degree)


def gauge_mul(P, Q):
    """Group law: (P*Q)_n = sum P_alpha(Q-blocks)."""
    N = min(P.max_degree, Q.max_degree)
    table = {}
    for n in range(2, N + 1):
        gens = [LiePoly.gen(i) for i in range(n)]
        acc = LiePoly()
        for alpha in range(1, n + 1):
            for nc in positive_compositions(n, alpha):
                blocks = []
                off = 0
                for nb in nc:
                    blocks.append(Q.eval(nb, gens[off:off + nb]))
                    off += nb
                if any(not bl for bl in blocks):
                    continue
                acc = acc + P.eval(alpha, blocks)
        if acc:
            table[n] = acc
    return GaugeSeq(table, N)


def deformed_word_product(B, u, v, carrier=FreeLieCarrier):
    """Product of two words of carrier letters under the family B.

    u, v: tuples of carrier elements.  Returns a list of (coeff, word)
    with each word a tuple of carrier elements: the sum over pairs of
    equal-length compositions with B-insertions as the new letters.
    """
    n, m = len(u), len(v)
    out = []
    for k in range(1, n + m + 1):
        for pc in compositions(n, k):
            for qc in compositions(m, k):
                if any(pb + qb == 0 for pb, qb in zip(pc, qc)):
                    continue
                letters = []
                ox = oy = 0
                ok = True
                for pb, qb in zip(pc, qc):
                    val = B.eval(pb, qb, list(u[ox:ox + pb]) + list(v[oy:oy + qb]),
                                 carrier)
                    ox += pb
                    oy += qb
                    if not val:
                        ok = False
                        break
                    letters.append(val)
                if ok:
                    out.append((Fraction(1), tuple(letters)))
    if n == 0:
        out.append((Fraction(1), tuple(v)))
    if m == 0:
        out.append((Fraction(1), tuple(u)))
    return out


def _gauge_blocks(P, word):
    """i_P applied to a word of carrier letters: list of (1, block-word)."""
    n = len(word)
    out = []
    for k in range(1, n + 1):
        for nc in positive_compositions(n, k):
            letters = []
            off = 0
            ok = True
            for nb in nc:
                val = P.eval(nb, list(word[off:off + nb]))
                off += nb
                if not val:
                    ok = False
                    break
                letters.append(val)
            if ok:
                out.append((Fraction(1), tuple(letters)))
    return out


def gauge_act(P, B):
    """Left action of the gauge group on families.

    Defined by transporting the product along the canonical isomorphism:
    (P*B)_pq = pr( i_P( m_B( i_{P^{-1}}(x-word), i_{P^{-1}}(y-word) ) ) ),
    so that Sh-products transported by i_P have (P*B) as their family and
    (P*Q)*B = P*(Q*B).
    """
    if P.max_degree < B.max_degree:
        raise ValueError("gauge sequence does not cover the family degree")
    Pinv = gauge_inverse(P)
    table = {}
    for n in range(2, B.max_degree + 1):
        for p in range(1, n):
            q = n - p
            gens = [LiePoly.gen(i) for i in range(n)]
            u, v = tuple(gens[:p]), tuple(gens[p:])
            acc = LiePoly()
            for cu, wu in _gauge_blocks(Pinv, u):
                for cv, wv in _gauge_blocks(Pinv, v):
                    for cw, w in deformed_word_product(B, wu, wv):
                        # pr of i_P on a word (L_1...L_k) is P_k(L_1,...,L_k)
                        acc = acc + (cu * cv * cw) * P.eval(len(w), list(w))
            if acc:
                table[(p, q)] = acc
    return BFamily(B.lam, B.max_degree, table)


def gauge_inverse(P):
    """Inverse for the gauge group law, degree by degree."""
    N = P.max_degree
    inv = GaugeSeq({}, N)
    for n in range(2, N + 1):
        # (P * inv)_n = P_n + [terms in inv_k, k<n] + inv_n  must vanish
        partial = gauge_mul(P, inv)
        e = partial.entry(n)
        if e:
            inv.table[n] = inv.entry(n) - e
    assert not any(gauge_mul(P, inv).entry(n) for n in range(2, N + 1))
    return inv


def connecting_gauge(B_from, B_to, max_iter=8):
    """Solve P with gauge_act(P, B_from) == B_to.

    The gauge group is pro-unipotent, so exact Newton iteration on the
    coordinates of (P_2, ..., P_N) terminates after finitely many steps
    when the families are gauge equivalent; otherwise Obstructed raises.
    """
    N = min(B_from.max_degree, B_to.max_degree)
    slots = []
    for n in range(2, N + 1):
        for mono in sorted(leftnormed_basis(n)):
            slots.append((n, mono))

    def to_gauge(vec):
        table = {}
        for (n, mono), c in zip(slots, vec):
            if c:
                table[n] = table.get(n, LiePoly()) + c * LiePoly({mono: Fraction(1)})
        return GaugeSeq(table, N)

    def mismatch(vec):
        fam = gauge_act(to_gauge(vec), B_from)
        rows = []
        for m in range(3, N + 1):
            for p in range(1, m):
                e = fam.entry(p, m - p) - B_to.entry(p, m - p)
                for mono in sorted(leftnormed_basis(m)):
                    rows.append(e.terms.get(mono, Fraction(0)))
        return rows

    cur = [Fraction(0)] * len(slots)
    for _ in range(max_iter):
        f = mismatch(cur)
        if not any(f):
            return to_gauge(cur)
        cols = []
        for i in range(len(slots)):
            bumped = list(cur)
            bumped[i] = bumped[i] + 1
            cols.append([a - b for a, b in zip(mismatch(bumped), f)])
        A = [[cols[j][i] for j in range(len(slots))] for i in range(len(f))]
        try:
            delta, _ = linalg.solve_affine(A, len(slots), [-v for v in f])
        except linalg.InconsistentSystem:
            raise Obstructed(N)
        cur = [a + d for a, d in zip(cur, delta)]
    raise Obstructed(N)


# ---------------------------------------------------------------------------
# CBH check
# ---------------------------------------------------------------------------

def cbh_check(B):
    """Compare B_pq(x..x|y..y) with the CBH table; report per (p, q)."""
    tab = cbh(B.max_degree)
    report = {}
    x, y = LiePoly.gen(0), LiePoly.gen(1)
    for n in range(1, B.max_degree + 1):
        for p in range(0, n + 1):
            q = n - p
            if p == 0 or q == 0:
                continue
            diag = B.eval(p, q, [x] * p + [y] * q)
            report[(p, q)] = (diag == tab[(p, q)])
    return report


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def bfamily_to_json(B):
    from .scalars import scalar_str
    return {"lambda": scalar_str(B.lam), "max_degree": B.max_degree,
            "entries": [{"p": p, "q": q, "poly": lie_to_json(e)}
                        for (p, q), e in sorted(B.table.items())]}


def bfamily_from_json(d):
    from .scalars import scalar_from_json
    table = {(e["p"], e["q"]): lie_from_json(e["poly"]) for e in d["entries"]}
    return BFamily(scalar_from_json(d["lambda"]), d["max_degree"], table)
