"""Order-by-order deformation of CYBE solutions in associative algebras.

Tensors over an algebra A are dicts {index tuple: Fraction} over a fixed
basis; slots without content hold the unit.  The maps here are the
six-term bracket, the four-slot coboundary, the homotopy family, and the
residuals of the order-N quantization equations.
"""

from __future__ import annotations

import random
from fractions import Fraction


class AssocAlgebra:
    """Associative unital algebra by structure constants.

    mult[(i, j)] = {k: c} meaning e_i e_j = sum c e_k; unit: the vector
    of the identity element.
    """

    def __init__(self, dim, names, mult, unit, check=True):
        self.dim = dim
        self.names = names
        self.mult = {k: dict(v) for k, v in mult.items()}
        self.unit = dict(unit)
        if check:
            self._validate()

    def mul_basis(self, i, j):
        return self.mult.get((i, j), {})

    def mul(self, u, v):
        out = {}
        for i, a in u.items():
            for j, b in v.items():
                for k, c in self.mul_basis(i, j).items():
                    s = out.get(k, 0) + a * b * c
                    if s:
                        out[k] = s
                    else:
                        out.pop(k, None)
        return out

    def _validate(self):
        for i in range(self.dim):
            for j in range(self.dim):
                for k in range(self.dim):
                    lhs = self.mul(self.mul_basis(i, j), {k: Fraction(1)})
                    rhs = self.mul({i: Fraction(1)}, self.mul_basis(j, k))
                    if lhs != rhs:
                        raise ValueError("not associative at (%d,%d,%d)" % (i, j, k))
            if self.mul(self.unit, {i: Fraction(1)}) != {i: Fraction(1)} or \
               self.mul({i: Fraction(1)}, self.unit) != {i: Fraction(1)}:
                raise ValueError("unit law fails at %d" % i)


def matrix_algebra(n):
    """M_n(Q) on the basis e_{ij}, index i*n+j."""
    mult = {}
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    if j == k:
                        mult[(i * n + j, k * n + l)] = {i * n + l: Fraction(1)}
    unit = {i * n + i: Fraction(1) for i in range(n)}
    names = ["e%d%d" % (i + 1, j + 1) for i in range(n) for j in range(n)]
    return AssocAlgebra(n * n, names, mult, unit)


# ---------------------------------------------------------------------------
# tensor calculus in A^(x n)
# ---------------------------------------------------------------------------

def t_add(t, u):
    out = dict(t)
    for k, c in u.items():
        s = out.get(k, 0) + c
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def t_smul(c, t):
    if not c:
        return {}
    return {k: c * v for k, v in t.items()}


def place(alg, t, spots, n):
    """Embed a tensor into n slots, units elsewhere."""
    out = {}
    unit_items = list(alg.unit.items())
    for k, c in t.items():
        combos = [([None] * n, c)]
        for spot, comp in zip(spots, k):
            for idx, _ in combos:
                idx[spot - 1] = comp
        base = [None] * n
        for spot, comp in zip(spots, k):
            base[spot - 1] = comp
        free = [s for s in range(n) if base[s] is None]
        fill = [(list(base), c)]
        for s in free:
            fill = [(idx[:s] + [i] + idx[s + 1:], cc * cu)
                    for idx, cc in fill for i, cu in unit_items]
        for idx, cc in fill:
            key = tuple(idx)
            s2 = out.get(key, 0) + cc
            if s2:
                out[key] = s2
            else:
                out.pop(key, None)
    return out


def t_mul(alg, t, u):
    """Componentwise product of two tensors of equal degree."""
    out = {}
    for k1, c1 in t.items():
        for k2, c2 in u.items():
            pieces = [((), c1 * c2)]
            for i, j in zip(k1, k2):
                m = alg.mul_basis(i, j)
                pieces = [(key + (k,), c * cm) for key, c in pieces
                          for k, cm in m.items()]
            for key, c in pieces:
                s = out.get(key, 0) + c
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
    return out


def t_comm(alg, t, u):
    return t_add(t_mul(alg, t, u), t_smul(Fraction(-1), t_mul(alg, u, t)))


def random_tensor(alg, degree, rng, span=3):
    out = {}
    for _ in range(4):
        idx = tuple(rng.randrange(alg.dim) for _ in range(degree))
        out = t_add(out, {idx: Fraction(rng.randint(-span, span))})
    return out


# ---------------------------------------------------------------------------
# the maps of the deformation complex
# ---------------------------------------------------------------------------

def cybe(alg, r):
    """[r12,r13] + [r12,r23] + [r13,r23] in A^(x3)."""
    r12 = place(alg, r, (1, 2), 3)
    r13 = place(alg, r, (1, 3), 3)
    r23 = place(alg, r, (2, 3), 3)
    return t_add(t_add(t_comm(alg, r12, r13), t_comm(alg, r12, r23)),
                 t_comm(alg, r13, r23))


def bbrack(alg, r, R):
    """Six-term bracket [[r, R]]: the linearization of CYBE."""
    out = {}
    for (s1, s2) in (((1, 2), (1, 3)), ((1, 2), (2, 3)), ((1, 3), (2, 3))):
        out = t_add(out, t_comm(alg, place(alg, r, s1, 3), place(alg, R, s2, 3)))
        out = t_add(out, t_comm(alg, place(alg, R, s1, 3), place(alg, r, s2, 3)))
    return out


def delta_r(alg, r, rho):
    """delta(r|rho): the degree-1 member of the homotopy family."""
    return delta_p(alg, r, rho, 1)


def delta_p(alg, R, rho, p):
    """The homotopy family delta_p, p = 0..3 (zero outside that range)."""
    if p == 0 or p >= 4:
        return {}
    P = lambda spots: place(alg, R, spots, 4)
    Q = lambda spots: place(alg, rho, spots, 4)
    mul = lambda *ts: _chain_mul(alg, ts)
    if p == 1:
        out = {}
        for spots, sign in (((1, 2), 1), ((1, 3), 1), ((1, 4), 1)):
            out = t_add(out, t_smul(Fraction(sign), t_comm(alg, P(spots), Q((2, 3, 4)))))
        for spots, sign in (((1, 2), 1), ((2, 3), -1), ((2, 4), -1)):
            out = t_add(out, t_smul(Fraction(sign), t_comm(alg, P(spots), Q((1, 3, 4)))))
        for spots, sign in (((1, 3), -1), ((2, 3), -1), ((3, 4), 1)):
            out = t_add(out, t_smul(Fraction(sign), t_comm(alg, P(spots), Q((1, 2, 4)))))
        for spots, sign in (((1, 4), 1), ((2, 4), 1), ((3, 4), 1)):
            out = t_add(out, t_smul(Fraction(sign), t_comm(alg, P(spots), Q((1, 2, 3)))))
        return out
    if p == 2:
        r12, r13, r14 = P((1, 2)), P((1, 3)), P((1, 4))
        r23, r24, r34 = P((2, 3)), P((2, 4)), P((3, 4))
        out = {}
        out = t_add(out, mul(t_add(t_add(mul(r12, r13), mul(r12, r14)), mul(r13, r14)), Q((2, 3, 4))))
        out = t_add(out, t_smul(-1, mul(Q((2, 3, 4)), t_add(t_add(mul(r14, r13), mul(r14, r12)), mul(r13, r12)))))
        out = t_add(out, t_smul(-1, mul(r23, r24, Q((1, 3, 4)))))
        out = t_add(out, t_smul(-1, mul(t_add(r23, r24), Q((1, 3, 4)), r12)))
        out = t_add(out, mul(r12, Q((1, 3, 4)), t_add(r23, r24)))
        out = t_add(out, mul(Q((1, 3, 4)), r24, r23))
        out = t_add(out, t_smul(-1, mul(r23, r13, Q((1, 2, 4)))))
        out = t_add(out, t_smul(-1, mul(t_add(r13, r23), Q((1, 2, 4)), r34)))
        out = t_add(out, mul(r34, Q((1, 2, 4)), t_add(r13, r23)))
        out = t_add(out, mul(Q((1, 2, 4)), r13, r23))
        out = t_add(out, mul(t_add(t_add(mul(r34, r24), mul(r34, r14)), mul(r24, r14)), Q((1, 2, 3))))
        out = t_add(out, t_smul(-1, mul(Q((1, 2, 3)), t_add(t_add(mul(r14, r24), mul(r14, r34)), mul(r24, r34)))))
        return out
    # p == 3
    r12, r13, r14 = P((1, 2)), P((1, 3)), P((1, 4))
    r23, r24, r34 = P((2, 3)), P((2, 4)), P((3, 4))
    out = {}
    out = t_add(out, mul(r12, r13, r14, Q((2, 3, 4))))
    out = t_add(out, t_smul(-1, mul(Q((2, 3, 4)), r14, r13, r12)))
    out = t_add(out, t_smul(-1, mul(r23, r24, Q((1, 3, 4)), r12)))
    out = t_add(out, mul(r12, Q((1, 3, 4)), r24, r23))
    out = t_add(out, t_smul(-1, mul(r23, r13, Q((1, 2, 4)), r34)))
    out = t_add(out, mul(r34, Q((1, 2, 4)), r13, r23))
    out = t_add(out, mul(r34, r24, r14, Q((1, 2, 3))))
    out = t_add(out, t_smul(-1, mul(Q((1, 2, 3)), r14, r24, r34)))
    return out


def _chain_mul(alg, ts):
    out = ts[0]
    for t in ts[1:]:
        out = t_mul(alg, out, t)
    return out


def qybe_assoc_expr(alg, R):
    """R12 R13 R23 - R23 R13 R12."""
    r12 = place(alg, R, (1, 2), 3)
    r13 = place(alg, R, (1, 3), 3)
    r23 = place(alg, R, (2, 3), 3)
    return t_add(_chain_mul(alg, (r12, r13, r23)),
                 t_smul(Fraction(-1), _chain_mul(alg, (r23, r13, r12))))


def aryeh_residual(alg, R, p):
    """delta_p(R, R12R13R23 - R23R13R12) + delta_{p+1}(R, CYBE(R))."""
    return t_add(delta_p(alg, R, qybe_assoc_expr(alg, R), p),
                 delta_p(alg, R, cybe(alg, R), p + 1))


def kappa_cob(alg, r, x):
    """kappa(x) = [r, x x 1 + 1 x x] for x in A (x: {index: coeff})."""
    xt = {(i,): c for i, c in x.items()}
    x1 = place(alg, xt, (1,), 2)
    x2 = place(alg, xt, (2,), 2)
    return t_comm(alg, r, t_add(x1, x2))


def recursion_residual(alg, r, rseq, N):
    """Residual of the order-N equation.

    rseq: [R_1, ..., R_k] with R_1 = r.  Computes [[r, R_{N-1}]] +
    sum_{p,q,s <= N-2, p+q+s = N} (R_p^12 R_q^13 R_s^23 - reverse) with
    R_0 = 1; zero certifies the equation.
    """
    full = [None] + list(rseq)
    out = bbrack(alg, r, full[N - 1]) if N - 1 < len(full) else {}

    def R(i):
        if i == 0:
            u = {}
            for a, ca in alg.unit.items():
                for b, cb in alg.unit.items():
                    u[(a, b)] = ca * cb
            return u
        return full[i]

    for p in range(0, N - 1):
        for q in range(0, N - 1):
            s = N - p - q
            if s < 0 or s > N - 2:
                continue
            t = _chain_mul(alg, (place(alg, R(p), (1, 2), 3),
                                 place(alg, R(q), (1, 3), 3),
                                 place(alg, R(s), (2, 3), 3)))
            t2 = _chain_mul(alg, (place(alg, R(s), (2, 3), 3),
                                  place(alg, R(q), (1, 3), 3),
                                  place(alg, R(p), (1, 2), 3)))
            out = t_add(out, t_add(t, t_smul(Fraction(-1), t2)))
    return out


def obstruction_check(alg, r, rseq, N):
    """Prop-style test term: delta(r | sum_{p,q,s>0} R_p12 R_q13 R_s23 - rev).

    Verifies the hypotheses (the order-i equations with positive indices,
    i <= N-2) before computing; raises ValueError on violation.
    """
    full = [None] + list(rseq)
    for i in range(1, N - 1):
        lhs = bbrack(alg, r, full[i])
        rhs = {}
        for p in range(1, i + 1):
            for q in range(1, i + 1):
                s = i + 1 - p - q
                if s < 1:
                    continue
                t = _chain_mul(alg, (place(alg, full[p], (1, 2), 3),
                                     place(alg, full[q], (1, 3), 3),
                                     place(alg, full[s], (2, 3), 3)))
                t2 = _chain_mul(alg, (place(alg, full[s], (2, 3), 3),
                                      place(alg, full[q], (1, 3), 3),
                                      place(alg, full[p], (1, 2), 3)))
                rhs = t_add(rhs, t_add(t_smul(Fraction(-1), t), t2))
        if t_add(lhs, t_smul(Fraction(-1), rhs)):
            raise ValueError("order-%d hypothesis violated" % (i + 1))
    test = {}
    for p in range(1, N):
        for q in range(1, N):
            s = N - p - q
            if s < 1:
                continue
            if p >= len(full) or q >= len(full) or s >= len(full):
                continue
            t = _chain_mul(alg, (place(alg, full[p], (1, 2), 3),
                                 place(alg, full[q], (1, 3), 3),
                                 place(alg, full[s], (2, 3), 3)))
            t2 = _chain_mul(alg, (place(alg, full[s], (2, 3), 3),
                                  place(alg, full[q], (1, 3), 3),
                                  place(alg, full[p], (1, 2), 3)))
            test = t_add(test, t_add(t, t_smul(Fraction(-1), t2)))
    return delta_r(alg, r, test)


def half_r_squared(alg, r):
    """(1/2) r^2 in A x A (componentwise square)."""
    return t_smul(Fraction(1, 2), t_mul(alg, r, r))


def random_r(alg, rng, span=2):
    return random_tensor(alg, 2, rng, span)
