"""Finite-dimensional Lie algebras, bialgebras and the double, over Q.

Elements are sparse dicts {basis index: coefficient}; coefficients are
Fraction or HSeries.  Tensors are dicts {multi-index tuple: coefficient}.
"""

from __future__ import annotations

from fractions import Fraction

from .scalars import scalar_is_zero


def vec_add(u, v):
    out = dict(u)
    for k, c in v.items():
        s = out.get(k, 0) + c
        if scalar_is_zero(s):
            out.pop(k, None)
        else:
            out[k] = s
    return out


def vec_smul(c, u):
    if scalar_is_zero(c):
        return {}
    return {k: c * v for k, v in u.items()}


class LieAlgebra:
    """Structure constants [e_i, e_j] = sum_k c_ij^k e_k.

    brackets: dict (i, j) -> {k: c} given for i < j; antisymmetry fills
    the rest.  Jacobi is verified at construction.
    """

    def __init__(self, dim, basis_names, brackets, check=True):
        self.dim = dim
        self.basis_names = list(basis_names)
        self.brackets = {}
        for (i, j), v in brackets.items():
            if i == j:
                raise ValueError("diagonal bracket entry")
            if i > j:
                i, j, v = j, i, vec_smul(Fraction(-1), v)
            cur = self.brackets.get((i, j), {})
            self.brackets[(i, j)] = vec_add(cur, v) if cur else dict(v)
        if check and not self.jacobi_ok():
            raise ValueError("Jacobi identity fails")

    def basis(self, i):
        return {i: Fraction(1)}

    def bracket_basis(self, i, j):
        if i == j:
            return {}
        if i < j:
            return dict(self.brackets.get((i, j), {}))
        return vec_smul(Fraction(-1), self.brackets.get((j, i), {}))

    def bracket(self, u, v):
        out = {}
        for i, a in u.items():
            for j, b in v.items():
                for k, c in self.bracket_basis(i, j).items():
                    out = vec_add(out, {k: a * b * c})
        return out

    def jacobi_ok(self):
        for i in range(self.dim):
            for j in range(self.dim):
                for k in range(self.dim):
                    s = self.bracket(self.basis(i), self.bracket_basis(j, k))
                    s = vec_add(s, self.bracket(self.basis(j), self.bracket_basis(k, i)))
                    s = vec_add(s, self.bracket(self.basis(k), self.bracket_basis(i, j)))
                    if s:
                        return False
        return True

    def carrier(self):
        alg = self

        class _C:
            @staticmethod
            def zero():
                return {}

            @staticmethod
            def add(a, b):
                return vec_add(a, b)

            @staticmethod
            def smul(c, a):
                return vec_smul(c, a)

            @staticmethod
            def bracket(a, b):
                return alg.bracket(a, b)

        return _C


def abelian(dim, names=None):
    return LieAlgebra(dim, names or ["e%d" % i for i in range(dim)], {})


def sl2():
    """Basis (e, f, h): [h,e] = 2e, [h,f] = -2f, [e,f] = h."""
    return LieAlgebra(3, ["e", "f", "h"], {
        (0, 1): {2: Fraction(1)},
        (2, 0): {0: Fraction(2)},
        (2, 1): {1: Fraction(-2)},
    })


class LieBialgebra:
    """Lie algebra with a cobracket delta(e_i) = sum c_i^{jk} e_j x e_k."""

    def __init__(self, algebra, cobracket):
        self.algebra = algebra
        self.cobracket = {i: {jk: c for jk, c in t.items() if not scalar_is_zero(c)}
                          for i, t in cobracket.items()}

    def delta(self, u):
        out = {}
        for i, a in u.items():
            for (j, k), c in self.cobracket.get(i, {}).items():
                out = tensor_add(out, {(j, k): a * c})
        return out


def borel2():
    """[h, e] = e, delta(h) = 0, delta(e) = h^e - e^h."""
    alg = LieAlgebra(2, ["h", "e"], {(0, 1): {1: Fraction(1)}})
    cob = {1: {(0, 1): Fraction(1), (1, 0): Fraction(-1)}}
    return LieBialgebra(alg, cob)


def abelian_bialgebra(dim=2):
    return LieBialgebra(abelian(dim), {})


# ---------------------------------------------------------------------------
# tensors over a Lie algebra
# ---------------------------------------------------------------------------

def tensor_add(t, u):
    out = dict(t)
    for k, c in u.items():
        s = out.get(k, 0) + c
        if scalar_is_zero(s):
            out.pop(k, None)
        else:
            out[k] = s
    return out


def tensor_smul(c, t):
    if scalar_is_zero(c):
        return {}
    return {k: c * v for k, v in t.items()}


def tensor_product(t, u):
    out = {}
    for k1, c1 in t.items():
        for k2, c2 in u.items():
            out = tensor_add(out, {k1 + k2: c1 * c2})
    return out


def placed_bracket(alg, t, spots_t, u, spots_u, degree):
    """[t^(spots_t), u^(spots_u)] in A^(x degree); overlap must be one slot.

    spots are 1-based slot tuples, len(spots) = tensor degree of the
    argument.  The single shared slot receives the bracket; the others
    copy their component.
    """
    shared = set(spots_t) & set(spots_u)
    if len(shared) != 1:
        raise ValueError("placed_bracket needs exactly one shared slot")
    s = shared.pop()
    out = {}
    for k1, c1 in t.items():
        for k2, c2 in u.items():
            a = k1[spots_t.index(s)]
            b = k2[spots_u.index(s)]
            br = alg.bracket_basis(a, b)
            if not br:
                continue
            for m, cb in br.items():
                idx = [None] * degree
                for spot, comp in zip(spots_t, k1):
                    idx[spot - 1] = comp
                for spot, comp in zip(spots_u, k2):
                    idx[spot - 1] = comp
                idx[s - 1] = m
                if any(v is None for v in idx):
                    raise ValueError("slots do not cover the target degree")
                out = tensor_add(out, {tuple(idx): c1 * c2 * cb})
    return out


def cybe_residual(alg, r):
    """[r12,r13] + [r12,r23] + [r13,r23], exact."""
    out = placed_bracket(alg, r, (1, 2), r, (1, 3), 3)
    out = tensor_add(out, placed_bracket(alg, r, (1, 2), r, (2, 3), 3))
    out = tensor_add(out, placed_bracket(alg, r, (1, 3), r, (2, 3), 3))
    return out


def delta3_r(alg, r, x):
    """[r12,x13]+[r12,x23]+[r13,x23]+[x12,r13]+[x12,r23]+[x13,r23]."""
    out = {}
    for (rs, xs) in (((1, 2), (1, 3)), ((1, 2), (2, 3)), ((1, 3), (2, 3))):
        out = tensor_add(out, placed_bracket(alg, r, rs, x, xs, 3))
    for (xs, rs) in (((1, 2), (1, 3)), ((1, 2), (2, 3)), ((1, 3), (2, 3))):
        out = tensor_add(out, placed_bracket(alg, x, xs, r, rs, 3))
    return out


def delta4_r(alg, r, x):
    """The four-bracket coboundary A^(x3) -> A^(x4) attached to r."""
    out = {}
    for spots, sign in (((1, 2), 1), ((1, 3), 1), ((1, 4), 1)):
        out = tensor_add(out, tensor_smul(Fraction(sign),
                         placed_bracket(alg, r, spots, x, (2, 3, 4), 4)))
    for spots, sign in (((1, 2), 1), ((2, 3), -1), ((2, 4), -1)):
        out = tensor_add(out, tensor_smul(Fraction(sign),
                         placed_bracket(alg, r, spots, x, (1, 3, 4), 4)))
    for spots, sign in (((1, 3), -1), ((2, 3), -1), ((3, 4), 1)):
        out = tensor_add(out, tensor_smul(Fraction(sign),
                         placed_bracket(alg, r, spots, x, (1, 2, 4), 4)))
    for spots, sign in (((1, 4), 1), ((2, 4), 1), ((3, 4), 1)):
        out = tensor_add(out, tensor_smul(Fraction(sign),
                         placed_bracket(alg, r, spots, x, (1, 2, 3), 4)))
    return out


# ---------------------------------------------------------------------------
# bialgebra validation and the double
# ---------------------------------------------------------------------------

def validate_bialgebra(bia):
    """List of violated identities (empty = valid)."""
    alg = bia.algebra
    bad = []
    for i in range(alg.dim):
        d = bia.delta(alg.basis(i))
        flip = {(k, j): c for (j, k), c in d.items()}
        if tensor_add(d, flip):
            bad.append(("co-antisymmetry", i))
    # co-Jacobi: (1 + rot + rot^2) (delta x id) delta = 0
    for i in range(alg.dim):
        t3 = {}
        for (j, k), c in bia.delta(alg.basis(i)).items():
            for (a, b), c2 in bia.delta(alg.basis(j)).items():
                t3 = tensor_add(t3, {(a, b, k): c * c2})
        total = {}
        for (a, b, k), c in t3.items():
            total = tensor_add(total, {(a, b, k): c})
            total = tensor_add(total, {(k, a, b): c})
            total = tensor_add(total, {(b, k, a): c})
        if total:
            bad.append(("co-Jacobi", i))
    # cocycle: delta([x,y]) = x.delta(y) - y.delta(x) with the adjoint action
    def ad_act(i, t):
        out = {}
        for (j, k), c in t.items():
            for m, cb in alg.bracket_basis(i, j).items():
                out = tensor_add(out, {(m, k): c * cb})
            for m, cb in alg.bracket_basis(i, k).items():
                out = tensor_add(out, {(j, m): c * cb})
        return out

    for i in range(alg.dim):
        for j in range(alg.dim):
            lhs = bia.delta(alg.bracket_basis(i, j))
            rhs = tensor_add(ad_act(i, bia.delta(alg.basis(j))),
                             tensor_smul(Fraction(-1), ad_act(j, bia.delta(alg.basis(i)))))
            if tensor_add(lhs, tensor_smul(Fraction(-1), rhs)):
                bad.append(("cocycle", (i, j)))
    return bad


class DoubleAlgebra:
    def __init__(self, base, algebra, form, r):
        self.base = base
        self.algebra = algebra
        self.form = form      # dict (i, j) -> Fraction, the pairing matrix
        self.r = r            # canonical element in D x D

    def pair(self, u, v):
        s = Fraction(0)
        for i, a in u.items():
            for j, b in v.items():
                s += a * b * self.form.get((i, j), Fraction(0))
        return s


def build_double(bia):
    """Double D = g + g*; mixed brackets forced by invariance of the form.

    Basis order: e_0..e_{d-1} (g), then e^0..e^{d-1} (g*).  All double
    axioms are verified before returning.
    """
    bad = validate_bialgebra(bia)
    if bad:
        raise ValueError("invalid bialgebra: %r" % (bad,))
    alg = bia.algebra
    d = alg.dim
    br = {}
    for (i, j), v in alg.brackets.items():
        br[(i, j)] = dict(v)
    # [e^i, e^j] = sum_k f^{ij}_k e^k  with  delta(e_k) = sum f^{ij}_k e_i x e_j
    for i in range(d):
        for j in range(i + 1, d):
            out = {}
            for k in range(d):
                c = bia.delta(alg.basis(k)).get((i, j), Fraction(0))
                if c:
                    out[d + k] = c
            if out:
                br[(d + i, d + j)] = out
    # [e_i, e^j] = sum_l f^{jl}_i e_l - sum_l c_{il}^j e^l
    for i in range(d):
        for j in range(d):
            out = {}
            di = bia.delta(alg.basis(i))
            for l in range(d):
                c = di.get((j, l), Fraction(0))
                if c:
                    out[l] = c
            for l in range(d):
                c = alg.bracket_basis(i, l).get(j, Fraction(0))
                if c:
                    out = vec_add(out, {d + l: -c})
            if out:
                br[(i, d + j)] = out
    dd = LieAlgebra(2 * d, alg.basis_names + [n + "*" for n in alg.basis_names], br)
    form = {}
    for i in range(d):
        form[(i, d + i)] = Fraction(1)
        form[(d + i, i)] = Fraction(1)
    r = {(i, d + i): Fraction(1) for i in range(d)}
    dbl = DoubleAlgebra(bia, dd, form, r)
    _verify_double(dbl, bia)
    return dbl


def _verify_double(dbl, bia):
    dd = dbl.algebra
    d = bia.algebra.dim
    # invariance <[x,y],z> + <y,[x,z]> = 0
    for i in range(2 * d):
        for j in range(2 * d):
            for k in range(2 * d):
                s = dbl.pair(dd.bracket_basis(i, j), dd.basis(k)) \
                    + dbl.pair(dd.basis(j), dd.bracket_basis(i, k))
                if s:
                    raise ValueError("form not invariant at (%d,%d,%d)" % (i, j, k))
    # delta_D(x) = [x x 1 + 1 x x, r] with delta_D = delta on g, -delta_{g*} on g*
    for i in range(2 * d):
        xi = {(i,): Fraction(1)}
        lhs = tensor_add(placed_bracket(dd, xi, (1,), dbl.r, (1, 2), 2),
                         placed_bracket(dd, xi, (2,), dbl.r, (1, 2), 2))
        if i < d:
            rhs = bia.delta(bia.algebra.basis(i))
        else:
            # -delta_{g*}(e^j) with delta_{g*} dual to the bracket of g
            j = i - d
            rhs = {}
            for a in range(d):
                for b in range(d):
                    c = bia.algebra.bracket_basis(a, b).get(j, Fraction(0))
                    if c:
                        rhs = tensor_add(rhs, {(d + a, d + b): -c})
        if tensor_add(lhs, tensor_smul(Fraction(-1), rhs)):
            raise ValueError("delta_D(x) != [x x 1 + 1 x x, r] at basis %d" % i)
    if cybe_residual(dd, dbl.r):
        raise ValueError("canonical r fails CYBE")


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def bialgebra_to_json(bia):
    alg = bia.algebra
    return {
        "dim": alg.dim,
        "basis": alg.basis_names,
        "bracket": [{"i": i, "j": j,
                     "out": [{"k": k, "c": str(c)} for k, c in sorted(v.items())]}
                    for (i, j), v in sorted(alg.brackets.items())],
        "cobracket": [{"i": i,
                       "out": [{"j": j, "k": k, "c": str(c)}
                               for (j, k), c in sorted(t.items())]}
                      for i, t in sorted(bia.cobracket.items())],
    }


def bialgebra_from_json(d):
    brackets = {}
    for e in d["bracket"]:
        brackets[(e["i"], e["j"])] = {o["k"]: Fraction(o["c"]) for o in e["out"]}
    alg = LieAlgebra(d["dim"], d["basis"], brackets)
    cob = {}
    for e in d.get("cobracket", []):
        cob[e["i"]] = {(o["j"], o["k"]): Fraction(o["c"]) for o in e["out"]}
    return LieBialgebra(alg, cob)
