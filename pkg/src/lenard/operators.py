"""Pseudodifferential operator calculus.

ScalarPsdOp is a sparse Laurent map degree -> coefficient with an optional
accuracy floor (None means every stored coefficient list is complete).
Composition follows the symbol rule (A o B)(l) = A(l+d) B(l), i.e.
sum binom(m, k) a_m b_n^(k) l^(m+n-k); floors shrink by the documented
formula max(floor_A + topdeg(B), floor_B + topdeg(A)).

MatrixPsdOp wraps a grid of scalars; RationalOpPair is a chain
A1 B1^-1 ... An Bn^-1 of matrix differential operators with nondegenerate
denominators, expanded on demand by leading-term inversion.
"""

from __future__ import annotations

from fractions import Fraction as Q
from typing import Dict, List, Optional, Tuple

from .errors import (InsufficientTruncation, NotDifferential, SingularLeadingSymbol,
                     ZeroDivisor)
from .field import DFun, NEG_INF

DEFAULT_GUARD = 6


def binom(m: int, k: int) -> int:
    """binom(m, k) for integer m of either sign, k >= 0."""
    if k < 0:
        return 0
    out = 1
    for j in range(k):
        out = out * (m - j) // (j + 1)
    return out


def _floor_key(fl):
    return NEG_INF if fl is None else fl


class ScalarPsdOp:
    """A truncated-Laurent pseudodifferential operator; exact when floor is None."""

    __slots__ = ("ctx", "coeffs", "floor")

    def __init__(self, ctx, coeffs: Dict[int, DFun], floor: Optional[int] = None):
        self.ctx = ctx
        cleaned = {}
        for n, c in coeffs.items():
            if not c.is_zero() and (floor is None or n >= floor):
                cleaned[n] = c
        self.coeffs = cleaned
        self.floor = floor

    @classmethod
    def zero(cls, ctx, floor=None):
        return cls(ctx, {}, floor)

    @classmethod
    def identity(cls, ctx):
        return cls(ctx, {0: ctx.one()})

    @classmethod
    def d(cls, ctx, k=1):
        return cls(ctx, {k: ctx.one()})

    @classmethod
    def of_fun(cls, f: DFun):
        return cls(f.ctx, {0: f})

    def is_zero(self):
        return not self.coeffs

    def order(self):
        """|D|: the top degree with nonzero coefficient (-inf for zero)."""
        return max(self.coeffs) if self.coeffs else NEG_INF

    def min_degree(self):
        return min(self.coeffs) if self.coeffs else NEG_INF

    def is_differential(self):
        return self.floor is None and (not self.coeffs or self.min_degree() >= 0)

    def dord(self):
        d = NEG_INF
        for c in self.coeffs.values():
            cd = c.dord()
            if cd != NEG_INF and (d == NEG_INF or cd > d):
                d = cd
        return d

    def truncate(self, floor):
        if floor is None:
            if self.floor is not None:
                raise InsufficientTruncation("cannot un-truncate")
            return self
        if self.floor is not None and floor < self.floor:
            raise InsufficientTruncation(
                "requested floor %d below accuracy %d" % (floor, self.floor))
        return ScalarPsdOp(self.ctx, {n: c for n, c in self.coeffs.items() if n >= floor},
                           floor)

    def _join_floor(self, other):
        a, b = self.floor, other.floor
        if a is None:
            return b
        if b is None:
            return a
        return max(a, b)

    def __add__(self, other):
        if isinstance(other, ScalarPsdOp):
            out = dict(self.coeffs)
            for n, c in other.coeffs.items():
                s = out.get(n)
                s = c if s is None else s + c
                if s.is_zero():
                    out.pop(n, None)
                else:
                    out[n] = s
            return ScalarPsdOp(self.ctx, out, self._join_floor(other))
        return NotImplemented

    def __neg__(self):
        return ScalarPsdOp(self.ctx, {n: -c for n, c in self.coeffs.items()}, self.floor)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, f: DFun):
        """Left multiplication by a function."""
        return ScalarPsdOp(self.ctx, {n: f * c for n, c in self.coeffs.items()}, self.floor)

    def compose(self, other: "ScalarPsdOp", floor: Optional[int] = None) -> "ScalarPsdOp":
        """A o B by the symbol formula; floor required when the tail is infinite."""
        ctx = self.ctx
        if self.is_zero() or other.is_zero():
            fl = floor
            for part in (self.floor, other.floor):
                if part is not None:
                    fl = part if fl is None else max(fl, part)
            return ScalarPsdOp.zero(ctx, fl)
        top_a = self.order()
        top_b = other.order()
        derived = None
        if self.floor is not None:
            derived = self.floor + top_b
        if other.floor is not None:
            d2 = other.floor + top_a
            derived = d2 if derived is None else max(derived, d2)
        if floor is not None and derived is not None and floor < derived:
            raise InsufficientTruncation(
                "requested floor %d below supported %d" % (floor, derived))
        out_floor = floor if floor is not None else derived
        out: Dict[int, DFun] = {}
        for n, b in other.coeffs.items():
            # derivative tower of b, extended on demand
            tower = [b]
            for m, a in self.coeffs.items():
                if m >= 0:
                    kmax = m
                else:
                    if out_floor is None:
                        kmax = None  # must terminate by itself
                    else:
                        kmax = m + n - out_floor
                k = 0
                while kmax is None or k <= kmax:
                    while len(tower) <= k:
                        nxt = tower[-1].total_derivative()
                        tower.append(nxt)
                    bk = tower[k]
                    if bk.is_zero():
                        break
                    if kmax is None and k > 80:
                        raise InsufficientTruncation(
                            "composition has an infinite tail; pass a floor")
                    deg = m + n - k
                    if out_floor is not None and deg < out_floor:
                        k += 1
                        continue
                    c = binom(m, k)
                    term = a * bk if c == 1 else a * bk * Q(c)
                    s = out.get(deg)
                    s = term if s is None else s + term
                    if s.is_zero():
                        out.pop(deg, None)
                    else:
                        out[deg] = s
                    k += 1
        return ScalarPsdOp(ctx, out, out_floor)

    def __matmul__(self, other):
        return self.compose(other)

    def adjoint(self, floor: Optional[int] = None) -> "ScalarPsdOp":
        """Formal adjoint: (a d^n)* = (-d)^n o a."""
        ctx = self.ctx
        out_floor = floor
        if self.floor is not None:
            out_floor = self.floor if floor is None else max(floor, self.floor)
        out: Dict[int, DFun] = {}
        for n, a in self.coeffs.items():
            sign = -1 if n % 2 else 1
            tower = [a]
            k = 0
            while True:
                if n >= 0:
                    if k > n:
                        break
                else:
                    if out_floor is None:
                        if tower[k].is_zero():
                            break
                        if k > 80:
                            raise InsufficientTruncation(
                                "adjoint has an infinite tail; pass a floor")
                    elif n - k < out_floor:
                        break
                ak = tower[k]
                if ak.is_zero() and n < 0:
                    break
                if not ak.is_zero():
                    c = binom(n, k) * sign
                    term = ak if c == 1 else ak * Q(c)
                    deg = n - k
                    s = out.get(deg)
                    s = term if s is None else s + term
                    if s.is_zero():
                        out.pop(deg, None)
                    else:
                        out[deg] = s
                tower.append(tower[-1].total_derivative())
                k += 1
        return ScalarPsdOp(ctx, out, out_floor)

    def apply(self, f: DFun) -> DFun:
        """Apply a differential operator to a function."""
        if not self.is_differential():
            raise NotDifferential("operator has negative-degree terms")
        out = self.ctx.zero()
        if self.is_zero():
            return out
        tower = [f]
        for _ in range(int(self.order())):
            tower.append(tower[-1].total_derivative())
        for n, a in self.coeffs.items():
            out = out + a * tower[n]
        return out

    def inverse(self, floor: int) -> "ScalarPsdOp":
        """B^-1 with B o B^-1 = 1 to the floor, by leading-term recursion."""
        ctx = self.ctx
        if self.is_zero():
            raise ZeroDivisor("inverse of the zero operator")
        if self.floor is not None and self.min_degree() <= self.floor:
            raise InsufficientTruncation("operator too truncated to invert")
        N = self.order()
        bN = self.coeffs[N]
        if bN.is_zero():
            raise SingularLeadingSymbol("zero leading coefficient")
        bNi = bN.inverse()
        inv = ScalarPsdOp(ctx, {-N: bNi}, None)
        err = ScalarPsdOp.identity(ctx) - self.compose(inv, floor)
        guard = 0
        while not err.is_zero():
            e = err.order()
            if e - N < floor:
                break
            t = ScalarPsdOp(ctx, {e - N: bNi * err.coeffs[e]})
            inv = inv + t
            err = err - self.compose(t, floor)
            guard += 1
            if guard > 4 * (N - floor) + 200:
                raise InsufficientTruncation("inverse iteration did not converge")
        return ScalarPsdOp(ctx, inv.coeffs, floor)

    def eq_to_floor(self, other, floor):
        d = self - other
        for n, c in d.coeffs.items():
            if n >= floor and not c.is_zero():
                return False
        fl = d.floor
        return fl is None or fl <= floor

    def symbol_series(self, floor=None):
        """The symbol as a LambdaSeries (degree -> coefficient)."""
        from .series import LambdaSeries
        fl = self.floor if floor is None else floor
        if fl is None:
            fl = self.min_degree() if self.coeffs else 0
        return LambdaSeries(self.ctx, dict(self.coeffs), fl)

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for n in sorted(self.coeffs, reverse=True):
            c = self.coeffs[n]
            cs = str(c)
            if n == 0:
                parts.append(cs)
            else:
                dd = "D" if n == 1 else "D^%d" % n
                parts.append(dd if c.is_one() else "(%s) %s" % (cs, dd))
        body = " + ".join(parts)
        if self.floor is not None:
            body += "  [floor %d]" % self.floor
        return body

    __repr__ = __str__


class MatrixPsdOp:
    """A matrix of scalar pseudodifferential operators."""

    __slots__ = ("ctx", "entries",)

    def __init__(self, entries: List[List[ScalarPsdOp]]):
        self.entries = entries
        self.ctx = entries[0][0].ctx

    @classmethod
    def scalar(cls, op: ScalarPsdOp):
        return cls([[op]])

    @classmethod
    def identity(cls, ctx, n):
        return cls([[ScalarPsdOp.identity(ctx) if i == j else ScalarPsdOp.zero(ctx)
                     for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, ctx, rows, cols, floor=None):
        return cls([[ScalarPsdOp.zero(ctx, floor) for _ in range(cols)]
                    for _ in range(rows)])

    @classmethod
    def diag(cls, ops):
        ctx = ops[0].ctx
        n = len(ops)
        return cls([[ops[i] if i == j else ScalarPsdOp.zero(ctx) for j in range(n)]
                    for i in range(n)])

    @property
    def rows(self):
        return len(self.entries)

    @property
    def cols(self):
        return len(self.entries[0])

    def entry(self, i, j):
        return self.entries[i][j]

    def is_zero(self):
        return all(e.is_zero() for row in self.entries for e in row)

    def order(self):
        o = NEG_INF
        for row in self.entries:
            for e in row:
                oe = e.order()
                if oe != NEG_INF and (o == NEG_INF or oe > o):
                    o = oe
        return o

    def dord(self):
        d = NEG_INF
        for row in self.entries:
            for e in row:
                de = e.dord()
                if de != NEG_INF and (d == NEG_INF or de > d):
                    d = de
        return d

    def floor(self):
        fl = None
        for row in self.entries:
            for e in row:
                if e.floor is not None:
                    fl = e.floor if fl is None else max(fl, e.floor)
        return fl

    def is_differential(self):
        return all(e.is_differential() for row in self.entries for e in row)

    def map(self, fn):
        return MatrixPsdOp([[fn(e) for e in row] for row in self.entries])

    def truncate(self, floor):
        return self.map(lambda e: e.truncate(floor))

    def __add__(self, other):
        return MatrixPsdOp([[a + b for a, b in zip(ra, rb)]
                            for ra, rb in zip(self.entries, other.entries)])

    def __sub__(self, other):
        return MatrixPsdOp([[a - b for a, b in zip(ra, rb)]
                            for ra, rb in zip(self.entries, other.entries)])

    def __neg__(self):
        return self.map(lambda e: -e)

    def scale(self, f: DFun):
        return self.map(lambda e: e.scale(f))

    def compose(self, other: "MatrixPsdOp", floor=None) -> "MatrixPsdOp":
        if self.cols != other.rows:
            raise ValueError("matrix shape mismatch")
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = None
                for k in range(self.cols):
                    t = self.entries[i][k].compose(other.entries[k][j], floor)
                    acc = t if acc is None else acc + t
                row.append(acc)
            out.append(row)
        return MatrixPsdOp(out)

    def __matmul__(self, other):
        return self.compose(other)

    def adjoint(self, floor=None) -> "MatrixPsdOp":
        return MatrixPsdOp([[self.entries[j][i].adjoint(floor)
                             for j in range(self.rows)] for i in range(self.cols)])

    def apply(self, F):
        if not self.is_differential():
            raise NotDifferential("operator has negative-degree terms")
        if len(F) != self.cols:
            raise ValueError("vector length mismatch")
        out = []
        for i in range(self.rows):
            acc = self.ctx.zero()
            for j in range(self.cols):
                acc = acc + self.entries[i][j].apply(F[j])
            out.append(acc)
        return out

    def leading_matrix(self):
        """Coefficients of d^|self| entrywise (a DFun matrix)."""
        N = self.order()
        z = self.ctx.zero()
        return [[self.entries[i][j].coeffs.get(N, z) for j in range(self.cols)]
                for i in range(self.rows)]

    def inverse(self, floor: int) -> "MatrixPsdOp":
        return _mat_inverse(self, floor)

    def eq_to_floor(self, other, floor):
        return all(a.eq_to_floor(b, floor)
                   for ra, rb in zip(self.entries, other.entries)
                   for a, b in zip(ra, rb))

    def __str__(self):
        if self.rows == 1 and self.cols == 1:
            return str(self.entries[0][0])
        return "[" + ", ".join(
            "[" + ", ".join(str(e) for e in row) + "]" for row in self.entries) + "]"

    __repr__ = __str__


def _det2(m):
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def _mat_inverse(B: MatrixPsdOp, floor: int) -> MatrixPsdOp:
    for attempt in range(3):
        try:
            return _mat_inverse_once(B, floor, extra=8 * attempt)
        except InsufficientTruncation:
            if attempt == 2:
                raise
    raise InsufficientTruncation("matrix inversion did not reach floor %d" % floor)


def _mat_inverse_once(B: MatrixPsdOp, floor: int, extra=0) -> MatrixPsdOp:
    ctx = B.ctx
    n = B.rows
    if n != B.cols:
        raise ValueError("inverse of a non-square matrix")
    if n == 1:
        return MatrixPsdOp.scalar(B.entries[0][0].inverse(floor))
    # pivot: first row whose leading column-0 entry is nonzero
    pivot = None
    for r in range(n):
        if not B.entries[r][0].is_zero():
            pivot = r
            break
    if pivot is None:
        raise SingularLeadingSymbol("zero column during inversion")
    perm = list(range(n))
    perm[0], perm[pivot] = perm[pivot], perm[0]
    rows = [B.entries[perm[i]] for i in range(n)]
    a = rows[0][0]
    b = [rows[0][j] for j in range(1, n)]
    c = [rows[i][0] for i in range(1, n)]
    d = [[rows[i][j] for j in range(1, n)] for i in range(1, n)]
    guard = int(2 * abs(B.order())) + 4 + extra if B.order() != NEG_INF else 4 + extra
    work = floor - guard
    ai = a.inverse(work)
    # Schur complement s = d - c o a^-1 o b
    s_entries = []
    for i in range(n - 1):
        row = []
        for j in range(n - 1):
            t = c[i].compose(ai).compose(b[j])
            row.append(d[i][j] - t)
        s_entries.append(row)
    s = MatrixPsdOp(s_entries)
    si = _mat_inverse(s, work)
    # assemble the block formula for (PB)^-1
    aib = [ai.compose(bj) for bj in b]
    cai = [ci.compose(ai) for ci in c]
    tl = ai
    for i in range(n - 1):
        for j in range(n - 1):
            tl = tl + aib[i].compose(si.entries[i][j]).compose(cai[j])
    out = [[None] * n for _ in range(n)]
    out[0][0] = tl
    for j in range(n - 1):
        acc = None
        for i in range(n - 1):
            t = aib[i].compose(si.entries[i][j])
            acc = t if acc is None else acc + t
        out[0][j + 1] = -acc
    for i in range(n - 1):
        acc = None
        for j in range(n - 1):
            t = si.entries[i][j].compose(cai[j])
            acc = t if acc is None else acc + t
        out[i + 1][0] = -acc
    for i in range(n - 1):
        for j in range(n - 1):
            out[i + 1][j + 1] = si.entries[i][j]
    M = MatrixPsdOp(out)
    # right-multiply by the permutation: column swap
    cols = [[M.entries[i][perm[j]] for j in range(n)] for i in range(n)]
    return MatrixPsdOp(cols).truncate(floor)


def is_nondegenerate(B: MatrixPsdOp, floor=None) -> bool:
    """Invertibility in the skew field of matrix pseudodifferential operators."""
    if B.is_zero():
        return False
    if B.rows != B.cols:
        return False
    if B.rows == 1:
        return not B.entries[0][0].is_zero()
    lead = B.leading_matrix()
    if B.rows == 2 and not _det2(lead).is_zero():
        return True
    fl = floor if floor is not None else default_floor(B)
    try:
        B.inverse(fl)
        return True
    except (SingularLeadingSymbol, ZeroDivisor):
        return False


def default_floor(*ops) -> int:
    """Default truncation depth: -(2*max|order| + 6)."""
    m = 1
    for op in ops:
        o = op.order()
        if o != NEG_INF:
            m = max(m, int(abs(o)))
    return -(2 * m + DEFAULT_GUARD)


class RationalOpPair:
    """A chain A1 B1^-1 A2 B2^-1 ... An Bn^-1 of matrix differential operators."""

    __slots__ = ("pairs", "ctx", "_cache")

    def __init__(self, pairs):
        norm = []
        for a, b in pairs:
            if isinstance(a, ScalarPsdOp):
                a = MatrixPsdOp.scalar(a)
            if isinstance(b, ScalarPsdOp):
                b = MatrixPsdOp.scalar(b)
            norm.append((a, b))
        self.pairs = norm
        self.ctx = norm[0][0].ctx
        self._cache = {}

    @classmethod
    def fraction(cls, a, b):
        return cls([(a, b)])

    @classmethod
    def of_operator(cls, a):
        if isinstance(a, ScalarPsdOp):
            a = MatrixPsdOp.scalar(a)
        return cls([(a, MatrixPsdOp.identity(a.ctx, a.rows))])

    @property
    def ell(self):
        return self.pairs[0][0].rows

    def numerator(self):
        return self.pairs[0][0]

    def denominator(self):
        return self.pairs[0][1]

    def is_single(self):
        return len(self.pairs) == 1

    def order(self):
        o = 0
        for a, b in self.pairs:
            oa, ob = a.order(), b.order()
            if oa == NEG_INF:
                return NEG_INF
            o += oa - ob
        return o

    def expand(self, floor: int) -> MatrixPsdOp:
        """Laurent expansion of the chain product, accurate to the floor."""
        if floor in self._cache:
            return self._cache[floor]
        tops = [max(0, int(a.order() - b.order())) if a.order() != NEG_INF else 0
                for a, b in self.pairs]
        total = sum(tops)
        for extra in (1, 4, 16):
            acc = None
            for (a, b), top in zip(self.pairs, tops):
                need = floor - (total - top) - extra
                a_top = int(a.order()) if a.order() != NEG_INF else 0
                binv = b.inverse(need - max(0, a_top))
                part = a.compose(binv)
                acc = part if acc is None else acc.compose(part)
            try:
                out = acc.truncate(floor)
            except InsufficientTruncation:
                continue
            self._cache[floor] = out
            return out
        raise InsufficientTruncation("chain expansion did not reach floor %d" % floor)

    def adjoint_sum(self) -> "OperatorSum":
        """The adjoint chain (Bn*)^-1 An* ... (B1*)^-1 A1* as an expandable."""
        return OperatorSum([(self.ctx.one(), _AdjointChain(self))])

    def __str__(self):
        if self.is_single():
            return "frac(%s, %s)" % self.pairs[0]
        return "chain(" + ", ".join("(%s, %s)" % p for p in self.pairs) + ")"

    __repr__ = __str__


class _AdjointChain:
    """Expandable adjoint of a chain; used by the skewadjointness check."""

    __slots__ = ("base",)

    def __init__(self, base: RationalOpPair):
        self.base = base

    @property
    def ctx(self):
        return self.base.ctx

    @property
    def ell(self):
        return self.base.ell

    def order(self):
        return self.base.order()

    def expand(self, floor: int) -> MatrixPsdOp:
        tops = [max(0, int(a.order() - b.order())) if a.order() != NEG_INF else 0
                for a, b in self.base.pairs]
        total = sum(tops)
        for extra in (1, 4, 16):
            acc = None
            for (a, b), top in zip(reversed(self.base.pairs), reversed(tops)):
                need = floor - (total - top) - extra
                a_top = int(a.order()) if a.order() != NEG_INF else 0
                part = b.adjoint().inverse(need - max(0, a_top)).compose(a.adjoint())
                acc = part if acc is None else acc.compose(part)
            try:
                return acc.truncate(floor)
            except InsufficientTruncation:
                continue
        raise InsufficientTruncation("adjoint chain expansion did not reach floor %d" % floor)


class OperatorSum:
    """A constant-linear combination of expandable structures."""

    __slots__ = ("terms",)

    def __init__(self, terms):
        self.terms = list(terms)

    @property
    def ctx(self):
        return self.terms[0][1].ctx

    @property
    def ell(self):
        return self.terms[0][1].ell

    def order(self):
        o = NEG_INF
        for c, t in self.terms:
            ot = t.order()
            if ot != NEG_INF and (o == NEG_INF or ot > o):
                o = ot
        return o

    def expand(self, floor: int) -> MatrixPsdOp:
        acc = None
        for c, t in self.terms:
            part = t.expand(floor).scale(c)
            acc = part if acc is None else acc + part
        return acc

    def adjoint_sum(self):
        out = []
        for c, t in self.terms:
            if isinstance(t, RationalOpPair):
                out.append((c, _AdjointChain(t)))
            elif isinstance(t, _AdjointChain):
                out.append((c, t.base))
            else:
                out.extend((c * c2, t2) for c2, t2 in t.adjoint_sum().terms)
        return OperatorSum(out)

    def __add__(self, other):
        return OperatorSum(self.terms + structure_sum(other).terms)

    def __str__(self):
        return " + ".join("(%s)*%s" % (c, t) for c, t in self.terms)


def structure_sum(H) -> OperatorSum:
    """Coerce a structure (pair, sum, or expandable) to an OperatorSum."""
    if isinstance(H, OperatorSum):
        return H
    one = H.ctx.one()
    return OperatorSum([(one, H)])


def expand_fraction(H, floor: int) -> MatrixPsdOp:
    """Laurent expansion of a rational operator (chain or sum) to the floor."""
    return structure_sum(H).expand(floor)


def verify_fraction(X, H, floor: int) -> bool:
    """True iff the fraction H expands to the same series as X, to the floor."""
    if isinstance(X, MatrixPsdOp):
        ref = X.truncate(floor) if X.floor() is None or X.floor() <= floor else None
        if ref is None:
            raise InsufficientTruncation("reference too shallow")
    else:
        ref = expand_fraction(X, floor)
    got = expand_fraction(H, floor)
    return got.eq_to_floor(ref, floor)


def check_fraction_times_denominator(H: RationalOpPair, floor=None) -> bool:
    """Re-expansion check: expand(H) o B reproduces A on the computed window."""
    if not H.is_single():
        return True
    A, B = H.pairs[0]
    fl = floor if floor is not None else default_floor(A, B)
    exp = H.expand(fl)
    prod = exp.compose(B, fl + int(B.order() if B.order() != NEG_INF else 0))
    pf = prod.floor()
    target = pf if pf is not None else fl
    return prod.eq_to_floor(A, target)


# ---------------------------------------------------------------------------
# scalar skew-Euclidean algorithms


def skew_divide(A: ScalarPsdOp, B: ScalarPsdOp):
    """Left-quotient division A = Q o B + R with |R| < |B| (scalar, differential)."""
    if B.is_zero():
        raise ZeroDivisor("division by the zero operator")
    if not (A.is_differential() and B.is_differential()):
        raise NotDifferential("skew division needs differential operators")
    ctx = A.ctx
    nB = int(B.order())
    lB = B.coeffs[nB]
    Q_ = ScalarPsdOp.zero(ctx)
    R = A
    while not R.is_zero() and R.order() >= nB:
        k = int(R.order()) - nB
        c = R.coeffs[int(R.order())] * lB.inverse()
        t = ScalarPsdOp(ctx, {k: c})
        Q_ = Q_ + t
        R = R - t.compose(B)
    return Q_, R


def _divide_right_quotient(A: ScalarPsdOp, B: ScalarPsdOp):
    """A = B o Q + R with |R| < |B| (quotient composed on the right)."""
    ctx = A.ctx
    nB = int(B.order())
    lB = B.coeffs[nB]
    Q_ = ScalarPsdOp.zero(ctx)
    R = A
    while not R.is_zero() and R.order() >= nB:
        k = int(R.order()) - nB
        c = lB.inverse() * R.coeffs[int(R.order())]
        t = ScalarPsdOp(ctx, {k: c})
        Q_ = Q_ + t
        R = R - B.compose(t)
    return Q_, R


def right_lcm(A: ScalarPsdOp, B: ScalarPsdOp):
    """Cofactors (Bt, At) with A o Bt = B o At, the right least common multiple.

    Computed by the extended Euclidean scheme with right-quotient divisions;
    the identity is re-verified by exact expansion before returning.
    """
    if A.is_zero() or B.is_zero():
        raise ZeroDivisor("right lcm needs nonzero operators")
    if not (A.is_differential() and B.is_differential()):
        raise NotDifferential("right lcm needs differential operators")
    ctx = A.ctx
    r_prev, r_cur = A, B
    x_prev, x_cur = ScalarPsdOp.identity(ctx), ScalarPsdOp.zero(ctx)
    y_prev, y_cur = ScalarPsdOp.zero(ctx), ScalarPsdOp.identity(ctx)
    while not r_cur.is_zero():
        q, r_next = _divide_right_quotient(r_prev, r_cur)
        x_next = x_prev - x_cur.compose(q)
        y_next = y_prev - y_cur.compose(q)
        r_prev, r_cur = r_cur, r_next
        x_prev, x_cur = x_cur, x_next
        y_prev, y_cur = y_cur, y_next
    gcd_order = int(r_prev.order())
    Bt, At = x_cur, -y_cur
    lcm_left = A.compose(Bt)
    lcm_right = B.compose(At)
    if not (lcm_left - lcm_right).is_zero():
        raise ZeroDivisor("right lcm verification failed")
    expected = int(A.order()) + int(B.order()) - gcd_order
    if int(lcm_left.order()) != expected:
        raise ZeroDivisor("right lcm has the wrong order")
    return Bt, At
