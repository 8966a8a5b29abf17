"""Exact arithmetic in a field of differential functions.

Elements are rational functions in x, the generator jets u_i^(n), named
constant parameters, and a controlled catalog of adjoined symbols
(exp(c*x), exp(c*u_i), sqrt(g)).  Coefficients are exact rationals.

Representation: a DFun is num/den where num is a sparse multivariate
polynomial and den a product of monic polynomial factors with positive
integer exponents.  Square-root symbols and derived parameters carry a
quadratic relation v**2 = g and are reduced so no power >= 2 survives;
exponential symbols are Laurent variables (negative powers allowed).
Neither kind ever remains in a denominator.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Optional, Tuple

from .errors import ZeroDivisor

Q = Fraction
QONE = Q(1)
NEG_INF = float("-inf")

# variable kinds, also the major key of the canonical variable order
KIND_PARAM = 0
KIND_SYMBOL = 1
KIND_X = 2
KIND_GEN = 3

Mono = Tuple[Tuple[int, int], ...]  # sorted ((var_id, exp), ...), exps nonzero
ONE_MONO: Mono = ()


def mono_mul(a: Mono, b: Mono) -> Mono:
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    na, nb = len(a), len(b)
    while i < na and j < nb:
        va, ea = a[i]
        vb, eb = b[j]
        if va < vb:
            out.append(a[i]); i += 1
        elif vb < va:
            out.append(b[j]); j += 1
        else:
            e = ea + eb
            if e:
                out.append((va, e))
            i += 1; j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def mono_div(a: Mono, b: Mono) -> Optional[Mono]:
    """a / b, or None when b does not divide a."""
    out = []
    i = j = 0
    na, nb = len(a), len(b)
    while j < nb:
        vb, eb = b[j]
        while i < na and a[i][0] < vb:
            out.append(a[i]); i += 1
        if i == na or a[i][0] != vb or a[i][1] < eb:
            return None
        e = a[i][1] - eb
        if e:
            out.append((a[i][0], e))
        i += 1; j += 1
    out.extend(a[i:])
    return tuple(out)


def mono_gcd(a: Mono, b: Mono) -> Mono:
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        va, ea = a[i]
        vb, eb = b[j]
        if va < vb:
            i += 1
        elif vb < va:
            j += 1
        else:
            if ea > 0 and eb > 0:
                out.append((va, min(ea, eb)))
            i += 1; j += 1
    return tuple(out)


class Context:
    """Variable registry for one field of differential functions.

    Holds the generator names, the constant parameters (with optional
    quadratic relations for derived parameters), and the adjoined-symbol
    catalog.  Variables get integer ids on demand; canonical ordering is
    by structural rank, not id, so it does not depend on creation order.
    """

    def __init__(self, generators=("u",), parameters=()):
        self.gen_names = tuple(generators)
        self.ell = len(self.gen_names)
        self._keys = []          # id -> structural key
        self._ids = {}           # structural key -> id
        self._names = []         # id -> display name
        self._rank = []          # id -> canonical sort rank (tuple)
        self.laurent = []        # id -> bool (exponential symbols)
        self.relations = {}      # id -> DFun value of var**2 (relation-free)
        self.sym_dlog = {}       # id -> DFun, total derivative of log(symbol)
        self.sym_plog = {}       # id -> {(i, n): DFun}, partials of log(symbol)
        self.sym_expr = {}       # id -> ("exp"|"sqrt", argument DFun, gen index|None)
        self._sym_by_expr = {}   # canonical expression key -> id
        self.params = {}
        self.x_id = self._register(("x",), "x", (KIND_X,))
        for name in parameters:
            self.add_parameter(name)

    # -- registry ---------------------------------------------------------

    def _register(self, key, name, rank, laurent=False):
        if key in self._ids:
            return self._ids[key]
        vid = len(self._keys)
        self._keys.append(key)
        self._ids[key] = vid
        self._names.append(name)
        self._rank.append(rank)
        self.laurent.append(laurent)
        return vid

    def add_parameter(self, name):
        if name in self.params:
            return self.params[name]
        vid = self._register(("p", name), name, (KIND_PARAM, name))
        self.params[name] = vid
        return vid

    def add_derived_parameter(self, name, square: "DFun"):
        """Adjoin a constant c with relation c**2 = square (constant, relation-free)."""
        if name in self.params:
            return self.params[name]
        if not square.is_constant():
            raise ValueError("derived parameter square must be constant")
        if square.has_relation_vars():
            raise ValueError("relation right-hand sides must be relation-free")
        vid = self._register(("p", name), name, (KIND_PARAM, name))
        self.params[name] = vid
        self.relations[vid] = square
        return vid

    def gen_var(self, i, n):
        if not (0 <= i < self.ell):
            raise IndexError("generator index out of range")
        name = self.gen_names[i]
        if n == 0:
            disp = name
        elif n <= 3:
            disp = name + "'" * n
        else:
            disp = "%s^(%d)" % (name, n)
        return self._register(("u", i, n), disp, (KIND_GEN, n, i))

    def var_name(self, vid):
        return self._names[vid]

    def var_key(self, vid):
        return self._keys[vid]

    def is_param_var(self, vid):
        return self._keys[vid][0] == "p"

    def is_symbol_var(self, vid):
        return self._keys[vid][0] == "s"

    # -- adjoined symbols (closed catalog) ----------------------------------

    def adjoin_exp_x(self, c: "DFun", name=None):
        """Adjoin exp(c*x) for a nonzero constant c; returns the symbol."""
        c = self._as_fun(c)
        if not c.is_constant() or c.is_zero():
            raise ValueError("exp rate must be a nonzero constant")
        key = ("exp", "x", c.key())
        if key in self._sym_by_expr:
            return self.var_fun(self._sym_by_expr[key])
        name = name or "exp(%s*x)" % c
        vid = self._register(("s", name), name, (KIND_SYMBOL, name), laurent=True)
        self._sym_by_expr[key] = vid
        self.sym_dlog[vid] = c
        self.sym_plog[vid] = {}
        self.sym_expr[vid] = ("exp", c * self.x(), None)
        return self.var_fun(vid)

    def adjoin_exp_u(self, c: "DFun", i=0, name=None):
        """Adjoin exp(c*u_i) for a nonzero constant c."""
        c = self._as_fun(c)
        if not c.is_constant() or c.is_zero():
            raise ValueError("exp rate must be a nonzero constant")
        key = ("exp", ("u", i), c.key())
        if key in self._sym_by_expr:
            return self.var_fun(self._sym_by_expr[key])
        name = name or "exp(%s*%s)" % (c, self.gen_names[i])
        vid = self._register(("s", name), name, (KIND_SYMBOL, name), laurent=True)
        self._sym_by_expr[key] = vid
        self.sym_dlog[vid] = c * self.gen(i, 1)
        self.sym_plog[vid] = {(i, 0): c}
        self.sym_expr[vid] = ("exp", c * self.gen(i, 0), i)
        return self.var_fun(vid)

    def adjoin_sqrt(self, g: "DFun", name=None):
        """Adjoin s = sqrt(g) with relation s**2 = g (g relation-free, nonzero)."""
        g = self._as_fun(g)
        if g.is_zero():
            raise ValueError("sqrt of zero")
        if g.has_relation_vars():
            raise ValueError("relation right-hand sides must be relation-free")
        key = ("sqrt", g.key())
        if key in self._sym_by_expr:
            return self.var_fun(self._sym_by_expr[key])
        name = name or "sqrt(%s)" % g
        vid = self._register(("s", name), name, (KIND_SYMBOL, name))
        self._sym_by_expr[key] = vid
        self.relations[vid] = g
        half_over_g = self.const(Q(1, 2)) / g
        self.sym_dlog[vid] = g.total_derivative() * half_over_g
        plog = {}
        for (i, n) in g.jet_vars():
            p = g.partial(i, n)
            if not p.is_zero():
                plog[(i, n)] = p * half_over_g
        self.sym_plog[vid] = plog
        self.sym_expr[vid] = ("sqrt", g, None)
        return self.var_fun(vid)

    # -- element constructors ------------------------------------------------

    def _as_fun(self, v):
        if isinstance(v, DFun):
            return v
        return self.const(v)

    def zero(self):
        return DFun(self, {}, (), normalized=True)

    def one(self):
        return DFun(self, {ONE_MONO: QONE}, (), normalized=True)

    def const(self, q):
        q = Q(q)
        if q == 0:
            return self.zero()
        return DFun(self, {ONE_MONO: q}, (), normalized=True)

    def var_fun(self, vid):
        return DFun(self, {((vid, 1),): QONE}, (), normalized=True)

    def x(self):
        return self.var_fun(self.x_id)

    def param(self, name):
        return self.var_fun(self.add_parameter(name))

    def gen(self, i=0, n=0):
        return self.var_fun(self.gen_var(i, n))

    def u(self, n=0):
        return self.gen(0, n)

    def mono_sortkey(self, mono: Mono):
        """Graded key ordering monomials canonically (degree, then ranked exps)."""
        deg = sum(e for _, e in mono)
        return (deg, tuple(sorted(((self._rank[v], e) for v, e in mono), reverse=True)))


# ---------------------------------------------------------------------------
# raw polynomial helpers ({Mono: Q} dicts)


def poly_add_into(acc: Dict[Mono, Q], other: Dict[Mono, Q], scale=QONE):
    for m, c in other.items():
        v = acc.get(m)
        if v is None:
            acc[m] = c * scale
        else:
            v = v + c * scale
            if v:
                acc[m] = v
            else:
                del acc[m]


def poly_mul(a: Dict[Mono, Q], b: Dict[Mono, Q]) -> Dict[Mono, Q]:
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    out: Dict[Mono, Q] = {}
    get = out.get
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = mono_mul(ma, mb)
            v = get(m)
            if v is None:
                out[m] = ca * cb
            else:
                v = v + ca * cb
                if v:
                    out[m] = v
                else:
                    del out[m]
    return out


def poly_scale(a, q):
    if not q:
        return {}
    return {m: c * q for m, c in a.items()}


def poly_lead(ctx, a: Dict[Mono, Q]) -> Mono:
    return max(a, key=ctx.mono_sortkey)


def poly_exact_div(ctx, a: Dict[Mono, Q], b: Dict[Mono, Q]) -> Optional[Dict[Mono, Q]]:
    """a / b as a polynomial, or None when the division is not exact."""
    if not a:
        return {}
    lb = poly_lead(ctx, b)
    cb = b[lb]
    rem = dict(a)
    quo: Dict[Mono, Q] = {}
    while rem:
        la = poly_lead(ctx, rem)
        m = mono_div(la, lb)
        if m is None:
            return None
        c = rem[la] / cb
        quo[m] = c
        poly_add_into(rem, poly_mul({m: c}, b), Q(-1))
    return quo


def _poly_partial(a: Dict[Mono, Q], vid) -> Dict[Mono, Q]:
    out: Dict[Mono, Q] = {}
    for m, c in a.items():
        for idx, (v, e) in enumerate(m):
            if v == vid:
                nm = list(m)
                if e == 1:
                    del nm[idx]
                else:
                    nm[idx] = (v, e - 1)
                key = tuple(nm)
                val = out.get(key)
                nv = c * e if val is None else val + c * e
                if nv:
                    out[key] = nv
                elif val is not None:
                    del out[key]
                break
    return out


def poly_key(a: Dict[Mono, Q]):
    return tuple(sorted(a.items()))


# ---------------------------------------------------------------------------


class DFun:
    """An element of the differential function field (immutable)."""

    __slots__ = ("ctx", "num", "den", "_key", "_dord", "_td")

    def __init__(self, ctx, num, den, normalized=False):
        self.ctx = ctx
        self._key = None
        self._dord = -2  # sentinel: not yet computed
        self._td = None
        if normalized:
            self.num = num
            self.den = den
        else:
            self.num, self.den = _normalize(ctx, num, den)

    # -- basics --------------------------------------------------------------

    def is_zero(self):
        return not self.num

    def is_one(self):
        return not self.den and self.num == {ONE_MONO: QONE}

    def _vars(self):
        seen = set()
        for m in self.num:
            for v, _ in m:
                seen.add(v)
        for f, _ in self.den:
            for m in f:
                for v, _ in m:
                    seen.add(v)
        return seen

    def has_relation_vars(self):
        rel = self.ctx.relations
        return any(v in rel for v in self._vars())

    def is_constant(self):
        """Annihilated by the total derivative: built from parameters only."""
        ctx = self.ctx
        return all(ctx.is_param_var(v) for v in self._vars())

    def is_quasiconstant(self):
        """No dependence on any u_i^(n), directly or through symbols."""
        return self.dord() is NEG_INF or self.dord() == NEG_INF

    def key(self):
        if self._key is None:
            self._key = (poly_key(self.num),
                         tuple(sorted((poly_key(f), e) for f, e in self.den)))
        return self._key

    def __eq__(self, other):
        if isinstance(other, (int, Q)):
            other = self.ctx.const(other)
        if not isinstance(other, DFun):
            return NotImplemented
        if self.key() == other.key():
            return True
        return (self - other).is_zero()

    def __hash__(self):
        raise TypeError("DFun is not hashable; use .key() explicitly")

    def __bool__(self):
        return not self.is_zero()

    # -- arithmetic ------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, DFun):
            return other
        if isinstance(other, (int, Q)):
            return self.ctx.const(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        den = _den_lcm(self.den, other.den)
        a = poly_mul(self.num, _den_cofactor(den, self.den))
        poly_add_into(a, poly_mul(other.num, _den_cofactor(den, other.den)))
        return DFun(self.ctx, a, den)

    __radd__ = __add__

    def __neg__(self):
        return DFun(self.ctx, poly_scale(self.num, Q(-1)), self.den, normalized=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return self.ctx.zero()
        num = poly_mul(self.num, other.num)
        den = _den_merge(self.den, other.den)
        return DFun(self.ctx, num, den)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisor("inverse of zero")
        num = {ONE_MONO: QONE}
        for f, e in self.den:
            for _ in range(e):
                num = poly_mul(num, f)
        return DFun(self.ctx, num, ((dict(self.num), 1),))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k):
        if k == 0:
            return self.ctx.one()
        base = self if k > 0 else self.inverse()
        out = base
        for _ in range(abs(k) - 1):
            out = out * base
        return out

    # -- calculus ---------------------------------------------------------------

    def _formal_partial(self, vid):
        """d/d(var) treating every variable as independent (no chain rules)."""
        ctx = self.ctx
        dnum = _poly_partial(self.num, vid)
        if not self.den:
            return DFun(ctx, dnum, (), normalized=True)
        out = DFun(ctx, dnum, self.den)
        for idx, (f, e) in enumerate(self.den):
            df = _poly_partial(f, vid)
            if not df:
                continue
            den = list(self.den)
            den[idx] = (f, e + 1)
            out = out + DFun(ctx, poly_mul(poly_scale(self.num, Q(-e)), df), tuple(den))
        return out

    def total_derivative(self):
        """d/dx through x, all jets (u_i^(n) -> u_i^(n+1)) and symbol rules."""
        if self._td is not None:
            return self._td
        ctx = self.ctx
        out = ctx.zero()
        for vid in sorted(self._vars()):
            d = self._formal_partial(vid)
            if d.is_zero():
                continue
            key = ctx.var_key(vid)
            if key[0] == "x":
                out = out + d
            elif key[0] == "u":
                _, i, n = key
                out = out + d * ctx.gen(i, n + 1)
            elif key[0] == "s":
                out = out + d * ctx.sym_dlog[vid] * ctx.var_fun(vid)
            # parameters contribute nothing
        self._td = out
        return out

    def partial(self, i, n):
        """d/d(u_i^(n)) with the symbol chain rule."""
        ctx = self.ctx
        vid = ctx.gen_var(i, n)
        out = self._formal_partial(vid)
        for sid in sorted(self._vars()):
            if ctx.var_key(sid)[0] != "s":
                continue
            rate = ctx.sym_plog[sid].get((i, n))
            if rate is None:
                continue
            d = self._formal_partial(sid)
            if not d.is_zero():
                out = out + d * rate * ctx.var_fun(sid)
        return out

    def jet_vars(self):
        """Sorted (i, n) pairs the element may depend on, symbols included."""
        ctx = self.ctx
        pairs = set()
        for v in self._vars():
            key = ctx.var_key(v)
            if key[0] == "u":
                pairs.add((key[1], key[2]))
            elif key[0] == "s":
                pairs.update(ctx.sym_plog[v].keys())
        return sorted(pairs)

    def dord(self):
        """Differential order; -inf for quasiconstants."""
        if self._dord != -2:
            return self._dord
        pairs = self.jet_vars()
        levels = sorted({n for _, n in pairs}, reverse=True)
        for n in levels:
            for i, m in pairs:
                if m == n and not self.partial(i, n).is_zero():
                    self._dord = n
                    return n
        self._dord = NEG_INF
        return NEG_INF

    def derivative(self, k=1):
        out = self
        for _ in range(k):
            out = out.total_derivative()
        return out

    def subs_var(self, vid, value: "DFun"):
        """Substitute a variable by a field element (purely formal)."""
        ctx = self.ctx
        out = _poly_subs(ctx, self.num, vid, value)
        for f, e in self.den:
            out = out * _poly_subs(ctx, f, vid, value) ** (-e)
        return out

    def bind_params(self, values):
        """Substitute numeric values for named parameters ({name: rational})."""
        out = self
        for name, q in values.items():
            vid = self.ctx.params.get(name)
            if vid is not None and vid in out._vars():
                if vid in self.ctx.relations:
                    raise ValueError("cannot bind derived parameter %r directly" % name)
                out = out.subs_var(vid, self.ctx.const(q))
        return out

    # -- display -------------------------------------------------------------

    def __str__(self):
        from .grammar import fun_text
        return fun_text(self)

    def __repr__(self):
        return "DFun(%s)" % self

    def sort_terms(self):
        """Numerator terms in canonical (descending) order."""
        return sorted(self.num.items(), key=lambda t: self.ctx.mono_sortkey(t[0]),
                      reverse=True)


# -- normalization ------------------------------------------------------------


def _den_merge(a, b):
    out = {}
    for f, e in a:
        k = poly_key(f)
        if k in out:
            out[k] = (f, out[k][1] + e)
        else:
            out[k] = (f, e)
    for f, e in b:
        k = poly_key(f)
        if k in out:
            out[k] = (f, out[k][1] + e)
        else:
            out[k] = (f, e)
    return tuple(out.values())


def _den_lcm(a, b):
    out = {poly_key(f): (f, e) for f, e in a}
    for f, e in b:
        k = poly_key(f)
        if k in out:
            out[k] = (f, max(out[k][1], e))
        else:
            out[k] = (f, e)
    return tuple(out.values())


def _den_cofactor(lcm, den) -> Dict[Mono, Q]:
    have = {poly_key(f): e for f, e in den}
    out = {ONE_MONO: QONE}
    for f, e in lcm:
        extra = e - have.get(poly_key(f), 0)
        for _ in range(extra):
            out = poly_mul(out, f)
    return out


def _normalize(ctx, num, den):
    num = dict(num)
    num, extra_den = _reduce_relations(ctx, num)
    if not num:
        return {}, ()
    work = list(den) + extra_den

    # split single-term factors into per-variable powers, clearing scalars,
    # Laurent variables and relation-bearing variables out of the denominator
    simple: Dict[int, int] = {}      # var_id -> power (plain variables)
    composite = []                   # (poly, exp) with >= 2 terms
    extra_num = {ONE_MONO: QONE}
    rerun = False
    for f, e in work:
        if e == 0 or not f:
            if not f:
                raise ZeroDivisor("zero denominator factor")
            continue
        if len(f) == 1:
            (mono, coeff), = f.items()
            if coeff != QONE:
                num = poly_scale(num, QONE / coeff ** e)
            for v, k in mono:
                p = k * e
                if ctx.laurent[v]:
                    extra_num = poly_mul(extra_num, {((v, -p),): QONE})
                elif v in ctx.relations:
                    # 1/v**p = v**p / g**p with g = v**2; fold g**p back in
                    extra_num = poly_mul(extra_num, {((v, p),): QONE})
                    g = ctx.relations[v] ** p
                    gden = {ONE_MONO: QONE}
                    for fg, eg in g.den:
                        for _ in range(eg):
                            gden = poly_mul(gden, fg)
                    extra_num = poly_mul(extra_num, gden)
                    composite.append((dict(g.num), 1))
                    rerun = True
                else:
                    simple[v] = simple.get(v, 0) + p
        else:
            composite.append((dict(f), e))
    if extra_num != {ONE_MONO: QONE}:
        num = poly_mul(num, extra_num)
        rerun = True
    if rerun:
        num, extra_den = _reduce_relations(ctx, num)
        for f, e in extra_den:
            if len(f) == 1:
                (mono, coeff), = f.items()
                if coeff != QONE:
                    num = poly_scale(num, QONE / coeff ** e)
                for v, k in mono:
                    simple[v] = simple.get(v, 0) + k * e
            else:
                composite.append((f, e))
    if not num:
        return {}, ()

    # cancel numerator monomial content against plain variable powers
    content = None
    for m in num:
        content = m if content is None else mono_gcd(content, m)
        if not content:
            break
    if content and simple:
        strip = []
        for v, e in content:
            if e > 0 and simple.get(v, 0) > 0:
                k = min(e, simple[v])
                simple[v] -= k
                strip.append((v, k))
        if strip:
            strip = tuple(strip)
            num = {mono_div(m, strip): c for m, c in num.items()}

    # exact-division cancellation of composite factors
    out_den = []
    merged = {}
    for f, e in composite:
        k = poly_key(f)
        if k in merged:
            merged[k] = (f, merged[k][1] + e)
        else:
            merged[k] = (f, e)
    for f, e in merged.values():
        while e > 0:
            q = poly_exact_div(ctx, num, f)
            if q is None:
                break
            num = q
            e -= 1
        if e > 0:
            lead = poly_lead(ctx, f)
            lc = f[lead]
            if lc != QONE:
                f = poly_scale(f, QONE / lc)
                num = poly_scale(num, QONE / lc ** e)
            out_den.append((f, e))
    for v, e in simple.items():
        if e > 0:
            out_den.append(({((v, 1),): QONE}, e))
    if not num:
        return {}, ()
    out_den.sort(key=lambda fe: poly_key(fe[0]))
    return num, tuple(out_den)


def _reduce_relations(ctx, num):
    """Rewrite v**k (k >= 2) via v**2 = g inside a numerator polynomial.

    Returns (numerator, extra_denominator_factors); the latter arises when a
    relation value g is itself a fraction (derived parameters).
    """
    if not ctx.relations:
        return num, []
    rel = ctx.relations
    if not any(v in rel and e >= 2 for m in num for v, e in m):
        return num, []
    plain: Dict[Mono, Q] = {}
    patched = None
    for m, c in num.items():
        if any(v in rel and e >= 2 for v, e in m):
            rest = []
            factor = None
            for v, e in m:
                if v in rel and e >= 2:
                    g = rel[v] ** (e // 2)
                    factor = g if factor is None else factor * g
                    if e % 2:
                        rest.append((v, 1))
                else:
                    rest.append((v, e))
            term = factor * DFun(ctx, {tuple(sorted(rest)): c}, (), normalized=True)
            patched = term if patched is None else patched + term
        else:
            plain[m] = c
    total = patched + DFun(ctx, plain, (), normalized=True)
    return dict(total.num), [(dict(f), e) for f, e in total.den]


def _poly_subs(ctx, a: Dict[Mono, Q], vid, value: DFun) -> DFun:
    out = ctx.zero()
    pow_cache = {0: ctx.one()}

    def vpow(k):
        if k not in pow_cache:
            pow_cache[k] = value ** k
        return pow_cache[k]

    for m, c in a.items():
        rest = []
        k = 0
        for v, e in m:
            if v == vid:
                k = e
            else:
                rest.append((v, e))
        term = DFun(ctx, {tuple(rest): c}, ())
        out = out + (term * vpow(k) if k else term)
    return out


# ---------------------------------------------------------------------------
# vector helpers over DFun


def vec_add(a, b):
    return [x + y for x, y in zip(a, b)]


def vec_sub(a, b):
    return [x - y for x, y in zip(a, b)]


def vec_scale(a, c):
    return [x * c for x in a]


def vec_is_zero(a):
    return all(x.is_zero() for x in a)


def vec_eq(a, b):
    return len(a) == len(b) and all(x == y for x, y in zip(a, b))
