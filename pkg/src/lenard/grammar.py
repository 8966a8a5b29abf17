"""Shared expression grammar: parsing and printing.

One tokenizer feeds two recursive-descent parsers:

* function expressions -- identifiers (generators, x, named constants),
  derivative marks u', u'', u^(n), exp(...), sqrt(...), rationals,
  + - * / and integer ^ powers;
* operator expressions -- D = d/dx, D^k (k possibly negative), composition
  by juxtaposition or *, + and -, scalar function literals, matrix literals
  [[...],[...]], frac(A, B) and chain((A1,B1),(A2,B2),...).

Printing is canonical: fixed monomial order, deterministic parenthesation,
so printed forms are stable golden-test keys.  parse(print(e)) == e.
"""

from __future__ import annotations

import re
from fractions import Fraction as Q

from .errors import ParseError
from .field import DFun, ONE_MONO

# ---------------------------------------------------------------------------
# printing


def _var_text(ctx, vid, latex=False):
    key = ctx.var_key(vid)
    if key[0] == "u":
        _, i, n = key
        name = ctx.gen_names[i]
        if n == 0:
            return name
        if n <= 3:
            return name + "'" * n
        return "%s^(%d)" % (name, n) if not latex else "%s^{(%d)}" % (name, n)
    if key[0] == "s":
        kind, arg, _ = ctx.sym_expr[vid]
        inner = fun_latex(arg) if latex else fun_text(arg)
        if kind == "exp":
            return ("e^{%s}" % inner) if latex else "exp(%s)" % inner
        return ("\\sqrt{%s}" % inner) if latex else "sqrt(%s)" % inner
    return ctx.var_name(vid)


def _mono_text(ctx, mono, latex=False):
    parts = []
    for v, e in sorted(mono, key=lambda ve: ctx._rank[ve[0]]):
        base = _var_text(ctx, v, latex)
        need_paren = not latex and ("(" in base or "'" in base) and e != 1
        if e == 1:
            parts.append(base)
        elif latex:
            parts.append("%s^{%d}" % ("{%s}" % base if "^" in base else base, e))
        else:
            parts.append("%s^%d" % ("(%s)" % base if need_paren else base, e))
    return "*".join(parts) if not latex else " ".join(parts)


def _coeff_text(q: Q, latex=False):
    if q.denominator == 1:
        return str(q.numerator)
    if latex:
        sign = "-" if q < 0 else ""
        return "%s\\frac{%d}{%d}" % (sign, abs(q.numerator), q.denominator)
    return "%d/%d" % (q.numerator, q.denominator)


def _poly_text(ctx, poly, latex=False):
    if not poly:
        return "0"
    terms = sorted(poly.items(), key=lambda t: ctx.mono_sortkey(t[0]), reverse=True)
    out = []
    for mono, c in terms:
        mt = _mono_text(ctx, mono, latex)
        if mono == ONE_MONO:
            piece = _coeff_text(c, latex)
        elif c == 1:
            piece = mt
        elif c == -1:
            piece = "-" + mt
        else:
            piece = _coeff_text(c, latex) + ("*" if not latex else " ") + mt
        if out and not piece.startswith("-"):
            out.append("+")
        out.append(piece)
    return (" ".join(out)) if latex else "".join(out)


def fun_text(f: DFun) -> str:
    num = _poly_text(f.ctx, f.num)
    if not f.den:
        return num
    dparts = []
    for fac, e in f.den:
        base = _poly_text(f.ctx, fac)
        if len(fac) > 1 or e != 1:
            if len(fac) > 1:
                base = "(%s)" % base
            elif "*" in base or "+" in base or "/" in base:
                base = "(%s)" % base
        if len(fac) == 1 and ("'" in base or "(" in base) and e != 1:
            base = "(%s)" % base
        dparts.append(base if e == 1 else "%s^%d" % (base, e))
    den = "*".join(dparts)
    if len(f.num) > 1:
        num = "(%s)" % num
    if len(dparts) > 1 or len(f.den[0][0]) > 1 or f.den[0][1] != 1:
        den = "(%s)" % den if len(dparts) > 1 else den
    return "%s/%s" % (num, den)


def fun_latex(f: DFun) -> str:
    num = _poly_text(f.ctx, f.num, latex=True)
    if not f.den:
        return num
    dparts = []
    for fac, e in f.den:
        base = _poly_text(f.ctx, fac, latex=True)
        if len(fac) > 1:
            base = "\\left(%s\\right)" % base
        dparts.append(base if e == 1 else "%s^{%d}" % (base, e))
    return "\\frac{%s}{%s}" % (num, " ".join(dparts))


def vec_text(F):
    return "(" + ", ".join(fun_text(f) for f in F) + ")"


def vec_latex(F):
    return "\\begin{pmatrix}" + " \\\\ ".join(fun_latex(f) for f in F) + "\\end{pmatrix}"


# ---------------------------------------------------------------------------
# tokenizer

_TOKEN_RE = re.compile(r"""
    (?P<num>\d+)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<primes>'+)
  | (?P<op>\^|\*|/|\+|-|\(|\)|\[|\]|,)
  | (?P<ws>\s+)
""", re.VERBOSE)


class _Tok:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind = kind
        self.text = text
        self.line = line
        self.col = col

    def __repr__(self):
        return "%s(%r)" % (self.kind, self.text)


def tokenize(src):
    toks = []
    line, col = 1, 0
    pos = 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if not m:
            raise ParseError("unexpected character %r" % src[pos], line, col)
        kind = m.lastgroup
        text = m.group()
        if kind != "ws":
            toks.append(_Tok(kind, text, line, col))
        nl = text.count("\n")
        if nl:
            line += nl
            col = len(text) - text.rfind("\n") - 1
        else:
            col += len(text)
        pos = m.end()
    toks.append(_Tok("eof", "", line, col))
    return toks


class _ScalarStop(Exception):
    """Internal: a scalar literal ran into an operator keyword."""


class _Parser:
    def __init__(self, ctx, toks):
        self.ctx = ctx
        self.toks = toks
        self.i = 0
        self._opmode = False

    def peek(self):
        return self.toks[self.i]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text):
        t = self.next()
        if t.text != text:
            raise ParseError("expected %r, got %r" % (text, t.text), t.line, t.col)
        return t

    def error(self, msg):
        t = self.peek()
        raise ParseError(msg, t.line, t.col)

    # -- function expressions ------------------------------------------------

    def parse_fun(self):
        f = self.fun_sum()
        return f

    def fun_sum(self):
        t = self.peek()
        neg = False
        if t.text in ("+", "-"):
            self.next()
            neg = t.text == "-"
        f = self.fun_term()
        if neg:
            f = -f
        while self.peek().text in ("+", "-"):
            op = self.next().text
            g = self.fun_term()
            f = f - g if op == "-" else f + g
        return f

    def fun_term(self):
        f = self.fun_power()
        while True:
            t = self.peek()
            if t.text in ("*", "/"):
                save = self.i
                self.next()
                try:
                    g = self.fun_power()
                except _ScalarStop:
                    self.i = save
                    return f
                f = f * g if t.text == "*" else f / g
            elif t.kind in ("name", "num") or t.text == "(":
                # juxtaposition; in operator mode "(" starts a composition instead
                if self._opmode and (t.text == "(" or
                                     (t.kind == "name" and t.text in ("D", "frac", "chain"))):
                    return f
                save = self.i
                try:
                    g = self.fun_power()
                except _ScalarStop:
                    self.i = save
                    return f
                f = f * g
            else:
                return f

    def fun_power(self):
        base = self.fun_atom()
        if self.peek().text == "^":
            self.next()
            neg = False
            if self.peek().text == "-":
                self.next()
                neg = True
            t = self.next()
            if t.kind != "num":
                raise ParseError("integer exponent expected", t.line, t.col)
            k = int(t.text)
            return base ** (-k if neg else k)
        return base

    def fun_atom(self):
        ctx = self.ctx
        t = self.next()
        if t.text == "(":
            f = self.fun_sum()
            self.expect(")")
            return f
        if t.kind == "num":
            return ctx.const(int(t.text))
        if t.kind == "name":
            name = t.text
            if self._opmode and name in ("D", "frac", "chain"):
                raise _ScalarStop()
            if name == "exp" and self.peek().text == "(":
                self.next()
                arg = self.fun_sum()
                self.expect(")")
                return _resolve_exp(ctx, arg, t)
            if name == "sqrt" and self.peek().text == "(":
                self.next()
                arg = self.fun_sum()
                self.expect(")")
                return ctx.adjoin_sqrt(arg)
            if name == "x":
                return ctx.x()
            if name in ctx.gen_names:
                i = ctx.gen_names.index(name)
                n = 0
                if self.peek().kind == "primes":
                    n = len(self.next().text)
                elif self.peek().text == "^" and self.toks[self.i + 1].text == "(":
                    self.next(); self.next()
                    tn = self.next()
                    if tn.kind != "num":
                        raise ParseError("derivative order expected", tn.line, tn.col)
                    n = int(tn.text)
                    self.expect(")")
                return ctx.gen(i, n)
            # named constant (parameter)
            return ctx.param(name)
        raise ParseError("unexpected token %r" % t.text, t.line, t.col)

    # -- operator expressions -------------------------------------------------
    # parsed lazily into atom chains: no nonlocal composition is expanded

    def parse_op(self):
        t = self.peek()
        if t.kind == "name" and t.text in ("frac", "chain"):
            return self.op_fraction()
        return _sum_of_terms(self.ctx, self.op_sum())

    def _op_matrix_arg(self, node):
        """Convert a parsed sum-of-chains into an exact matrix operator."""
        from .jacobi import AtomStructure
        from .operators import OperatorSum
        acc = None
        for coeff, chain in node:
            op = chain.scaled(coeff).to_operator()
            acc = op if acc is None else acc + op
        return acc

    def op_fraction(self):
        from .operators import RationalOpPair
        t = self.next()
        if t.text == "frac":
            self.expect("(")
            a = self._op_matrix_arg(self.op_sum())
            self.expect(",")
            b = self._op_matrix_arg(self.op_sum())
            self.expect(")")
            return RationalOpPair([(a, b)])
        if t.text == "chain":
            self.expect("(")
            pairs = []
            while True:
                self.expect("(")
                a = self._op_matrix_arg(self.op_sum())
                self.expect(",")
                b = self._op_matrix_arg(self.op_sum())
                self.expect(")")
                pairs.append((a, b))
                if self.peek().text == ",":
                    self.next()
                    continue
                break
            self.expect(")")
            return RationalOpPair(pairs)
        raise ParseError("expected frac(...) or chain(...)", t.line, t.col)

    def op_sum(self):
        """Returns a list of (constant coefficient, AtomChain) summands."""
        t = self.peek()
        sign = 1
        if t.text in ("+", "-"):
            self.next()
            sign = -1 if t.text == "-" else 1
        a = self.op_compose()
        if sign < 0:
            a = [(-c, ch) for c, ch in a]
        while self.peek().text in ("+", "-"):
            op = self.next().text
            b = self.op_compose()
            if op == "-":
                b = [(-c, ch) for c, ch in b]
            a = a + b
        return a

    def op_compose(self):
        a = self.op_atom()
        while True:
            t = self.peek()
            if t.text == "*":
                self.next()
                a = _compose_terms(self.ctx, a, self.op_atom())
            elif t.kind in ("name", "num") or t.text in ("(", "["):
                a = _compose_terms(self.ctx, a, self.op_atom())
            else:
                return a

    def op_atom(self):
        from .jacobi import AtomChain
        ctx = self.ctx
        t = self.peek()
        if t.text == "[":
            return self.op_matrix()
        if t.text == "(":
            self.next()
            a = self.op_sum()
            self.expect(")")
            return a
        if t.kind == "name" and t.text == "D":
            self.next()
            k = 1
            if self.peek().text == "^":
                self.next()
                neg = False
                if self.peek().text == "-":
                    self.next()
                    neg = True
                tn = self.next()
                if tn.kind != "num":
                    raise ParseError("integer power of D expected", tn.line, tn.col)
                k = -int(tn.text) if neg else int(tn.text)
            return [(ctx.one(), AtomChain(ctx, [("d", k)], 1))]
        # a scalar function literal (multiplication operator)
        self._opmode = True
        try:
            f = self.fun_term()
        finally:
            self._opmode = False
        return [(ctx.one(), AtomChain(ctx, [("mult", [[f]])], 1))]

    def op_matrix(self):
        from .jacobi import AtomChain
        ctx = self.ctx
        self.expect("[")
        rows = []
        while True:
            self.expect("[")
            row = [self.op_sum()]
            while self.peek().text == ",":
                self.next()
                row.append(self.op_sum())
            self.expect("]")
            rows.append(row)
            if self.peek().text == ",":
                self.next()
                continue
            break
        self.expect("]")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            self.error("ragged matrix literal")
        ell = len(rows)
        out = []
        one = ctx.one()
        for i in range(ell):
            for j in range(width):
                for coeff, chain in rows[i][j]:
                    col = [[one if r == i else ctx.zero()] for r in range(ell)]
                    rowm = [[one if c == j else ctx.zero() for c in range(width)]]
                    atoms = [("mult", col)] + list(chain.atoms) + [("mult", rowm)]
                    out.append((coeff, AtomChain(ctx, atoms, ell)))
        return out


def _compose_terms(ctx, a, b):
    from .jacobi import AtomChain
    out = []
    for c1, ch1 in a:
        for c2, ch2 in b:
            ell = max(ch1.ell, ch2.ell)
            ch1e = ch1.diagonalized(ell) if ch1.ell != ell else ch1
            ch2e = ch2.diagonalized(ell) if ch2.ell != ell else ch2
            out.append((c1 * c2,
                        AtomChain(ctx, list(ch1e.atoms) + list(ch2e.atoms), ell)))
    return out


def _sum_of_terms(ctx, terms):
    from .jacobi import AtomStructure
    from .operators import OperatorSum
    ell = max(max((ch.ell for _, ch in terms), default=1), ctx.ell)
    return OperatorSum([(c, AtomStructure(ch.diagonalized(ell)
                                          if ch.ell != ell else ch))
                        for c, ch in terms])


def _resolve_exp(ctx, arg: DFun, tok):
    """Recognize exp arguments of catalog shape c*x or c*u_i."""
    x = ctx.x()
    dx = arg._formal_partial(ctx.x_id)
    if not dx.is_zero():
        if dx.is_constant() and (arg - dx * x).is_zero():
            return ctx.adjoin_exp_x(dx)
        raise ParseError("exp argument must be c*x or c*u_i", tok.line, tok.col)
    for i in range(ctx.ell):
        du = arg.partial(i, 0)
        if not du.is_zero():
            if du.is_constant() and (arg - du * ctx.gen(i, 0)).is_zero():
                return ctx.adjoin_exp_u(du, i)
            raise ParseError("exp argument must be c*x or c*u_i", tok.line, tok.col)
    raise ParseError("exp argument must be c*x or c*u_i", tok.line, tok.col)


def parse_function(ctx, src) -> DFun:
    p = _Parser(ctx, tokenize(src))
    f = p.parse_fun()
    t = p.peek()
    if t.kind != "eof":
        raise ParseError("trailing input %r" % t.text, t.line, t.col)
    return f


def parse_operator(ctx, src):
    p = _Parser(ctx, tokenize(src))
    a = p.parse_op()
    t = p.peek()
    if t.kind != "eof":
        raise ParseError("trailing input %r" % t.text, t.line, t.col)
    return a
