"""Undetermined-coefficient solving over the constant field.

An AnsatzSpace generates a finite basis of differential functions
(jet monomials times x-powers, symbol multipliers and whitelist
denominators).  solve_operator_equation writes F as a constant
combination of basis vectors, applies the operator, collects the
coefficients of every monomial of the cleared numerators and solves the
resulting finite linear system by Gaussian elimination over the field of
rational functions in the named parameters.  Parameters are generic:
any nonzero constant is invertible; zero-parameter cases are handled by
binding those parameters to literal zero in the preset context.
"""

from __future__ import annotations

import itertools
from fractions import Fraction as Q
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import AnsatzExhausted
from .field import DFun, ONE_MONO, poly_key, poly_mul

QONE = Q(1)


class AnsatzSpace:
    """A finite search space of differential functions.

    max_dord   -- highest derivative u_i^(n) allowed (-1: no jets at all)
    max_degree -- total degree of jet monomials
    x_power    -- highest power of x allowed as a quasiconstant factor
    multipliers-- symbol factors (each a DFun, e.g. exp or sqrt symbols);
                  the constant 1 is always included
    denominators -- [(DFun, max power)] whitelist of denominator bases
    """

    def __init__(self, ctx, max_dord=1, max_degree=2, x_power=0,
                 multipliers=(), denominators=(), weight_max=None):
        self.ctx = ctx
        self.max_dord = max_dord
        self.max_degree = max_degree
        self.x_power = x_power
        self.multipliers = list(multipliers)
        self.denominators = list(denominators)
        self.weight_max = weight_max

    def escalated(self):
        """One escalation step: every bound grows by one."""
        return AnsatzSpace(self.ctx, self.max_dord + 1, self.max_degree + 1,
                           self.x_power + 1, self.multipliers,
                           [(b, e + 1) for b, e in self.denominators],
                           None if self.weight_max is None else self.weight_max + 1)

    def describe(self):
        return "AnsatzSpace(N=%d, d=%d, p=%d, mult=%d, den=%s)" % (
            self.max_dord, self.max_degree, self.x_power, len(self.multipliers),
            [(str(b), e) for b, e in self.denominators])

    def basis(self) -> List[DFun]:
        ctx = self.ctx
        jets = [(ctx.gen(i, n), n) for i in range(ctx.ell)
                for n in range(0, self.max_dord + 1)]
        monos = [(ctx.one(), 0)]
        for deg in range(1, self.max_degree + 1):
            for combo in itertools.combinations_with_replacement(jets, deg):
                w = sum(n for _, n in combo)
                m = ctx.one()
                for f, _ in combo:
                    m = m * f
                monos.append((m, w))
        xs = [(ctx.one(), 0)]
        for a in range(1, self.x_power + 1):
            xs.append((ctx.x() ** a, -a))
        mults = [ctx.one()] + list(self.multipliers)
        dens = [(ctx.one(), 0)]
        for base, emax in self.denominators:
            bw = base.dord()
            bw = 0 if bw == float("-inf") else int(bw)
            dens = [(d * base ** (-e), wd - e * bw)
                    for d, wd in dens for e in range(0, emax + 1)]
        out = []
        seen = set()
        for m, wm in monos:
            for x, wx in xs:
                for d, wd in dens:
                    if self.weight_max is not None and wm + wx + wd > self.weight_max:
                        continue
                    for s in mults:
                        f = m * x * s * d
                        key = f.key()
                        if key not in seen:
                            seen.add(key)
                            out.append(f)
        return out


def _split_param_mono(ctx, mono):
    par = []
    rest = []
    for v, e in mono:
        if ctx.is_param_var(v):
            par.append((v, e))
        else:
            rest.append((v, e))
    return tuple(par), tuple(rest)


def _rows_of(ctx, f: DFun, denmap, rows, col, width):
    """Scatter a cleared-numerator polynomial into coefficient rows."""
    num = f.num
    cof = denmap(f)
    if cof is not None:
        num = poly_mul(num, cof)
    for mono, q in num.items():
        par, rest = _split_param_mono(ctx, mono)
        row = rows.get(rest)
        if row is None:
            row = [None] * width
            rows[rest] = row
        cur = row[col]
        add = DFun(ctx, {par: q}, (), normalized=True)
        row[col] = add if cur is None else cur + add


def linear_solve(ctx, columns: Sequence[Sequence[DFun]], rhs: Sequence[DFun]):
    """Solve sum_k c_k columns[k] = rhs over the constant field.

    columns and rhs are vectors of DFun (length ell); the c_k are constants.
    Returns (particular or None, kernel basis), both as coefficient lists.
    """
    ell = len(rhs)
    K = len(columns)
    sparse_rows: List[Dict[int, DFun]] = []
    for comp in range(ell):
        # common denominator across this component
        den_lcm: Dict = {}
        items = [col[comp] for col in columns] + [rhs[comp]]
        for f in items:
            for fac, e in f.den:
                k = poly_key(fac)
                if k not in den_lcm or den_lcm[k][1] < e:
                    den_lcm[k] = (fac, e)

        def cofactor(f, _dl=den_lcm):
            have = {poly_key(fac): e for fac, e in f.den}
            out = None
            for k, (fac, e) in _dl.items():
                extra = e - have.get(k, 0)
                for _ in range(extra):
                    out = dict(fac) if out is None else poly_mul(out, fac)
            return out

        rows: Dict = {}
        for col_idx, col in enumerate(columns):
            if not col[comp].is_zero():
                _rows_of(ctx, col[comp], cofactor, rows, col_idx, K + 1)
        if not rhs[comp].is_zero():
            _rows_of(ctx, rhs[comp], cofactor, rows, K, K + 1)
        for rest in sorted(rows, key=lambda m: (len(m), m)):
            row = rows[rest]
            sparse_rows.append({c: e for c, e in enumerate(row) if e is not None
                                and not e.is_zero()})
    return _gauss_sparse(ctx, sparse_rows, K)


def _is_rational(e: DFun):
    if e.den:
        return None
    if not e.num:
        return Q(0)
    if len(e.num) == 1 and ONE_MONO in e.num:
        return e.num[ONE_MONO]
    return None


def _gauss_sparse(ctx, rows, K):
    """Sparse Gauss over the constant field; returns (particular|None, kernel).

    Column K holds the negated... rather, the right-hand side.  Falls back
    from plain rationals to full constant-field arithmetic only when a
    parameter actually occurs.
    """
    rational = True
    for row in rows:
        for e in row.values():
            if _is_rational(e) is None:
                rational = False
                break
        if not rational:
            break
    if rational:
        conv = [{c: _is_rational(e) for c, e in row.items()} for row in rows]
        part, kernel = _gauss_core(conv, K, Q(0), Q(1),
                                   lambda a: a == 0, lambda a: 1 / a)
        if part is not None:
            part = [ctx.const(v) for v in part]
        kernel = [[ctx.const(v) for v in vec] for vec in kernel]
        return part, kernel
    zero, one = ctx.zero(), ctx.one()
    return _gauss_core(rows, K, zero, one,
                       lambda a: a.is_zero(), lambda a: a.inverse())


def _gauss_core(rows, K, zero, one, is_zero, inv, partial=False):
    pivots: Dict[int, Dict[int, object]] = {}  # pivot col -> normalized row
    order: List[int] = []
    inconsistent = False
    # sparse rows first keeps fill-in and coefficient growth down
    queue = sorted(range(len(rows)), key=lambda i: (len(rows[i]), i))
    for ridx in queue:
        row = dict(rows[ridx])
        # reduce against existing pivots
        while True:
            cols = [c for c in row if c < K and c in pivots]
            if not cols:
                break
            c = min(cols)
            factor = row.pop(c)
            prow = pivots[c]
            for c2, v in prow.items():
                if c2 == c:
                    continue
                cur = row.get(c2)
                nv = -factor * v if cur is None else cur - factor * v
                if is_zero(nv):
                    row.pop(c2, None)
                else:
                    row[c2] = nv
        lead = min((c for c in row if c < K), default=None)
        if lead is None:
            if row and not is_zero(row.get(K, zero)):
                inconsistent = True
            continue
        scale = inv(row[lead])
        row = {c: v * scale for c, v in row.items()}
        row[lead] = one
        pivots[lead] = row
        order.append(lead)
    # back substitution so every pivot row is reduced against later pivots
    for c in sorted(pivots, reverse=True):
        row = pivots[c]
        for c2 in [cc for cc in row if cc != c and cc < K and cc in pivots]:
            factor = row.pop(c2)
            for c3, v in pivots[c2].items():
                if c3 == c2:
                    continue
                cur = row.get(c3)
                nv = -factor * v if cur is None else cur - factor * v
                if is_zero(nv):
                    row.pop(c3, None)
                else:
                    row[c3] = nv
        pivots[c] = row
    particular = None
    if not inconsistent or partial:
        particular = [zero] * K
        for c, row in pivots.items():
            particular[c] = row.get(K, zero)
        if inconsistent and not partial:
            particular = None
    kernel = []
    for free in range(K):
        if free in pivots:
            continue
        vec = [zero] * K
        vec[free] = one
        for c, row in pivots.items():
            v = row.get(free)
            if v is not None:
                vec[c] = -v
        kernel.append(vec)
    return particular, kernel


class SolutionSet:
    """Affine solution set of an ansatz solve: particular + span(kernel)."""

    __slots__ = ("ctx", "basis", "particular", "kernel", "space")

    def __init__(self, ctx, basis, particular, kernel, space):
        self.ctx = ctx
        self.basis = basis
        self.particular = particular  # vector of DFun or None
        self.kernel = kernel          # list of vectors of DFun
        self.space = space

    def exists(self):
        return self.particular is not None

    def kernel_dim(self):
        return len(self.kernel)


def _vector_basis(ctx, scalars, ell):
    out = []
    for comp in range(ell):
        for f in scalars:
            vec = [ctx.zero()] * ell
            vec[comp] = f
            out.append(vec)
    return out


def _combine(ctx, basis_vectors, coeffs):
    ell = len(basis_vectors[0]) if basis_vectors else 1
    out = [ctx.zero()] * ell
    for c, vec in zip(coeffs, basis_vectors):
        if c.is_zero():
            continue
        for comp in range(ell):
            if not vec[comp].is_zero():
                out[comp] = out[comp] + c * vec[comp]
    return out


def _apply_operator(op, vec):
    if callable(op):
        return op(vec)
    return op.apply(vec)


def solve_operator_equation(op, rhs: Sequence[DFun], space: AnsatzSpace,
                            escalations=2) -> SolutionSet:
    """Solve op(F) = rhs for F inside the ansatz space.

    op is a differential MatrixPsdOp or any callable vector -> vector linear
    map.  Escalates the space (bounds +1) at most `escalations` times; raises
    AnsatzExhausted when no solution exists in the largest space and rhs is
    nonzero.  For rhs = 0 the kernel inside the space is returned as is.
    """
    ctx = space.ctx
    ell = len(rhs)
    cur = space
    last = None
    for attempt in range(escalations + 1):
        scalars = cur.basis()
        basis_vectors = _vector_basis(ctx, scalars, ell)
        columns = [_apply_operator(op, vec) for vec in basis_vectors]
        particular, kernel = linear_solve(ctx, columns, rhs)
        if particular is not None:
            part_vec = _combine(ctx, basis_vectors, particular)
            ker_vecs = reduce_span(ctx, [_combine(ctx, basis_vectors, kv)
                                         for kv in kernel])
            return SolutionSet(ctx, basis_vectors, part_vec, ker_vecs, cur)
        last = SolutionSet(ctx, basis_vectors, None,
                           [_combine(ctx, basis_vectors, kv) for kv in kernel], cur)
        cur = cur.escalated()
    if all(f.is_zero() for f in rhs):
        return last
    raise AnsatzExhausted("no solution in %s after %d escalations"
                          % (space.describe(), escalations))


def _linear_solve_partial(ctx, columns, rhs):
    """Like linear_solve but always returns the pivot-row coefficient choice."""
    ell = len(rhs)
    K = len(columns)
    sparse_rows: List[Dict[int, DFun]] = []
    for comp in range(ell):
        den_lcm: Dict = {}
        items = [col[comp] for col in columns] + [rhs[comp]]
        for f in items:
            for fac, e in f.den:
                k = poly_key(fac)
                if k not in den_lcm or den_lcm[k][1] < e:
                    den_lcm[k] = (fac, e)

        def cofactor(f, _dl=den_lcm):
            have = {poly_key(fac): e for fac, e in f.den}
            out = None
            for k, (fac, e) in _dl.items():
                extra = e - have.get(k, 0)
                for _ in range(extra):
                    out = dict(fac) if out is None else poly_mul(out, fac)
            return out

        rows: Dict = {}
        for col_idx, col in enumerate(columns):
            if not col[comp].is_zero():
                _rows_of(ctx, col[comp], cofactor, rows, col_idx, K + 1)
        if not rhs[comp].is_zero():
            _rows_of(ctx, rhs[comp], cofactor, rows, K, K + 1)
        for rest in sorted(rows, key=lambda m: (len(m), m)):
            row = rows[rest]
            sparse_rows.append({c: e for c, e in enumerate(row) if e is not None
                                and not e.is_zero()})
    rational = True
    for row in sparse_rows:
        for e in row.values():
            if _is_rational(e) is None:
                rational = False
                break
        if not rational:
            break
    if rational:
        conv = [{c: _is_rational(e) for c, e in row.items()} for row in sparse_rows]
        part, _ = _gauss_core(conv, K, Q(0), Q(1), lambda a: a == 0,
                              lambda a: 1 / a, partial=True)
        return [ctx.const(v) for v in part]
    part, _ = _gauss_core(sparse_rows, K, ctx.zero(), ctx.one(),
                          lambda a: a.is_zero(), lambda a: a.inverse(),
                          partial=True)
    return part


def reduce_mod_span(ctx, vectors: List[List[DFun]], target: List[DFun]):
    """Canonical representative of target modulo the constant span of vectors.

    Returns (reduced_target, coefficients): target - sum c_i vectors[i], with
    the c_i chosen by sparse pivot elimination (deterministic)."""
    vectors = [v for v in vectors if not all(f.is_zero() for f in v)]
    if not vectors:
        return list(target), []
    coeffs = _linear_solve_partial(ctx, vectors, target)
    reduced = list(target)
    for c, vec in zip(coeffs, vectors):
        if c.is_zero():
            continue
        reduced = [r - c * v for r, v in zip(reduced, vec)]
    return reduced, coeffs


def reduce_span(ctx, vectors: List[List[DFun]]) -> List[List[DFun]]:
    """An independent subset spanning the same constant-span (first wins)."""
    accepted: List[List[DFun]] = []
    for vec in vectors:
        if all(f.is_zero() for f in vec):
            continue
        if accepted:
            particular, _ = linear_solve(ctx, accepted, vec)
            if particular is not None:
                continue
        accepted.append(vec)
    return accepted


def in_span(ctx, vectors, target) -> bool:
    """Is target a constant combination of the vectors?"""
    if all(f.is_zero() for f in target):
        return True
    if not vectors:
        return False
    particular, _ = linear_solve(ctx, vectors, target)
    return particular is not None


def kernel_of(op, space: AnsatzSpace, ell=None) -> List[List[DFun]]:
    """The kernel of a differential operator inside the ansatz space."""
    ctx = space.ctx
    if ell is None:
        ell = op.cols if hasattr(op, "cols") else ctx.ell
    rhs = [ctx.zero()] * ell
    raw = solve_operator_equation(op, rhs, space, escalations=0).kernel
    return reduce_span(ctx, raw)
