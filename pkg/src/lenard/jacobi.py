"""Jacobi identity for non-local structures, in one fixed completion.

Comparison domain: Laurent series in the first bracket variable l whose
coefficients are Laurent series in the second variable m; in this domain
the unique expansions are

    (l+m+d)^r = sum_k binom(r,k) (m+d)^k l^(r-k)          (m, d ascending)
    (m+d)^r   = sum_t binom(r,t) d^t m^(r-t)              (d ascending)

The second Jacobi term {u_j m {u_i l u_k}} expands coefficientwise (this
completion is its natural home; its l-powers do not mix).  The first and
third terms are evaluated in operator form over the structure's atom chain
(multiplications and powers of d), using

    left Leibniz      {a_l f w}       = {a_l f} w + f {a_l w}
    shift rule        {a_l (m+d)^r w} = (l+m+d)^r {a_l w}
    right Leibniz     {(f x)_s b} -> c = {f_s b} -> (x c) + {x_s b} -> (f c)
    left sesquilin.   {((l+d)^r x)_s b} = (-m)^r {x_s b}     at s = l+m+d

where "-> c" carries the substitution s = l+m+d acting on c.  Expanding any
bracket argument coefficientwise instead silently lands in the opposite
completion and breaks on genuinely non-local structures.
"""

from __future__ import annotations

from fractions import Fraction as Q
from typing import Dict, List, Optional, Tuple

from .errors import InsufficientTruncation
from .field import DFun, NEG_INF
from .operators import MatrixPsdOp, OperatorSum, RationalOpPair, ScalarPsdOp, binom
from .series import BiSeries, LambdaSeries


# ---------------------------------------------------------------------------
# atom chains


class AtomChain:
    """A composition of atoms: ("mult", matrix of DFun) | ("d", power).

    Applied left to right: the operator is atoms[0] o atoms[1] o ... .
    d-atoms act diagonally in whatever dimension they meet.
    """

    __slots__ = ("ctx", "atoms", "ell")

    def __init__(self, ctx, atoms, ell=None):
        self.ctx = ctx
        self.atoms = list(atoms)
        if ell is None:
            ell = 1
            for kind, data in self.atoms:
                if kind == "mult":
                    ell = len(data)
                    break
        self.ell = ell

    def scaled(self, c: DFun):
        kind, data = self.atoms[0]
        if kind == "mult":
            first = ("mult", [[c * e for e in row] for row in data])
            return AtomChain(self.ctx, [first] + self.atoms[1:], self.ell)
        ident = [[c if i == j else self.ctx.zero() for j in range(self.ell)]
                 for i in range(self.ell)]
        return AtomChain(self.ctx, [("mult", ident)] + self.atoms, self.ell)

    def to_operator(self, floor=None) -> MatrixPsdOp:
        """Compose the atoms into a matrix operator (floored when d^-k occurs)."""
        ctx = self.ctx
        acc = None
        for kind, data in self.atoms:
            if kind == "mult":
                step = MatrixPsdOp([[ScalarPsdOp.of_fun(e) for e in row] for row in data])
            else:
                cols = acc.cols if acc is not None else self.ell
                step = MatrixPsdOp.diag([ScalarPsdOp.d(ctx, data)] * cols)
            if acc is None:
                acc = step
            else:
                try:
                    acc = acc.compose(step)
                except InsufficientTruncation:
                    acc = acc.compose(step, floor)
        return acc

    def diagonalized(self, ell):
        """A scalar chain acting diagonally on ell components."""
        if self.ell == ell:
            return self
        if self.ell != 1:
            raise ValueError("only scalar chains can be diagonalized")
        ctx = self.ctx
        atoms = []
        for kind, data in self.atoms:
            if kind == "mult":
                f = data[0][0]
                atoms.append(("mult", [[f if i == j else ctx.zero()
                                        for j in range(ell)] for i in range(ell)]))
            else:
                atoms.append((kind, data))
        return AtomChain(ctx, atoms, ell)

    def scalar_paths(self):
        """All (row, col, [scalar atoms]) index paths through the chain."""
        ctx = self.ctx
        paths = [(r, r, []) for r in range(self._rows())]
        for kind, data in self.atoms:
            if kind == "d":
                paths = [(r0, c, ats + [("d", data)]) for r0, c, ats in paths]
            else:
                out = []
                for r0, r, ats in paths:
                    for c in range(len(data[0])):
                        f = data[r][c]
                        if f.is_zero():
                            continue
                        out.append((r0, c, ats + [("mult", f)]))
                paths = out
        return paths

    def apply(self, vec):
        """Apply the (differential) chain to a vector, factor by factor."""
        ctx = self.ctx
        cur = list(vec)
        for kind, data in reversed(self.atoms):
            if kind == "d":
                if data < 0:
                    raise ValueError("cannot apply d^-1 exactly")
                for _ in range(data):
                    cur = [f.total_derivative() for f in cur]
            else:
                rows = len(data)
                cur = [sum((data[r][c] * cur[c] for c in range(len(data[0]))),
                           ctx.zero()) for r in range(rows)]
        return cur

    def _rows(self):
        for kind, data in self.atoms:
            if kind == "mult":
                return len(data)
        return self.ell


class SumChain:
    """A sum of atom chains (matrix differential operators that do not factor)."""

    __slots__ = ("ctx", "summands", "ell")

    def __init__(self, summands):
        self.summands = [s if isinstance(s, AtomChain) else AtomChain(*s)
                         for s in summands]
        self.ctx = self.summands[0].ctx
        self.ell = self.summands[0].ell

    def apply(self, vec):
        out = None
        for ch in self.summands:
            part = ch.apply(vec)
            out = part if out is None else [a + b for a, b in zip(out, part)]
        return out

    def to_operator(self, floor=None) -> MatrixPsdOp:
        acc = None
        for ch in self.summands:
            op = ch.to_operator(floor)
            acc = op if acc is None else acc + op
        return acc

    @property
    def atoms(self):
        raise TypeError("a sum of chains has no single factorization")


class AtomStructure:
    """A structure given by an atom chain plus (optionally) a fraction form."""

    __slots__ = ("chain", "fraction", "_cache")

    def __init__(self, chain: AtomChain, fraction: Optional[RationalOpPair] = None):
        self.chain = chain
        self.fraction = fraction
        self._cache = {}

    @property
    def ctx(self):
        return self.chain.ctx

    @property
    def ell(self):
        return self.chain.ell

    def order(self):
        return sum(d for kind, d in self.chain.atoms if kind == "d")

    def expand(self, floor: int) -> MatrixPsdOp:
        if floor not in self._cache:
            self._cache[floor] = self.chain.to_operator(floor).truncate(floor)
        return self._cache[floor]

    def adjoint_sum(self):
        """Adjoint chain: reverse atoms, transpose mults, sign (-1)^(sum d)."""
        ctx = self.ctx
        rev = []
        for kind, data in reversed(self.chain.atoms):
            if kind == "mult":
                rows, cols = len(data), len(data[0])
                rev.append(("mult", [[data[r][c] for r in range(rows)]
                                     for c in range(cols)]))
            else:
                rev.append(("d", data))
        sign = 1
        for kind, data in self.chain.atoms:
            if kind == "d" and data % 2:
                sign = -sign
        chain = AtomChain(ctx, rev, self.ell)
        if sign < 0:
            chain = chain.scaled(ctx.const(-1))
        return OperatorSum([(ctx.one(), AtomStructure(chain))])

    def __str__(self):
        parts = []
        for kind, data in self.chain.atoms:
            if kind == "d":
                parts.append("D" if data == 1 else "D^%d" % data)
            else:
                parts.append("[" + "; ".join(", ".join(str(e) for e in row)
                                             for row in data) + "]")
        return " o ".join(parts)

    __repr__ = __str__


def atoms_of(H):
    """Extract [(coefficient, AtomChain)] from a structure built with atoms."""
    if isinstance(H, AtomStructure):
        return [(H.ctx.one(), H.chain)]
    if isinstance(H, OperatorSum):
        out = []
        for c, t in H.terms:
            for c2, ch in atoms_of(t):
                out.append((c * c2, ch))
        return out
    raise TypeError("structure has no atom-chain representation")


# ---------------------------------------------------------------------------
# grid helpers


def _grid_scale_fun(g: BiSeries, f: DFun) -> BiSeries:
    return BiSeries(g.ctx, {pq: f * c for pq, c in g.coeffs.items()}, g.floors)


def _grid_of_lambda(ser: LambdaSeries, mu_floor=None) -> BiSeries:
    return BiSeries(ser.ctx, {(p, 0): c for p, c in ser.coeffs.items()},
                    (ser.floor, mu_floor))


def _grid_of_mu(ser: LambdaSeries, lam_floor=None) -> BiSeries:
    return BiSeries(ser.ctx, {(0, q): c for q, c in ser.coeffs.items()},
                    (lam_floor, ser.floor))


def _series_mul_floors(fa, ta, fb, tb):
    """Accuracy floor of a product of two series with floors/tops."""
    out = None
    if fa is not None:
        out = fa + tb
    if fb is not None:
        v = fb + ta
        out = v if out is None else max(out, v)
    return out


def _grid_mul_mu_series(g: BiSeries, s: LambdaSeries) -> BiSeries:
    """Multiply by a series in the second variable."""
    ctx = g.ctx
    out: Dict[Tuple[int, int], DFun] = {}
    for (p, q), c in g.coeffs.items():
        for q2, c2 in s.coeffs.items():
            key = (p, q + q2)
            v = c * c2
            acc = out.get(key)
            acc = v if acc is None else acc + v
            if acc.is_zero():
                out.pop(key, None)
            else:
                out[key] = acc
    gt = max((q for _, q in g.coeffs), default=0)
    st = int(s.top()) if s.coeffs else 0
    fm = _series_mul_floors(g.floors[1], gt, s.floor, st)
    return BiSeries(ctx, out, (g.floors[0], fm))


def _grid_mul_lambda_series(g: BiSeries, s: LambdaSeries) -> BiSeries:
    """Multiply by a series in the first variable."""
    ctx = g.ctx
    out: Dict[Tuple[int, int], DFun] = {}
    for (p, q), c in g.coeffs.items():
        for p2, c2 in s.coeffs.items():
            key = (p + p2, q)
            v = c * c2
            acc = out.get(key)
            acc = v if acc is None else acc + v
            if acc.is_zero():
                out.pop(key, None)
            else:
                out[key] = acc
    gt = max((p for p, _ in g.coeffs), default=0)
    st = int(s.top()) if s.coeffs else 0
    fl = _series_mul_floors(g.floors[0], gt, s.floor, st)
    return BiSeries(ctx, out, (fl, g.floors[1]))


def _shift_series(ser: LambdaSeries, j: int, floor: Optional[int]) -> LambdaSeries:
    """(v+d)^j on a series in its own variable v.

    For j >= 0 the binomial is finite and exactness is preserved; for j < 0
    the tail is truncated at the floor (required then).
    """
    ctx = ser.ctx
    if j < 0 and floor is None:
        raise InsufficientTruncation("negative shift needs a floor")
    out: Dict[int, DFun] = {}
    for p, c in ser.coeffs.items():
        kmax = j if j >= 0 else j + p - floor
        tower = c
        for k in range(kmax + 1):
            if k > 0:
                tower = tower.total_derivative()
                if tower.is_zero():
                    break
            deg = p + j - k
            if floor is not None and deg < floor:
                continue
            b = binom(j, k)
            term = tower if b == 1 else tower * Q(b)
            acc = out.get(deg)
            acc = term if acc is None else acc + term
            if acc.is_zero():
                out.pop(deg, None)
            else:
                out[deg] = acc
    if j >= 0:
        if ser.floor is None:
            fl = None if floor is None else floor
            if floor is None:
                fl = None
        else:
            fl = ser.floor + j
            if floor is not None:
                fl = max(fl, floor)
    else:
        fl = floor if ser.floor is None else max(floor, ser.floor)
    return LambdaSeries(ctx, out, fl)


def _grid_mu_shift(g: BiSeries, r: int, mu_floor: Optional[int]) -> BiSeries:
    """(m+d)^r along the second variable of a grid."""
    ctx = g.ctx
    if r >= 0 and g.floors[1] is None:
        mu_floor = None  # finite binomial of an exact series stays exact
    slices: Dict[int, Dict[int, DFun]] = {}
    for (p, q), c in g.coeffs.items():
        slices.setdefault(p, {})[q] = c
    out: Dict[Tuple[int, int], DFun] = {}
    fm = mu_floor
    for p, sl in slices.items():
        ser = _shift_series(LambdaSeries(ctx, sl, g.floors[1]), r, mu_floor)
        if ser.floor is not None:
            fm = ser.floor if fm is None else max(fm, ser.floor)
        for q, c in ser.coeffs.items():
            out[(p, q)] = c
    if not slices and g.floors[1] is not None:
        v = g.floors[1] + (r if r > 0 else 0)
        fm = v if fm is None else max(fm, v)
    return BiSeries(ctx, out, (g.floors[0], fm))


def _grid_trinomial(g: BiSeries, r: int, lam_floor: int, mu_floor: int) -> BiSeries:
    """(l+m+d)^r on a grid: sum_k binom(r,k) (m+d)^k l^(r-k)."""
    ctx = g.ctx
    if not g.coeffs:
        fl = g.floors[0]
        fl = lam_floor if fl is None else max(fl, lam_floor)
        return BiSeries(ctx, {}, (fl, g.floors[1]))
    top_l = max(p for p, _ in g.coeffs)
    kmax = r if r >= 0 else top_l + r - lam_floor
    if kmax < 0:
        return BiSeries(ctx, {}, (lam_floor, g.floors[1]))
    acc = None
    for k in range(kmax + 1):
        b = binom(r, k)
        if b == 0:
            continue
        part = _grid_mu_shift(g, k, mu_floor)
        part = BiSeries(ctx,
                        {(p + r - k, q): (c if b == 1 else c * Q(b))
                         for (p, q), c in part.coeffs.items()
                         if p + r - k >= lam_floor},
                        (max(lam_floor,
                             part.floors[0] + r - k if part.floors[0] is not None
                             else lam_floor),
                         part.floors[1]))
        acc = part if acc is None else acc + part
    if acc is None:
        acc = BiSeries(ctx, {}, (lam_floor, g.floors[1]))
    # unknown l-content of g also shifts: floor rises by r-0 at worst for r>0
    if g.floors[0] is not None and r > 0:
        fl = max(acc.floors[0] if acc.floors[0] is not None else lam_floor,
                 g.floors[0] + r)
        acc = BiSeries(ctx, acc.coeffs, (fl, acc.floors[1]))
    return acc


# ---------------------------------------------------------------------------
# the engine


class JacobiEngine:
    """Per-structure state for the generator-triple Jacobi checks."""

    def __init__(self, H, floors):
        from .brackets import SymbolTable
        self.terms = atoms_of(H)
        self.ctx = self.terms[0][1].ctx
        self.ell = self.terms[0][1].ell
        self.floors = floors
        fl, fm = floors
        probe = SymbolTable(H, min(fl, fm) - 2)
        self.sym_top = max((int(max(e.coeffs)) for row in probe.entries for e in row
                            if e.coeffs), default=0)
        dmax = 0
        for row in probe.entries:
            for e in row:
                for c in e.coeffs.values():
                    d = c.dord()
                    if d != NEG_INF:
                        dmax = max(dmax, int(d))
        self.dmax = dmax
        depth = min(fl, fm) - dmax - self.sym_top - 2
        self.sym = SymbolTable(H, depth)
        self._t1_cache = {}
        self._paths = []
        for coeff, chain in self.terms:
            for r0, c0, ats in chain.scalar_paths():
                self._paths.append((coeff, r0, c0, ats))

    # -- brackets of plain functions ------------------------------------------

    def _bracket_gen_fun(self, i, f: DFun, floor: int) -> LambdaSeries:
        """{u_i v f} to the floor."""
        from .brackets import master_bracket
        ui = [{0: self.ctx.one()} if r == i else {} for r in range(self.ell)]
        g_parts = [_partials_cached(f, r) for r in range(self.ell)]
        if all(not ps for ps in g_parts):
            return LambdaSeries.zero(self.ctx, None)
        return master_bracket(self.sym, ui, g_parts, floor)

    def _bracket_fun_gen(self, f: DFun, k, floor: int) -> LambdaSeries:
        """{f v u_k} to the floor."""
        from .brackets import master_bracket
        uk = [{0: self.ctx.one()} if r == k else {} for r in range(self.ell)]
        f_parts = [_partials_cached(f, r) for r in range(self.ell)]
        if all(not ps for ps in f_parts):
            return LambdaSeries.zero(self.ctx, None)
        return master_bracket(self.sym, f_parts, uk, floor)

    def _path_value(self, atoms, floor: int) -> LambdaSeries:
        """The symbol value of a scalar atom suffix, as a series."""
        ctx = self.ctx
        val = LambdaSeries.of_fun(ctx.one())
        for kind, data in reversed(atoms):
            if kind == "d":
                val = _shift_series(val, data, floor if data < 0 else None)
            else:
                val = val.scale(data)
        return val

    # -- first term -------------------------------------------------------------

    def t1_matrix(self, i) -> List[List[BiSeries]]:
        """Grids of {u_i l {u_j m u_k}}, entry [k][j], operator-form route."""
        if i in self._t1_cache:
            return self._t1_cache[i]
        fl, fm = self.floors
        ell = self.ell
        zero = BiSeries.zero(self.ctx, (fl, fm))
        total = [[zero for _ in range(ell)] for _ in range(ell)]
        for coeff, k0, j0, ats in self._paths:
            up = sum(d for kind, d in ats if kind == "d" and d > 0)
            down = sum(-d for kind, d in ats if kind == "d" and d < 0)
            grid = None
            for margin in (down + 2, 3 * (down + 4) + self.dmax):
                cand = self._t1_path(i, ats, fl - up - 1, fm - margin)
                if cand.accurate_at((fl, fm)):
                    grid = cand
                    break
            if grid is None:
                raise InsufficientTruncation("first Jacobi term did not reach floors")
            if not coeff.is_one():
                grid = _grid_scale_fun(grid, coeff)
            total[k0][j0] = total[k0][j0] + grid
        self._t1_cache[i] = total
        return total

    def _t1_path(self, i, atoms, lam_floor, mu_floor) -> BiSeries:
        """{u_i l (value of scalar atom chain at m)} by Leibniz + shift rules."""
        ctx = self.ctx
        cur = BiSeries.zero(ctx, (lam_floor, None))
        suffix = LambdaSeries.of_fun(ctx.one())  # mu-series value of the suffix
        for kind, data in reversed(atoms):
            if kind == "d":
                cur = _grid_trinomial(cur, data, lam_floor, mu_floor)
                suffix = _shift_series(suffix, data, mu_floor if data < 0 else None)
            else:
                f = data
                br = self._bracket_gen_fun(i, f, lam_floor)
                cur = _grid_scale_fun(cur, f)
                if br.coeffs or br.floor is not None:
                    cur = cur + _grid_mul_mu_series(_grid_of_lambda(br, None), suffix)
                suffix = suffix.scale(f)
        return cur

    # -- second term -------------------------------------------------------------

    def t2_grid(self, i, j, k) -> BiSeries:
        from .brackets import master_bracket
        ctx = self.ctx
        fl, fm = self.floors
        uj = [{0: ctx.one()} if r == j else {} for r in range(self.ell)]
        inner = self.sym.entry(k, i)
        coeffs: Dict[Tuple[int, int], DFun] = {}
        fm_out = fm
        for p, e in inner.coeffs.items():
            if p < fl:
                continue
            eparts = [_partials_cached(e, r) for r in range(self.ell)]
            if all(not ps for ps in eparts):
                continue
            ser = master_bracket(self.sym, uj, eparts, fm)
            if ser.floor is not None:
                fm_out = max(fm_out, ser.floor)
            for q, c in ser.coeffs.items():
                key = (p, q)
                acc = coeffs.get(key)
                acc = c if acc is None else acc + c
                if acc.is_zero():
                    coeffs.pop(key, None)
                else:
                    coeffs[key] = acc
        return BiSeries(ctx, coeffs, (fl, fm_out))

    # -- third term --------------------------------------------------------------

    def t3_grid(self, i, j, k) -> BiSeries:
        fl, fm = self.floors
        total = BiSeries.zero(self.ctx, (fl, fm))
        one = BiSeries(self.ctx, {(0, 0): self.ctx.one()}, (None, None))
        base = self.sym_top + self.dmax + 2
        for coeff, r0, c0, ats in self._paths:
            if r0 != j or c0 != i:
                continue
            down = sum(-d for kind, d in ats if kind == "d" and d < 0)
            grid = None
            for extra in (0, 8):
                lam_work = fl - base - down - extra
                mu_work = fm - (fl - lam_work) - self.sym_top - down - 4 - extra
                cand = self._t3_path(ats, k, one, lam_work, mu_work)
                if cand.accurate_at((fl, fm)):
                    grid = cand
                    break
            if grid is None:
                raise InsufficientTruncation("third Jacobi term did not reach floors")
            if not coeff.is_one():
                grid = _grid_scale_fun(grid, coeff)
            total = total + grid
        return total

    def _t3_path(self, atoms, k, carrier: BiSeries, lam_floor, mu_floor) -> BiSeries:
        """{(value of atoms at l)_s u_k} -> carrier, with s = l+m+d."""
        ctx = self.ctx
        if not atoms:
            return BiSeries.zero(ctx, (lam_floor, carrier.floors[1]))
        kind, data = atoms[0]
        rest = atoms[1:]
        if kind == "d":
            carrier2 = _grid_mu_shift(carrier, data, mu_floor)
            if data % 2:
                carrier2 = _grid_scale_fun(carrier2, ctx.const(-1))
            return self._t3_path(rest, k, carrier2, lam_floor, mu_floor)
        f = data
        # piece 1: {f_s u_k} -> (suffix value * carrier)
        xval = self._path_value(rest, lam_floor)
        prod = _grid_mul_lambda_series(carrier, xval)
        ptop = max((p for p, _ in prod.coeffs), default=0)
        nu_floor = self.floors[0] - max(0, ptop) - 1
        dser = self._bracket_fun_gen(f, k, nu_floor)
        piece1 = BiSeries.zero(ctx, (lam_floor, prod.floors[1]))
        for r, dr in dser.coeffs.items():
            t = _grid_trinomial(prod, r, lam_floor, mu_floor)
            piece1 = piece1 + _grid_scale_fun(t, dr)
        if dser.floor is not None and prod.coeffs:
            # unknown nu-powers below dser.floor reach lambda <= dser.floor+ptop-1
            fl2 = dser.floor + ptop
            piece1 = BiSeries(ctx, piece1.coeffs,
                              (max(piece1.floors[0], fl2)
                               if piece1.floors[0] is not None else fl2,
                               piece1.floors[1]))
        # piece 2: {(rest value)_s u_k} -> (f * carrier)
        piece2 = self._t3_path(rest, k, _grid_scale_fun(carrier, f),
                               lam_floor, mu_floor)
        return piece1 + piece2

    # -- the verdict ----------------------------------------------------------------

    def jacobiator(self, i, j, k) -> BiSeries:
        T1 = self.t1_matrix(i)[k][j]
        T2 = self.t2_grid(i, j, k)
        T3 = self.t3_grid(i, j, k)
        return T1 - T2 - T3


_PARTIALS_CACHE: Dict[Tuple[int, int], Tuple[DFun, Dict[int, DFun]]] = {}


def _partials_cached(f: DFun, i):
    key = (id(f), i)
    hit = _PARTIALS_CACHE.get(key)
    if hit is not None and hit[0] is f:
        return hit[1]
    out = {}
    for jj, n in f.jet_vars():
        if jj != i:
            continue
        p = f.partial(i, n)
        if not p.is_zero():
            out[n] = p
    _PARTIALS_CACHE[key] = (f, out)
    if len(_PARTIALS_CACHE) > 200000:
        _PARTIALS_CACHE.clear()
    return out
