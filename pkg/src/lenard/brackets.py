"""Non-local lambda-brackets and the Poisson checks.

The bracket {f_l g} of a structure H is evaluated by the master formula

    sum over i, j, m, n of
        dg/du_j^(n) (l+d)^n H_ji(l+d) (-l-d)^m df/du_i^(m),

with H's symbol expanded deep enough that the requested accuracy floor of
the result is certified: the expansion depth is the target floor minus the
maximal m and n that occur.  Jacobi and compatibility verdicts are always
floor-qualified; the comparison domain expands (l+mu)^q by the geometric
series in mu/l.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .errors import InvalidWitness
from .field import DFun, NEG_INF, vec_is_zero
from .functional import LocalFunctional, is_null_functional, variational_derivative
from .operators import MatrixPsdOp, OperatorSum, structure_sum
from .series import BiSeries, LambdaSeries

DEFAULT_JACOBI_FLOORS = (-8, -8)


def _jet_partials(f: DFun, i):
    """{n: df/du_i^(n)} with zero entries dropped."""
    out = {}
    for j, n in f.jet_vars():
        if j != i:
            continue
        p = f.partial(i, n)
        if not p.is_zero():
            out[n] = p
    return out


class SymbolTable:
    """The expanded symbol matrix of a structure, at one depth."""

    __slots__ = ("ctx", "ell", "floor", "entries")

    def __init__(self, H, floor):
        S = structure_sum(H)
        self.ctx = S.ctx
        self.ell = S.ell
        self.floor = floor
        mat = S.expand(floor)
        self.entries = [[mat.entries[r][c].symbol_series(floor)
                         for c in range(self.ell)] for r in range(self.ell)]

    def entry(self, j, i) -> LambdaSeries:
        return self.entries[j][i]


def apply_symbol(sym: LambdaSeries, t: LambdaSeries, floor) -> LambdaSeries:
    """H(l+d) applied to a series: sum_q h_q (l+d)^q t, to the floor."""
    from fractions import Fraction as Q

    from .operators import binom
    ctx = sym.ctx
    if not t.coeffs:
        fl = None if sym.floor is None and t.floor is None else floor
        return LambdaSeries.zero(ctx, fl)
    t_top = int(t.top())
    acc: Dict[int, DFun] = {}
    for q, h in sym.coeffs.items():
        if q + t_top < floor:
            continue
        for p, c in t.coeffs.items():
            kmax = q if q >= 0 else q + p - floor
            tower = c
            for k in range(kmax + 1):
                if k > 0:
                    tower = tower.total_derivative()
                    if tower.is_zero():
                        break
                deg = q + p - k
                if deg < floor:
                    continue
                b = binom(q, k)
                term = h * tower if b == 1 else h * tower * Q(b)
                s = acc.get(deg)
                s = term if s is None else s + term
                if s.is_zero():
                    acc.pop(deg, None)
                else:
                    acc[deg] = s
    # accuracy: unknown symbol terms (q < sym.floor) pollute up to sym.floor+t_top-1;
    # unknown t terms pollute up to sym_top + t.floor - 1
    fl = floor
    if sym.floor is not None:
        fl = max(fl, sym.floor + t_top)
    if t.floor is not None and sym.coeffs:
        fl = max(fl, int(max(sym.coeffs)) + t.floor)
    return LambdaSeries(ctx, acc, fl)


def master_bracket(sym: SymbolTable, f_parts, g_parts, floor) -> LambdaSeries:
    """The master formula given precomputed partials of f and g."""
    ctx = sym.ctx
    ell = sym.ell
    # t_i = sum_m (-l-d)^m f_{i,m}
    tvec = []
    for i in range(ell):
        t = LambdaSeries.zero(ctx, None)
        for m, fm in f_parts[i].items():
            t = t + LambdaSeries.of_fun(fm).apply_shift(m, sign=-1)
        tvec.append(t)
    n_max = 0
    for j in range(ell):
        for n in g_parts[j]:
            n_max = max(n_max, n)
    out = LambdaSeries.zero(ctx, None)
    for j in range(ell):
        if not g_parts[j]:
            continue
        s = LambdaSeries.zero(ctx, None)
        for i in range(ell):
            if not tvec[i].coeffs:
                continue
            s = s + apply_symbol(sym.entry(j, i), tvec[i], floor - n_max)
        for n, gn in g_parts[j].items():
            out = out + s.apply_shift(n).scale(gn)
    return out.truncate(floor)


def lambda_bracket(H, f: DFun, g: DFun, floor: int) -> LambdaSeries:
    """{f_l g}_H to the floor."""
    S = structure_sum(H)
    ell = S.ell
    f_parts = [_jet_partials(f, i) for i in range(ell)]
    g_parts = [_jet_partials(g, j) for j in range(ell)]
    M = max([m for ps in f_parts for m in ps], default=0)
    N = max([n for ps in g_parts for n in ps], default=0)
    if all(not ps for ps in f_parts) or all(not ps for ps in g_parts):
        return LambdaSeries.zero(S.ctx, None)
    sym = SymbolTable(S, floor - M - N)
    return master_bracket(sym, f_parts, g_parts, floor)


# ---------------------------------------------------------------------------
# verdicts


@dataclass
class Verdict:
    """Floor-qualified outcome of a structure check."""
    check: str
    holds: bool
    floors: Tuple
    witness: Optional[dict] = None
    structure: str = ""

    def as_record(self):
        rec = {"property": self.check, "floor": list(self.floors),
               "verdict": "holds-to-floor" if self.holds else "fails",
               "structure": self.structure}
        if self.witness is not None:
            rec["witness"] = {k: str(v) for k, v in self.witness.items()}
        return rec

    def __bool__(self):
        return self.holds


def check_skewadjoint(H, floor: int = -8) -> Verdict:
    """H* = -H, compared as expansions to the floor."""
    S = structure_sum(H)
    total = S.expand(floor) + S.adjoint_sum().expand(floor)
    if total.eq_to_floor(MatrixPsdOp.zero(S.ctx, S.ell, S.ell, floor), floor):
        return Verdict("skewadjoint", True, (floor,))
    wit = None
    for r in range(S.ell):
        for c in range(S.ell):
            for n, cf in sorted(total.entries[r][c].coeffs.items(), reverse=True):
                if n >= floor and not cf.is_zero():
                    wit = {"entry": (r, c), "degree": n, "coefficient": cf}
                    break
            if wit:
                break
        if wit:
            break
    return Verdict("skewadjoint", False, (floor,), wit)


def check_jacobi(H, floors: Tuple[int, int] = DEFAULT_JACOBI_FLOORS) -> Verdict:
    """The Jacobi identity on every generator triple (floor-qualified)."""
    from .errors import InsufficientTruncation
    from .jacobi import JacobiEngine
    eng = JacobiEngine(H, floors)
    for i in range(eng.ell):
        for j in range(eng.ell):
            for k in range(eng.ell):
                diff = eng.jacobiator(i, j, k)
                if not diff.accurate_at(floors):
                    raise InsufficientTruncation(
                        "jacobiator accuracy %s short of floors %s"
                        % (diff.floors, floors))
                wit = diff.nonzero_witness(floors)
                if wit is not None:
                    (lp, mp), coeff = wit
                    return Verdict("jacobi", False, floors,
                                   {"triple": (i, j, k), "lambda_power": lp,
                                    "mu_power": mp, "coefficient": coeff})
    return Verdict("jacobi", True, floors)


def check_compatible(H, K, floors: Tuple[int, int] = DEFAULT_JACOBI_FLOORS) -> Verdict:
    """Jacobi for H + K; with H and K Poisson this certifies all aH + bK."""
    total = structure_sum(H) + structure_sum(K)
    v = check_jacobi(total, floors)
    return Verdict("compatible", v.holds, floors, v.witness)


# ---------------------------------------------------------------------------
# Lie structures on vector fields and functionals


def evolutionary_bracket(P, Qv):
    """[P, Q]_i = sum (dQ_i/du_j^(n)) d^n P_j - (dP_i/du_j^(n)) d^n Q_j."""
    ctx = P[0].ctx
    ell = len(P)
    towers_P = [_derivative_tower(p) for p in P]
    towers_Q = [_derivative_tower(q) for q in Qv]
    out = []
    for i in range(ell):
        acc = ctx.zero()
        for jj in range(ell):
            for n, c in _jet_partials(Qv[i], jj).items():
                acc = acc + c * _tower_get(towers_P[jj], n)
            for n, c in _jet_partials(P[i], jj).items():
                acc = acc - c * _tower_get(towers_Q[jj], n)
        out.append(acc)
    return out


def _derivative_tower(f):
    return [f]


def _tower_get(tower, n):
    while len(tower) <= n:
        tower.append(tower[-1].total_derivative())
    return tower[n]


def functional_action(P, h: LocalFunctional) -> LocalFunctional:
    """phi(P) int h = int P . delta h / delta u."""
    grad = h.gradient()
    if len(P) != len(grad):
        raise ValueError("vector length mismatch")
    ctx = h.ctx
    acc = ctx.zero()
    for p, g in zip(P, grad):
        acc = acc + p * g
    return LocalFunctional(acc)


def functional_bracket(H, f: LocalFunctional, g: LocalFunctional, P,
                       witnesses=None) -> LocalFunctional:
    """{int f, int g}_H = int P . delta g/delta u for an association witness P."""
    if witnesses is not None:
        from .chains import verify_association
        if not verify_association(H, f, P, witnesses):
            raise InvalidWitness("P is not an association witness for the functional")
    return functional_action(P, g)
