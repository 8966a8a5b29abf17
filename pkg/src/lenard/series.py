"""Laurent series in the bracket variables.

LambdaSeries: a map power -> coefficient with an accuracy floor (None =
every stored coefficient list is complete).  BiSeries: the same in two
variables, used as the common comparison domain for the Jacobi identity;
(l+m)^q with q < 0 is expanded by the geometric series in m/l, so negative
powers of the second variable never arise from that substitution.
"""

from __future__ import annotations

from fractions import Fraction as Q
from typing import Dict, Optional, Tuple

from .field import DFun, NEG_INF
from .operators import binom


def _jf(a, b):
    """Join two floors (None = exact)."""
    if a is None:
        return b
    if b is None:
        return a
    return max(a, b)


class LambdaSeries:
    __slots__ = ("ctx", "coeffs", "floor")

    def __init__(self, ctx, coeffs: Dict[int, DFun], floor: Optional[int]):
        self.ctx = ctx
        self.coeffs = {p: c for p, c in coeffs.items()
                       if not c.is_zero() and (floor is None or p >= floor)}
        self.floor = floor

    @classmethod
    def zero(cls, ctx, floor=None):
        return cls(ctx, {}, floor)

    @classmethod
    def of_fun(cls, f: DFun, power=0):
        return cls(f.ctx, {power: f}, None)

    def is_zero_to(self, floor):
        if self.floor is not None and self.floor > floor:
            return False
        return all(c.is_zero() for p, c in self.coeffs.items() if p >= floor)

    def top(self):
        return max(self.coeffs) if self.coeffs else NEG_INF

    def __add__(self, other):
        out = dict(self.coeffs)
        for p, c in other.coeffs.items():
            s = out.get(p)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(p, None)
            else:
                out[p] = s
        return LambdaSeries(self.ctx, out, _jf(self.floor, other.floor))

    def __neg__(self):
        return LambdaSeries(self.ctx, {p: -c for p, c in self.coeffs.items()}, self.floor)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, f: DFun):
        return LambdaSeries(self.ctx, {p: f * c for p, c in self.coeffs.items()},
                            self.floor)

    def shift_power(self, k):
        """Multiply by lambda^k."""
        fl = None if self.floor is None else self.floor + k
        return LambdaSeries(self.ctx, {p + k: c for p, c in self.coeffs.items()}, fl)

    def apply_shift(self, n, sign=1):
        """Apply (sign*(lambda + d))^n for n >= 0: binomial expansion with
        total derivatives acting on the coefficients."""
        if n < 0:
            raise ValueError("apply_shift needs n >= 0")
        out: Dict[int, DFun] = {}
        fl = None if self.floor is None else self.floor + n
        sgn = Q(1) if sign == 1 or n % 2 == 0 else Q(-1)
        for p, c in self.coeffs.items():
            tower = c
            for k in range(n + 1):
                if k > 0:
                    tower = tower.total_derivative()
                if tower.is_zero():
                    break
                b = binom(n, k)
                term = tower if b == 1 else tower * Q(b)
                deg = p + n - k
                s = out.get(deg)
                s = term if s is None else s + term
                if s.is_zero():
                    out.pop(deg, None)
                else:
                    out[deg] = s
        res = LambdaSeries(self.ctx, out, fl)
        return res if sgn == 1 else res.scale(self.ctx.const(sgn))

    def truncate(self, floor):
        fl = floor if self.floor is None else max(self.floor, floor)
        return LambdaSeries(self.ctx, {p: c for p, c in self.coeffs.items() if p >= fl},
                            fl)

    def substitute_sum(self, floors: Tuple[int, int]) -> "BiSeries":
        """lambda -> (lambda + mu), expanding negative powers in mu/lambda."""
        fl, fm = floors
        out: Dict[Tuple[int, int], DFun] = {}
        for q, c in self.coeffs.items():
            if q >= 0:
                kmax = q
            else:
                kmax = q - fl  # lambda power q - k >= fl
            for k in range(0, kmax + 1):
                lp = q - k
                if lp < fl or k < fm:
                    continue
                b = binom(q, k)
                term = c if b == 1 else c * Q(b)
                key = (lp, k)
                s = out.get(key)
                s = term if s is None else s + term
                if s.is_zero():
                    out.pop(key, None)
                else:
                    out[key] = s
        bfl = fl if self.floor is None else None
        if self.floor is not None:
            # unknown powers q < self.floor reach lambda-powers <= q <= floor-1
            bfl = max(fl, self.floor)
        return BiSeries(self.ctx, out, (bfl, fm))

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for p in sorted(self.coeffs, reverse=True):
            parts.append("(%s) l^%d" % (self.coeffs[p], p))
        s = " + ".join(parts)
        if self.floor is not None:
            s += "  [floor %d]" % self.floor
        return s

    __repr__ = __str__


class BiSeries:
    """Series in two bracket variables, floors (lambda, mu)."""

    __slots__ = ("ctx", "coeffs", "floors")

    def __init__(self, ctx, coeffs, floors):
        self.ctx = ctx
        fl, fm = floors
        self.coeffs = {pq: c for pq, c in coeffs.items() if not c.is_zero()
                       and (fl is None or pq[0] >= fl) and (fm is None or pq[1] >= fm)}
        self.floors = floors

    @classmethod
    def zero(cls, ctx, floors):
        return cls(ctx, {}, floors)

    @classmethod
    def from_lambda_outer(cls, series_by_mu_power, floors):
        """Assemble sum_q (lambda-series)_q mu^q."""
        ctx = None
        out = {}
        fl = None
        for q, ser in series_by_mu_power.items():
            ctx = ser.ctx
            fl = _jf(fl, ser.floor)
            for p, c in ser.coeffs.items():
                key = (p, q)
                s = out.get(key)
                s = c if s is None else s + c
                if not s.is_zero():
                    out[key] = s
                else:
                    out.pop(key, None)
        lam_floor = floors[0] if fl is None else max(floors[0], fl)
        return cls(ctx, out, (lam_floor, floors[1]))

    def join_floors(self, other):
        a, b = self.floors, other.floors
        return (_jf(a[0], b[0]), _jf(a[1], b[1]))

    def __add__(self, other):
        out = dict(self.coeffs)
        for pq, c in other.coeffs.items():
            s = out.get(pq)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(pq, None)
            else:
                out[pq] = s
        return BiSeries(self.ctx, out, self.join_floors(other))

    def __neg__(self):
        return BiSeries(self.ctx, {pq: -c for pq, c in self.coeffs.items()}, self.floors)

    def __sub__(self, other):
        return self + (-other)

    def nonzero_witness(self, floors):
        """A ((lpow, mpow), coefficient) surviving above the floors, or None."""
        fl, fm = floors
        for (p, q), c in sorted(self.coeffs.items(), reverse=True):
            if p >= fl and q >= fm and not c.is_zero():
                return (p, q), c
        return None

    def accurate_at(self, floors):
        fl, fm = floors
        ok_l = self.floors[0] is None or self.floors[0] <= fl
        ok_m = self.floors[1] is None or self.floors[1] <= fm
        return ok_l and ok_m

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for (p, q) in sorted(self.coeffs, reverse=True):
            parts.append("(%s) l^%d m^%d" % (self.coeffs[(p, q)], p, q))
        return " + ".join(parts)

    __repr__ = __str__
