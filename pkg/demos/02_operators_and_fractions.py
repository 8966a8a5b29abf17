"""Pseudodifferential operators, adjoints and fractional decompositions.

The three scalar structures d, d^-1 and u' d^-1 u' all arise as fractions
A B^-1 of differential operators; the engine expands fractions on demand
and verifies decompositions by comparing truncated Laurent series.
"""

from lenard import Context
from lenard.jacobi import AtomChain, AtomStructure
from lenard.operators import (OperatorSum, RationalOpPair, ScalarPsdOp,
                              right_lcm, skew_divide, verify_fraction)

ctx = Context(("u",), ("x1", "x2", "x3"))
u1, u2 = ctx.u(1), ctx.u(2)
x1, x2, x3 = ctx.param("x1"), ctx.param("x2"), ctx.param("x3")
D = ScalarPsdOp.d(ctx)
m = ScalarPsdOp.of_fun

print("-- composition by the symbol rule --")
print("   d o u' =", D.compose(m(u1)))
print("   d^-1 o u' =", ScalarPsdOp.d(ctx, -1).compose(m(u1), -4))

print("-- adjoints --")
sok = m(u1).compose(ScalarPsdOp.d(ctx, -1), -6).compose(m(u1))
print("   (u' d^-1 u')* + self vanishes to -4:",
      (sok.adjoint(-4) + sok.truncate(-4)).eq_to_floor(ScalarPsdOp.zero(ctx), -4))

print("-- the combined fraction for x1 d + x2 d^-1 + x3 u' d^-1 u' --")
A = D.compose(D).compose(m(1 / u2)).compose(D).scale(x1) \
    + ScalarPsdOp(ctx, {1: (x2 + x3 * u1 ** 2) / u2, 0: -x3 * u1})
B = D.compose(m(1 / u2)).compose(D)
combo = OperatorSum([
    (x1, AtomStructure(AtomChain(ctx, [("d", 1)]))),
    (x2, AtomStructure(AtomChain(ctx, [("d", -1)]))),
    (x3, AtomStructure(AtomChain(ctx, [("mult", [[u1]]), ("d", -1),
                                       ("mult", [[u1]])]))),
])
print("   verified to floor -8:",
      verify_fraction(combo, RationalOpPair.fraction(A, B), -8))

print("-- scalar skew Euclid --")
q, r = skew_divide(D.compose(D).compose(m(1 / u1)), D)
print("   quotient:", q)
print("   remainder:", r)
Bt, At = right_lcm(m(u1), D)
print("   right lcm cofactors of (u', d):", Bt, "|", At)
print("   common multiple:", m(u1).compose(Bt))
