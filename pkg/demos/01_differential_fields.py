"""A walk through the exact differential-function field.

Elements are canonical rational expressions in x, the jets u^(n), named
constants, and a small catalog of adjoined symbols.  Everything here is
exact: no floats, no simplification heuristics.
"""

from lenard import Context
from lenard.functional import (antiderivative, is_null_functional,
                               variational_derivative)

ctx = Context(generators=("u",), parameters=("b2", "b3"))
u, u1, u2 = ctx.u(0), ctx.u(1), ctx.u(2)
x = ctx.x()
b2, b3 = ctx.param("b2"), ctx.param("b3")

print("-- arithmetic is canonical --")
f = (u1 ** 2 - u2 ** 2) / (u1 + u2)
print("   (u'^2 - u''^2)/(u' + u'') =", f)

print("-- the total derivative walks the jets --")
print("   d(u u') =", (u * u1).total_derivative())

print("-- adjoined square root, reduced by its relation --")
s = ctx.adjoin_sqrt(b2 + b3 * u1 ** 2)
print("   s =", s)
print("   ds =", s.total_derivative())
print("   s^2 =", s * s)
print("   1/s =", 1 / s)

print("-- exponentials are Laurent symbols --")
E = ctx.adjoin_exp_u(ctx.const(2))
print("   d exp(2u) =", E.total_derivative())
print("   exp(2u) * exp(2u)^-1 =", E * (1 / E))

print("-- variational derivative --")
h = (u2 / u1) ** 2 / 2
print("   delta/du of (u''/u')^2/2 =", variational_derivative(h)[0])

print("-- the quotient modulo total derivatives --")
print("   int(u' u'') == 0 ?", is_null_functional(u1 * u2))
print("   int(u) == 0 ?", is_null_functional(u))
print("   antiderivative of u^2 u' :", antiderivative(u ** 2 * u1))
