"""Skewadjointness, Jacobi and compatibility, floor-qualified.

Non-local verdicts are always relative to a truncation floor; the checker
evaluates the three Jacobi terms in one fixed completion, treating the
structure in operator form so that nothing is expanded into the wrong
series.  A genuine failure comes back with the offending generator triple
and a nonzero coefficient.
"""

from lenard import Context
from lenard.brackets import (check_compatible, check_jacobi, check_skewadjoint,
                             lambda_bracket)
from lenard.jacobi import AtomChain, AtomStructure
from lenard.operators import OperatorSum

ctx = Context(("u",))
u, u1, u2 = ctx.u(0), ctx.u(1), ctx.u(2)


def chain(*atoms):
    return AtomStructure(AtomChain(ctx, list(atoms)))


L1 = chain(("d", 1))
L2 = chain(("d", -1))
L3 = chain(("mult", [[u1]]), ("d", -1), ("mult", [[u1]]))

print("-- the bracket on generators is the symbol --")
print("   {u_l u} for u' d^-1 u' :", lambda_bracket(L3, u, u, -4))

print("-- single-structure verdicts --")
for name, L in (("d", L1), ("d^-1", L2), ("u' d^-1 u'", L3)):
    skew = check_skewadjoint(L, -8)
    jac = check_jacobi(L, (-6, -6))
    print("   %-12s skew: %-5s jacobi: %s" % (name, skew.holds, jac.holds))

print("-- pairwise compatibility --")
for a, b, tag in ((L1, L2, "d, d^-1"), (L1, L3, "d, Sokolov"),
                  (L2, L3, "d^-1, Sokolov")):
    print("   %-14s" % tag, check_compatible(a, b, (-6, -6)).holds)

print("-- a skewadjoint operator that is NOT Poisson --")
bad = OperatorSum([
    (ctx.one(), chain(("mult", [[u1]]), ("d", 1))),
    (ctx.const("1/2"), chain(("mult", [[u2]]))),
])
verdict = check_jacobi(bad, (-6, -6))
print("   u' d + u''/2 holds:", verdict.holds)
print("   witness:", {k: str(v) for k, v in verdict.witness.items()})
