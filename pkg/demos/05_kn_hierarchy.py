"""The third-order hierarchy over the Sokolov / Dorfman pair.

The seed chain climbs through 1, u, u^2, u' before the first genuinely
nonlinear member appears; its differential orders then march up by two per
step, which is how infinite-dimensionality is certified.
"""

from lenard.chains import extend_left, extend_right, predict_dord, \
    verify_higher_structures
from lenard.presets import load_kn, load_kn0
from lenard.solve import AnsatzSpace

pre = load_kn(a_value=1)
ctx = pre.ctx
print("-- the seed chain (verified witnesses) --")
for s in pre.chain.steps:
    print("   n=%d  P=%s  h=%s" % (s.index, [str(c) for c in s.P], s.h))

print("-- three solved steps --")
extend_right(pre.chain, None, None, steps=3,
             den_kernel=[[f] for f in pre.extras["kernel_B"]])
for s in pre.chain.steps[4:]:
    print("   n=%d  dord(P)=%s dord(grad h)=%s" % ((s.index,) + s.dords()))
print("   first equation: u_t =", pre.chain.steps[4].P[0])

print("-- order bookkeeping --")
pred = predict_dord(pre.chain)
print("   threshold:", pred["threshold"], "| predictions:", pred["predictions"])

print("-- the squared structure acts one step ahead --")
print("   h_3 relates to P_4 through H:", verify_higher_structures(pre.chain, 1))

print("-- one step back (a != 0): the dual scheme is finite --")
u, u1 = ctx.u(0), ctx.u(1)
spG = AnsatzSpace(ctx, 0, 2)
spF = AnsatzSpace(ctx, 3, 5, denominators=[(u1, 3)], weight_max=3)
extend_left(pre.chain, spG, spF, steps=1, left_P=[ctx.one() + u + u * u])
print("   left status:", pre.chain.left_status.kind,
      "| new gradient:", [str(g) for g in pre.chain.left_steps[-1].grad])

print("-- one step back (a = 0): blocked, a non-evolutionary equation --")
pre0 = load_kn0()
sp = AnsatzSpace(pre0.ctx, 0, 2)
extend_left(pre0.chain, sp, sp, steps=2, left_P=[pre0.ctx.one()])
print("   ", pre0.chain.left_status.equation.text())
