"""The Liouville-type family: recursion, closed forms, classification.

Linear combinations of d, d^-1 and u' d^-1 u' split into five behaviours
depending on which coefficients vanish; the engine both looks them up in
the zero-pattern table and re-derives them by running the recursion.
"""

from lenard.chains import extend_left, extend_right
from lenard.liouville import (classification_table, classify,
                              closed_form_family, empirical_class)
from lenard.presets import liouville_spaces, load_liouville
from lenard.solve import AnsatzSpace

print("-- one S-type step: the first hierarchy member of case (iii) --")
pre = load_liouville("iii")
ctx = pre.ctx
spF, spG = liouville_spaces(ctx, pre.extras["b"][1], pre.extras["b"][2])
extend_right(pre.chain, spF, spG, steps=1)
print("   P0 =", pre.chain.steps[-1].P[0])
print("   both links verified:", pre.chain.verify())

print("-- a bounded closed-form family (a1 = 0), checked on both links --")
ctx5, seq = closed_form_family("odd-powers",
                               {"a2": None, "a3": None, "b2": None}, 3)
for k, (P, h) in enumerate(seq):
    print("   P_%d = %s" % (k - 1, P))

print("-- going left can block: the cubic non-evolutionary equation --")
pre = load_liouville("iv")
ctx = pre.ctx
sp = AnsatzSpace(ctx, 1, 2, x_power=1)
extend_left(pre.chain, sp, sp, steps=2, left_P=[ctx.u(1)])
print("   status:", pre.chain.left_status.kind)
print("   nonlocal field:", pre.chain.left_status.blocked_field)
print("   equation:", pre.chain.left_status.equation.text())

print("-- the zero-pattern classification --")
table = classification_table()
counts = {}
for _, _, cls in table:
    counts[cls] = counts.get(cls, 0) + 1
print("  ", counts)
a, b = (1, 0, 0), (0, 1, 1)
print("   b=(0,1,1), a=(1,0,0):", classify(tuple(map(bool, a)),
                                           tuple(map(bool, b))),
      "| engine:", empirical_class(a, b))
