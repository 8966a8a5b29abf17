"""The two-component hierarchy behind the cubic Schroedinger-type flows.

Both links of every step solve in closed form here (the denominators are
triangular), so the recursion runs in milliseconds and each step is an
exact association certificate.
"""

from lenard.chains import extend_right, predict_dord, verify_higher_structures
from lenard.functional import is_null_functional
from lenard.presets import load_nls, nls_h_solver, nls_k_solver, nls_spaces

pre = load_nls()
ctx = pre.ctx
spF, spG = nls_spaces(ctx)
extend_right(pre.chain, spF, spG, steps=2,
             k_solver=nls_k_solver(pre), h_solver=nls_h_solver(pre))

print("-- the chain --")
for s in pre.chain.steps:
    print("   n=%d  dords=%s" % (s.index, s.dords()))
    print("        P =", [str(c) for c in s.P])

print("-- the first nontrivial flow (a2=0, a3=2a, b3=2b gives the familiar")
print("   cubic system; here the parameters stay symbolic) --")
P2 = pre.chain.steps[2].P
print("   u_t =", P2[0])
print("   v_t =", P2[1])

print("-- involution of the charges, both brackets --")
steps = {s.index: s for s in pre.chain.steps}
ok = True
for m in (0, 1, 2):
    for n in (0, 1, 2):
        for P in ((steps[m + 1].P if m + 1 in steps else None), steps[m].P):
            if P is None:
                continue
            density = sum((p * g for p, g in zip(P, steps[n].grad)),
                          ctx.zero())
            ok &= is_null_functional(density)
print("   all pairs m,n <= 2 in involution:", ok)

print("-- the squared structure: h_0 connects to P_2 --")
print("  ", verify_higher_structures(pre.chain, 2))
