"""Lambda brackets, Poisson verdicts, and the Lie structures."""

from fractions import Fraction as Q

import pytest

from lenard.brackets import (check_compatible, check_jacobi, check_skewadjoint,
                             evolutionary_bracket, functional_action,
                             functional_bracket, lambda_bracket)
from lenard.errors import InvalidWitness
from lenard.field import Context, vec_is_zero
from lenard.functional import LocalFunctional
from lenard.jacobi import AtomChain, AtomStructure
from lenard.operators import OperatorSum, RationalOpPair, ScalarPsdOp

from conftest import random_dfun


@pytest.fixture
def trio(ctx):
    u1 = ctx.u(1)

    def chain(*atoms):
        return AtomStructure(AtomChain(ctx, list(atoms)))

    L1 = chain(("d", 1))
    L2 = chain(("d", -1))
    L3 = chain(("mult", [[u1]]), ("d", -1), ("mult", [[u1]]))
    return L1, L2, L3


def test_symbol_on_generators(ctx, trio):
    L1, L2, L3 = trio
    u = ctx.u(0)
    s = lambda_bracket(L1, u, u, -6)
    assert s.coeffs == {1: ctx.one()} or s.coeffs[1].is_one()
    s3 = lambda_bracket(L3, u, u, -4)
    u1, u2 = ctx.u(1), ctx.u(2)
    assert s3.coeffs[-1] == u1 * u1 and s3.coeffs[-2] == -u1 * u2


def test_sesquilinearity(ctx, trio, rng):
    _, _, L3 = trio
    for _ in range(6):
        f = random_dfun(ctx, rng, max_dord=1, max_degree=2)
        g = random_dfun(ctx, rng, max_dord=1, max_degree=2)
        lhs = lambda_bracket(L3, f.total_derivative(), g, -5)
        rhs = lambda_bracket(L3, f, g, -6).shift_power(1).scale(ctx.const(-1))
        assert (lhs - rhs).is_zero_to(-4)


def test_left_leibniz(ctx, trio, rng):
    _, _, L3 = trio
    for _ in range(5):
        f = random_dfun(ctx, rng, max_dord=1, max_degree=1)
        g = random_dfun(ctx, rng, max_dord=1, max_degree=1)
        h = random_dfun(ctx, rng, max_dord=1, max_degree=1)
        lhs = lambda_bracket(L3, f, g * h, -5)
        rhs = lambda_bracket(L3, f, g, -5).scale(h) \
            + lambda_bracket(L3, f, h, -5).scale(g)
        assert (lhs - rhs).is_zero_to(-4)


def test_skewadjoint_verdicts(ctx, trio):
    L1, L2, L3 = trio
    assert check_skewadjoint(L1, -8).holds
    assert check_skewadjoint(L2, -8).holds
    assert check_skewadjoint(L3, -8).holds
    D2 = AtomStructure(AtomChain(ctx, [("d", 2)]))
    v = check_skewadjoint(D2, -8)
    assert not v.holds and v.witness is not None


def test_jacobi_verdicts(ctx, trio):
    L1, L2, L3 = trio
    assert check_jacobi(L1, (-6, -6)).holds
    assert check_jacobi(L2, (-6, -6)).holds
    assert check_jacobi(L3, (-6, -6)).holds


def test_jacobi_failure_witness(ctx):
    u1, u2 = ctx.u(1), ctx.u(2)
    bad = OperatorSum([
        (ctx.one(), AtomStructure(AtomChain(ctx, [("mult", [[u1]]), ("d", 1)]))),
        (ctx.const(Q(1, 2)), AtomStructure(AtomChain(ctx, [("mult", [[u2]])]))),
    ])
    assert check_skewadjoint(bad, -8).holds
    v = check_jacobi(bad, (-6, -6))
    assert not v.holds and v.witness is not None
    assert not v.witness["coefficient"].is_zero()


def test_virasoro_is_poisson(ctx):
    u, u1 = ctx.u(0), ctx.u(1)
    vir = OperatorSum([
        (ctx.one(), AtomStructure(AtomChain(ctx, [("mult", [[u]]), ("d", 1)]))),
        (ctx.const(Q(1, 2)), AtomStructure(AtomChain(ctx, [("mult", [[u1]])]))),
    ])
    assert check_jacobi(vir, (-6, -6)).holds


def test_compatibility_pairs(ctx, trio):
    L1, L2, L3 = trio
    assert check_compatible(L1, L2, (-6, -6)).holds
    assert check_compatible(L1, L3, (-6, -6)).holds
    assert check_compatible(L2, L3, (-6, -6)).holds
    assert check_compatible(L1, L1, (-6, -6)).holds


def test_evolutionary_bracket(ctx, rng):
    u, u1, u3 = ctx.u(0), ctx.u(1), ctx.u(3)
    assert vec_is_zero(evolutionary_bracket([u1], [u1]))
    assert vec_is_zero(evolutionary_bracket([u1], [u3]))
    assert evolutionary_bracket([ctx.one()], [u * u])[0] == 2 * u
    # antisymmetry and Jacobi on random triples
    for _ in range(12):
        P = [random_dfun(ctx, rng, max_dord=2, max_degree=2)]
        Qv = [random_dfun(ctx, rng, max_dord=2, max_degree=2)]
        R = [random_dfun(ctx, rng, max_dord=2, max_degree=2)]
        ab = evolutionary_bracket(P, Qv)
        ba = evolutionary_bracket(Qv, P)
        assert all((x + y).is_zero() for x, y in zip(ab, ba))
        jac = evolutionary_bracket(P, evolutionary_bracket(Qv, R))
        jac = [a + b for a, b in zip(jac, evolutionary_bracket(
            Qv, evolutionary_bracket(R, P)))]
        jac = [a + b for a, b in zip(jac, evolutionary_bracket(
            R, evolutionary_bracket(P, Qv)))]
        assert all(x.is_zero() for x in jac)


def test_functional_action(ctx):
    u, u1 = ctx.u(0), ctx.u(1)
    h = LocalFunctional(u * u / 2)
    assert functional_action([u1], h).is_zero()        # int u u' = 0
    assert functional_action([ctx.one()], h) == LocalFunctional(u)


def test_functional_bracket_skewness(ctx):
    # {int f, int f}_H = 0 with the witness from the Liouville fixtures
    from lenard.presets import load_liouville
    pre = load_liouville("v")
    step = pre.chain.steps[-1]
    bracket = functional_bracket(pre.H, step.h, step.h, step.P)
    assert bracket.is_zero()


def test_functional_bracket_rejects_bad_witness(ctx):
    from lenard.presets import load_liouville
    pre = load_liouville("v")
    step = pre.chain.steps[-1]
    with pytest.raises(InvalidWitness):
        functional_bracket(pre.H, step.h, step.h, [pre.ctx.one()],
                           witnesses=step.witness_H)


def test_functional_bracket_with_unit_field(ctx):
    # bracketing against the zero functional through P = 1 integrates the
    # gradient of the second argument
    from lenard.presets import load_liouville
    pre = load_liouville("v")
    ctxp = pre.ctx
    u = ctxp.u(0)
    g = LocalFunctional(u ** 2 / 2)
    out = functional_action([ctxp.one()], g)
    assert out == LocalFunctional(u)
