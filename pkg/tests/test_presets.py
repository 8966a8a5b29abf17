"""The catalog self-validates on load."""

import pytest

from lenard.errors import UnknownPreset
from lenard.presets import load_preset, preset_ids


@pytest.mark.parametrize("pid", preset_ids())
def test_preset_loads_and_validates(pid):
    pre = load_preset(pid)
    assert pre.chain.verify()


def test_unknown_preset():
    with pytest.raises(UnknownPreset):
        load_preset("no-such-thing")


def test_kn_fraction_against_sum():
    from lenard.operators import RationalOpPair, verify_fraction
    pre = load_preset("kn")
    frac = RationalOpPair.fraction(pre.H.num_op(), pre.H.den_op())
    assert verify_fraction(pre.extras["H_sum"], frac, -8)


def test_nls_fraction_against_sum():
    from lenard.operators import RationalOpPair, verify_fraction
    pre = load_preset("nls")
    for S, P in ((pre.extras["H_sum"], pre.H), (pre.extras["K_sum"], pre.K)):
        frac = RationalOpPair.fraction(P.num_op(), P.den_op())
        assert verify_fraction(S, frac, -8)


def test_numeric_binding_helper():
    pre = load_preset("kn", a_value=3)
    assert pre.extras["a"] == 3
