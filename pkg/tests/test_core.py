import math

import pytest
from hypothesis import given, strategies as st

from subedit.core import (
    PAPER, SCALED, NoCenteredResidue, ParamError, block_length, ceil_log2, centered_residue,
    derive_params, phi_width_bound, residue_lifts, scaled_overrides,
)


def test_paper_params_n4096():
    p = derive_params(2, 4096)
    assert (p.B, p.C, p.delta) == (12, 320, 3072)
    assert p.m_vt == 2000 * 320 * 4096
    assert (p.m_fsum, p.m_npart, p.K) == (6400, 5, 3)
    assert p.A_f == 8 * 3072 * 320


def test_paper_weights_k3():
    p = derive_params(3, 1024)
    assert (p.B, p.C) == (24, 960)


def test_small_n_caps_block_length():
    p = derive_params(2, 8)
    assert p.delta == 2 * 128 * 3
    assert p.blk == 8


def test_block_length_formula():
    p = derive_params(2, 1 << 20)
    raw = (6 * 9 * p.A_f + 2 * 3 + 2) * p.delta + 4
    assert block_length(3, p.A_f, p.delta, 2, p.n) == min(p.n, raw)
    assert p.blk == min(p.n, raw)


@pytest.mark.parametrize("k,n", [(0, 10), (2, 3), (1, 1)])
def test_rejects_bad_sizes(k, n):
    with pytest.raises(ParamError):
        derive_params(k, n)


def test_scaled_requires_every_override():
    ov = scaled_overrides(2, 24, 8)
    assert derive_params(2, 24, SCALED, ov).blk == 8
    del ov["m_vt"]
    with pytest.raises(ParamError, match="m_vt"):
        derive_params(2, 24, SCALED, ov)


def test_paper_mode_rejects_overrides():
    with pytest.raises(ParamError):
        derive_params(2, 24, PAPER, {"blk": 8})


def test_scaled_mode_validation():
    ov = scaled_overrides(2, 24, 8)
    with pytest.raises(ParamError):
        derive_params(2, 24, SCALED, dict(ov, m_npart=4))
    with pytest.raises(ParamError):
        derive_params(2, 24, SCALED, dict(ov, blk=4))
    with pytest.raises(ParamError):
        derive_params(2, 24, SCALED, dict(ov, blk=25))


def test_derive_is_deterministic():
    assert derive_params(2, 777) == derive_params(2, 777)


def test_locator_hypothesis_threshold():
    # m_vt > 8K^2(2Cn + A_f)  <=>  2000n > 144n + 576*delta  <=>  1856 n > 576 delta
    for n in (16, 64, 256, 512, 1024, 4096):
        p = derive_params(2, n)
        assert p.locator_hypothesis_holds == (1856 * n > 576 * p.delta)
    assert not derive_params(2, 14).locator_hypothesis_holds
    assert derive_params(2, 4096).locator_hypothesis_holds


def test_centered_residue_examples():
    assert centered_residue(98, 100, 10) == -2
    assert centered_residue(0, 100, 10) == 0
    with pytest.raises(NoCenteredResidue):
        centered_residue(50, 100, 10)
    with pytest.raises(ValueError):
        centered_residue(3, 20, 10)


@given(st.integers(1, 10**6), st.data())
def test_centered_residue_inverts_mod(bound, data):
    m = data.draw(st.integers(2 * bound + 1, 4 * bound + 10))
    t = data.draw(st.integers(-bound, bound))
    assert centered_residue(t % m, m, bound) == t


@given(st.integers(1, 50), st.integers(1, 500), st.data())
def test_residue_lifts_oracle(m, bound, data):
    r = data.draw(st.integers(0, m - 1))
    assert residue_lifts(r, m, bound) == [t for t in range(-bound, bound + 1) if t % m == r]


def test_ceil_log2():
    for m in range(1, 300):
        assert ceil_log2(m) == math.ceil(math.log2(m))


def test_phi_width_bound_never_exceeds_block():
    for blk in (5, 8, 16, 64, 4096):
        assert 1 <= phi_width_bound(blk, 2, max(blk, 24)) <= blk + 1
