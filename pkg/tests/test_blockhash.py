import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from subedit import derive_params, scaled_overrides
from subedit.blockhash import (
    COMPRESSED, REFERENCE, PrimeSearchExhausted, PsiValue, ball_of_length, choose_phi_mode,
    confusable_pairs, confusable_set, edit_ball, phi_block, phi_sketch, psi, reaches_by_one_edit,
    recover_region, separates, smallest_separating_prime, split_blocks, _confusable_ints,
)
from subedit.channel import EditOp, apply_edit, enumerate_edits, make_rng, random_bits
from subedit.core import SCALED, NoCandidate, phi_width_bound
from subedit.partition import is_dense

from conftest import all_strings

bits = st.text("01", max_size=10)


def scaled24(delta=None):
    return derive_params(2, 24, SCALED, scaled_overrides(2, 24, 8, delta))


def brute_confusable(r, k):
    ball = edit_ball(r, k)
    return {c for c in all_strings(len(r)) if c != r and ball & edit_ball(c, k)}


def test_edit_ball_small():
    assert edit_ball("00", 1) == {"00", "0", "000", "100", "010", "001", "10", "01"}
    assert "0110" in edit_ball("0110", 2)


@given(bits, st.integers(1, 3))
def test_edit_ball_size_bound(s, k):
    assert len(edit_ball(s, k)) <= (len(s) + 1) * (k + 1) * 2 ** (k + 1)


@given(bits, st.integers(1, 2), st.integers(-2, 2), st.data())
def test_ball_of_length_matches_ball(s, k, d, data):
    L = max(0, len(s) + d)
    lo = data.draw(st.integers(1, len(s) + 1))
    hi = data.draw(st.integers(lo, len(s) + 1))
    got = ball_of_length(s, k, L, lo, hi)
    assert len(set(got)) == len(got)
    assert set(got) == {t for t in edit_ball(s, k, (lo, hi)) if len(t) == L}


def test_reaches_by_one_edit_oracle():
    k = 2
    for n in range(0, 7):
        for x in all_strings(n):
            ball = edit_ball(x, k)
            for m in range(max(0, n - 3), n + 4):
                for y in all_strings(m):
                    assert reaches_by_one_edit(x, y, k) == (y in ball)


@pytest.mark.parametrize("r", ["0011", "010110", "1111000", "00000000"])
def test_confusable_set_brute_force(r):
    assert confusable_set(r, 2) == brute_confusable(r, 2)
    assert r not in confusable_set(r, 2)


@settings(max_examples=40, deadline=None)
@given(st.text("01", min_size=1, max_size=16), st.integers(1, 2))
def test_vectorised_confusables_match_strings(r, k):
    got = {format(int(v), f"0{len(r)}b") for v in _confusable_ints(int(r, 2), len(r), k)}
    assert got == confusable_set(r, k)


def test_confusable_pairs_structure():
    x = "0110100111010011"
    regions = confusable_pairs(x, 5, 2)
    assert [r.start for r in regions] == [1, 6, 11]
    assert regions[-1].text == x[10:16]
    for reg in regions:
        others = {format(int(v), f"0{len(reg.text)}b") for v in reg.others}
        assert reg.text not in others
        assert others == confusable_set(reg.text, 2)
        preimages = max(len(ball_of_length(s, 2, len(reg.text))) for s in edit_ball(reg.text, 2))
        assert len(others) <= len(edit_ball(reg.text, 2)) * preimages
    assert len(confusable_pairs("0101", 8, 2)) == 1


def _separating_oracle(x, params):
    for p in sympy.primerange(2, 1 << params.b_phi):
        if separates(x, params, p):
            return p
    return None


@pytest.mark.parametrize("x", ["01101100101101", "00110011001100", "11111111110011"])
def test_compressed_prime_is_smallest_single_block(x):
    p = derive_params(2, 14)
    data = phi_sketch(x, p, COMPRESSED)
    assert data.P == _separating_oracle(x, p)
    assert data.b_phi == p.b_phi


def test_compressed_prime_is_smallest_multi_block():
    p = scaled24()
    rng = make_rng(11)
    for _ in range(3):
        x = random_bits(24, rng)
        data = phi_sketch(x, p, COMPRESSED)
        assert separates(x, p, data.P)
        assert data.P == _separating_oracle(x, p)


def test_reference_mode_is_identity():
    p = scaled24()
    x = "010011100011110000101101"
    data = phi_sketch(x, p, REFERENCE)
    assert data.values == tuple(int(b, 2) for b in split_blocks(x, 8))
    assert (data.P, data.b_phi) == (0, 8)


def test_phi_block_padding_and_equality():
    assert phi_block("101", 8, 0) == 0b10100000
    assert phi_block("101", 8, 7) == 0b10100000 % 7
    assert phi_block("0110", 4, 5) == phi_block("0110", 4, 5)


def test_psi_aggregates():
    p = scaled24()
    x = "01001110" "00111100" "00101101"
    data = phi_sketch(x, p, COMPRESSED)
    v = data.values
    mod = 1 << data.b_phi
    assert psi(x, p, data) == PsiValue((v[0] + v[2]) % mod, v[1] % mod)
    same = "01001110" * 2
    p16 = derive_params(2, 16, SCALED, scaled_overrides(2, 16, 8))
    d16 = phi_sketch(same, p16, REFERENCE)
    s = psi(same, p16, d16)
    assert s.odd == s.even
    p14 = derive_params(2, 14)
    d14 = phi_sketch("01101100101101", p14, COMPRESSED)
    assert psi("01101100101101", p14, d14) == PsiValue(d14.values[0], 0)


def test_subtraction_exactness():
    p = scaled24()
    x = "110010011100100111001011"
    data = phi_sketch(x, p, COMPRESSED)
    mod = 1 << data.b_phi
    sk = psi(x, p, data)
    for i, v in enumerate(data.values):
        total = sk.odd if i % 2 == 0 else sk.even
        others = sum(u for j, u in enumerate(data.values) if j % 2 == i % 2 and j != i)
        assert (total - others) % mod == v


def test_prime_search_exhausted():
    with pytest.raises(PrimeSearchExhausted):
        smallest_separating_prime(np.array([2 * 3 * 5 * 7]), 3)
    assert smallest_separating_prime(np.array([2 * 3 * 5 * 7]), 8) == 11
    assert smallest_separating_prime(np.empty(0, np.int64), 4) == 2


def test_auto_mode_choice():
    assert choose_phi_mode(derive_params(2, 14)) == COMPRESSED
    assert choose_phi_mode(scaled24()) == COMPRESSED
    assert choose_phi_mode(derive_params(2, 4096)) == REFERENCE


def _true_interval(op, n):
    return op.pos, min(n, max(op.pos, op.pos + op.del_len - 1))


@pytest.mark.parametrize("mode", [COMPRESSED, REFERENCE])
def test_recover_region_given_true_interval(mode):
    p = scaled24()
    rng = make_rng(2024)
    done = 0
    while done < 25:
        x = random_bits(24, rng)
        if not is_dense(x, p.k, p.delta):
            continue
        done += 1
        data = phi_sketch(x, p, mode)
        s = psi(x, p, data)
        for op, y in enumerate_edits(x, p.k):
            got = recover_region(y, s, data.P, p, _true_interval(op, 24), len(y) - 24, phi_mode=mode)
            assert got == x


def test_recover_region_identity_and_single_block():
    p = derive_params(2, 14)
    x = "01101100101101"
    data = phi_sketch(x, p, REFERENCE)
    s = psi(x, p, data)
    assert recover_region(x, s, 0, p, (1, 14), 0, phi_mode=REFERENCE) == x
    y = apply_edit(x, EditOp(5, 1, "0"))
    assert y != x
    assert recover_region(y, s, 0, p, (5, 5), 0, phi_mode=REFERENCE) == x
    with pytest.raises(NoCandidate):
        recover_region(y, s, 0, p, (1, 14), 3, phi_mode=REFERENCE)


def test_width_bound_sublinear():
    ratios = [3 * phi_width_bound(blk, 2, 2 * blk) / blk for blk in (8, 16, 32, 64)]
    assert all(a > b for a, b in zip(ratios, ratios[1:]))


def test_measured_prime_width():
    rng = make_rng(5)
    widest = {}
    for blk in (8, 16, 32):
        p = derive_params(2, blk, SCALED, scaled_overrides(2, blk, blk, delta=blk))
        widest[blk] = max(phi_sketch(random_bits(blk, rng), p).P.bit_length() for _ in range(5))
        assert widest[blk] <= p.b_phi
    assert widest[8] / 8 > widest[16] / 16 > widest[32] / 32
