"""Ramp sharing: worked example vectors, reconstruction sweeps, leakage."""

import itertools
import random

import pytest

from mpor.field import FieldModulus, poly_interpolate
from mpor.ramp import (
    LinearCodeSpec,
    RampParams,
    ShareVector,
    coefficient_rs_code,
    leakage_probe,
    multiplication_code,
    reconstruct,
    reconstruct_code,
    share_gen,
    share_gen_blocks,
    share_gen_code,
    symbol_repetition_code,
)

F17 = FieldModulus(17)
F5 = FieldModulus(5)
F7 = FieldModulus(7)

SEC4 = RampParams.reed_solomon(2, 4, 6, F17)
SEC4_MSG = (F17.element(15), F17.element(3))


def share_values(sv):
    return [sh.value[0].value for sh in sv.shares]


class TestParams:
    def test_tau_ordering_enforced(self):
        with pytest.raises(ValueError, match="tau1 < tau2 required"):
            RampParams.reed_solomon(4, 4, 6, F17)

    def test_rho_bound_enforced(self):
        with pytest.raises(ValueError):
            RampParams.reed_solomon(2, 4, 3, F17)

    def test_q_must_exceed_rho(self):
        with pytest.raises(ValueError, match="q > rho"):
            RampParams.reed_solomon(0, 1, 5, F5)

    def test_replication_is_zero_one(self):
        p = RampParams.replication(4, F5)
        assert (p.tau1, p.tau2, p.s) == (0, 1, 1)


class TestShareGen:
    def test_paper_shares_with_pinned_coins(self):
        sv = share_gen(SEC4, SEC4_MSG, coins=[1, 2])
        assert share_values(sv) == [4, 7, 2, 1, 16, 8]

    def test_replication_shares_equal_secret(self):
        p = RampParams.replication(5, F17)
        sv = share_gen(p, (F17.element(9),))
        assert share_values(sv) == [9] * 5

    def test_tau1_zero_is_deterministic(self):
        p = RampParams.reed_solomon(0, 2, 4, F17)
        secret = (F17.element(3), F17.element(8))
        assert share_values(share_gen(p, secret)) == share_values(share_gen(p, secret))

    def test_wrong_secret_length_rejected(self):
        with pytest.raises(ValueError):
            share_gen(SEC4, (F17.element(1),), coins=[1, 2])

    def test_wrong_coin_count_rejected(self):
        with pytest.raises(ValueError):
            share_gen(SEC4, SEC4_MSG, coins=[1])

    def test_rng_and_coins_both_absent_rejected(self):
        with pytest.raises(ValueError):
            share_gen(SEC4, SEC4_MSG)


class TestReconstruct:
    def test_paper_subset(self):
        sv = share_gen(SEC4, SEC4_MSG, coins=[1, 2])
        rec = reconstruct(SEC4, sv.subset([1, 2, 4, 6]))
        assert [v.value for v in rec] == [15, 3]

    def test_matches_interpolation_oracle(self):
        # Independent route: interpolate the share points directly and read
        # the low coefficients.
        sv = share_gen(SEC4, SEC4_MSG, coins=[1, 2])
        points = [
            (F17.element(i), sv.shares[i - 1].value[0]) for i in (1, 3, 4, 6)
        ]
        f = poly_interpolate(points)
        assert [f.coefficient(i, F17).value for i in range(2)] == [15, 3]
        rec = reconstruct(SEC4, sv.subset([1, 3, 4, 6]))
        assert [v.value for v in rec] == [15, 3]

    def test_every_tau2_subset_agrees(self):
        sv = share_gen(SEC4, SEC4_MSG, coins=[3, 11])
        full = reconstruct(SEC4, sv)
        for subset in itertools.combinations(range(1, 7), 4):
            assert reconstruct(SEC4, sv.subset(subset)) == full

    def test_replication_single_share(self):
        p = RampParams.replication(3, F5)
        sv = share_gen(p, (F5.element(2),))
        assert [v.value for v in reconstruct(p, sv.subset([2]))] == [2]

    def test_insufficient_shares_rejected(self):
        sv = share_gen(SEC4, SEC4_MSG, coins=[1, 2])
        with pytest.raises(ValueError, match="insufficient shares"):
            reconstruct(SEC4, sv.subset([1, 2, 3]))

    def test_duplicate_indices_rejected(self):
        sv = share_gen(SEC4, SEC4_MSG, coins=[1, 2])
        dup = (sv.shares[0], sv.shares[0], sv.shares[1], sv.shares[2])
        with pytest.raises(ValueError, match="duplicate"):
            ShareVector(SEC4, dup)

    def test_exhaustive_small_field_sweep(self):
        # Every secret, every tau2-subset, several coin choices at q=7.
        params = RampParams.reed_solomon(2, 4, 6, F7)
        rng = random.Random(0)
        for a in range(7):
            for b in range(7):
                secret = (F7.element(a), F7.element(b))
                for _ in range(3):
                    sv = share_gen(params, secret, rng=rng)
                    for subset in itertools.combinations(range(1, 7), 4):
                        assert reconstruct(params, sv.subset(subset)) == secret


class TestBlockwise:
    def test_blocks_share_independently(self):
        params = RampParams.reed_solomon(1, 2, 3, F17)
        msg = [F17.element(v) for v in (4, 9)]
        sv = share_gen_blocks(params, msg, coins_per_block=[[5], [6]])
        # share i value per block is block_poly(i)
        assert [sh.value[0].value for sh in sv.shares] == [(4 + 5 * i) % 17 for i in (1, 2, 3)]
        assert [sh.value[1].value for sh in sv.shares] == [(9 + 6 * i) % 17 for i in (1, 2, 3)]
        rec = reconstruct(params, sv.subset([1, 3]))
        assert [v.value for v in rec] == [4, 9]

    def test_length_must_be_block_multiple(self):
        params = RampParams.reed_solomon(2, 4, 6, F17)
        with pytest.raises(ValueError):
            share_gen_blocks(params, [F17.element(1)] * 3, rng=random.Random(0))

    def test_share_vector_json_round_trip(self):
        sv = share_gen(SEC4, SEC4_MSG, coins=[1, 2])
        data = sv.to_json()
        assert data["shares"][0] == {"index": 1, "value": ["4"]}
        assert ShareVector.from_json(data) == sv


class TestLeakageProbe:
    def test_small_coalitions_learn_nothing(self):
        params = RampParams.reed_solomon(2, 4, 4, F5)
        pair = ((F5.element(1), F5.element(2)), (F5.element(3), F5.element(0)))
        for size in (1, 2):
            for coalition in itertools.combinations(range(1, 5), size):
                probe = leakage_probe(params, coalition, pair)
                assert probe.identical

    def test_paper_three_player_coalition_leaks(self):
        params = RampParams.reed_solomon(2, 4, 15, F17)
        pair = ((F17.element(0), F17.element(0)), (F17.element(0), F17.element(1)))
        probe = leakage_probe(params, (3, 6, 15), pair)
        assert not probe.identical

    def test_linear_identity_of_the_leak(self):
        # 5*a1 = 7*s3 + 9*s6 + s15 holds for every secret and every coin.
        params = RampParams.reed_solomon(2, 4, 15, F17)
        rng = random.Random(12)
        for _ in range(100):
            secret = (F17.random_element(rng), F17.random_element(rng))
            sv = share_gen(params, secret, rng=rng)
            s = {i: sv.shares[i - 1].value[0].value for i in (3, 6, 15)}
            assert (5 * secret[1].value) % 17 == (7 * s[3] + 9 * s[6] + s[15]) % 17

    def test_tau2_coalition_separates_all_pairs(self):
        params = RampParams.reed_solomon(2, 4, 4, F5)
        coalition = (1, 2, 3, 4)
        secrets = list(itertools.product(range(5), repeat=2))
        for a, b in itertools.combinations(secrets, 2):
            pair = (
                tuple(F5.element(v) for v in a),
                tuple(F5.element(v) for v in b),
            )
            probe = leakage_probe(params, coalition, pair)
            assert not probe.identical

    def test_coin_space_guard(self):
        big = FieldModulus(101)
        params = RampParams.reed_solomon(4, 5, 6, big)
        pair = ((big.element(1),), (big.element(2),))
        with pytest.raises(ValueError, match="coin space"):
            leakage_probe(params, (1,), pair)


class TestLinearCodes:
    def test_standard_form_enforced(self):
        bad = ((F5.element(2), F5.element(0)),)
        with pytest.raises(ValueError, match="standard form"):
            LinearCodeSpec(bad)

    def test_multiplication_code_distance(self):
        code = multiplication_code(F5)
        assert (code.n, code.k) == (4, 1)
        assert code.min_distance() == 4

    def test_coefficient_rs_code_is_mds_for_k2(self):
        code = coefficient_rs_code(F5, 2, 4)
        assert (code.n, code.k) == (6, 2)
        assert code.min_distance() == 5

    def test_symbol_repetition_distance(self):
        code = symbol_repetition_code(F5, 2, 5)
        assert (code.n, code.k) == (10, 2)
        assert code.min_distance() == 5

    def test_json_round_trip(self):
        code = coefficient_rs_code(F5, 2, 4)
        assert LinearCodeSpec.from_json(code.to_json()) == code


class TestGenericCodeInstance:
    def params_for(self, code, s):
        d = code.min_distance()
        rho = code.n - s
        tau2 = code.n - d + 1
        return RampParams(tau2 - s, tau2, rho, s, code.modulus)

    def test_round_trip_on_rs_code(self):
        code = coefficient_rs_code(F5, 2, 4)
        params = self.params_for(code, 1)
        rng = random.Random(2)
        for v in range(5):
            secret = (F5.element(v),)
            sv = share_gen_code(code, params, secret, rng=rng)
            rec = reconstruct_code(code, params, sv.subset(range(1, params.tau2 + 1)))
            assert rec == secret

    def test_first_symbols_equal_secret(self):
        # Standard form means the full codeword starts with the secret; the
        # shares are everything after it.
        code = symbol_repetition_code(F5, 2, 3)
        params = self.params_for(code, 2)
        sv = share_gen_code(code, params, (F5.element(3), F5.element(1)), coins=[])
        assert [sh.value[0].value for sh in sv.shares] == [3, 1, 3, 1]

    def test_secrecy_of_code_instance(self):
        # One retained information symbol acts as the coin.
        code = coefficient_rs_code(F5, 2, 3)
        params = RampParams(1, 3, 4, 1, F5)
        pair = ((F5.element(0),), (F5.element(4),))
        probe = leakage_probe(params, (2,), pair, code=code)
        assert probe.identical
