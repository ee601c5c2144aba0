import numpy as np
import pytest

from _gen import random_credal, space
from xprob import (
    ConditioningOnNullError,
    CredalSet,
    Envelope,
    ExtendedMeasure,
    SpaceTooLargeError,
    Split,
    conjugate_upper,
    core,
    d_etv,
    evaluate,
    event_bounds,
    geometric_conditional,
    hausdorff,
    in_core,
    lower,
    singleton_envelope,
    update_envelope,
    upper,
    validate_capacity,
)
from xprob.credal import core_slack

S4 = space(4)
P1 = ExtendedMeasure(S4, [0.25, 0.25, -0.25, -0.25])
P2 = ExtendedMeasure(S4, [0.4, 0.3, -0.2, -0.1])
SPLIT = Split.initial(S4, [1, 2])
PAIR = CredalSet([P1, P2], SPLIT)
CONJ = "conjugacy upper = max P(Omega) - lower(A^c)"


class TestEnvelopes:
    @pytest.mark.parametrize("labels,lo,up", [([1], 0.25, 0.4), ([3], -0.25, -0.2)])
    def test_examples(self, labels, lo, up):
        assert lower(PAIR, labels) == lo and upper(PAIR, labels) == up

    def test_singleton_set(self):
        c = CredalSet([P2])
        for e in S4.events():
            assert lower(c, e) == upper(c, e) == evaluate(P2, e)

    def test_members_between_envelopes(self):
        rng = np.random.default_rng(0)
        for _ in range(10):
            c = random_credal(rng, int(rng.integers(1, 8)))
            env = Envelope.from_credal(c)
            for p in c:
                vals = np.array([evaluate(p, e) for e in c.space.events()])
                assert np.all(env.lower_values <= vals + 1e-12) and np.all(vals <= env.upper_values + 1e-12)

    def test_lazy_and_table_agree(self):
        env = Envelope.from_credal(PAIR)
        single = [env.lower(e) for e in S4.events()]
        assert single == pytest.approx(env.lower_values.tolist(), abs=1e-15)

    def test_conjugate_form_disagrees_on_example(self):
        # max P(Omega) - lower({2,3,4}) = .4 + .25, while upper({1}) = .4
        assert conjugate_upper(PAIR, [1]) == pytest.approx(0.65)
        assert upper(PAIR, [1]) == 0.4

    def test_elicited_defaults(self):
        env = Envelope.elicited(S4, [([1], 0.1, 0.2)])
        assert env.lower([1]) == 0.1 and env.upper([1]) == 0.2
        assert env.lower([]) == 0.0 and env.lower([2]) == -1.0 and env.upper([2, 3]) == 1.0

    def test_elicited_cap(self):
        with pytest.raises(SpaceTooLargeError):
            Envelope.elicited(space(17), [])


class TestValidateCapacity:
    def test_two_member_example(self):
        report = validate_capacity(Envelope.from_credal(PAIR))
        assert [c.name for c in report.failed()] == [CONJ]

    def test_singleton_is_capacity(self):
        assert validate_capacity(Envelope.from_credal(CredalSet([P2]))).ok

    def test_superadditivity_flag(self):
        env = Envelope.elicited(S4, [([1], 0.3, 0.5), ([2], 0.3, 0.5), ([1, 2], 0.4, 1.0)])
        report = validate_capacity(env)
        assert not report.get("superadditive lower").passed
        assert CONJ not in [c.name for c in report.checks]

    def test_ec3_counterexample(self):
        s3 = space(3)
        split = Split.initial(s3, [1])
        c = CredalSet([ExtendedMeasure(s3, [0.5, -0.3, -0.2]), ExtendedMeasure(s3, [0.375, -0.05, -0.575])], split)
        report = validate_capacity(Envelope.from_credal(c))
        assert not report.get("EC3 lower").passed
        assert lower(c, [2]) == -0.3 and lower(c, [1, 2, 3]) == pytest.approx(-0.25)
        assert lower(c, [1, 3]) == pytest.approx(-0.2)  # B minus A

    def test_cap(self):
        with pytest.raises(SpaceTooLargeError):
            validate_capacity(Envelope.from_credal(PAIR), n_cap=3)


class TestGeometricConditional:
    @pytest.mark.parametrize("a,b,expected", [([1], [1, 2], 0.5), ([1, 3], [1], 1.0), ([2], [1], 0.0)])
    def test_examples(self, a, b, expected):
        assert geometric_conditional(PAIR, a, b) == expected

    def test_null(self):
        with pytest.raises(ConditioningOnNullError):
            geometric_conditional(CredalSet([P1]), [1], [1, 2, 3, 4])


class TestUpdateEnvelope:
    def test_swap_on_discovery(self):
        lo, up = singleton_envelope(PAIR)
        lo2, up2, split2 = update_envelope(lo, up, SPLIT, 2)
        assert lo2[2] == 0.2 and up2[2] == 0.25 and 2 in split2.actual

    def test_actual_draw_is_identity(self):
        lo, up = singleton_envelope(PAIR)
        lo2, up2, split2 = update_envelope(lo, up, SPLIT, 0)
        assert np.array_equal(lo, lo2) and np.array_equal(up, up2) and split2.actual == SPLIT.actual

    def test_singleton_set(self):
        c = CredalSet([P2], SPLIT)
        lo, up = singleton_envelope(c)
        lo2, up2, _ = update_envelope(lo, up, SPLIT, 3)
        assert lo2[3] == up2[3] == 0.1


class TestEventBounds:
    @pytest.mark.parametrize("labels,lb", [([1, 2], 0.5), ([1, 3], 0.0)])
    def test_examples(self, labels, lb):
        lo_bound, up_bound = event_bounds(PAIR, labels)
        assert lo_bound == pytest.approx(lb) and lo_bound <= lower(PAIR, labels) + 1e-12
        assert upper(PAIR, labels) <= up_bound + 1e-12

    def test_singleton_set_is_tight(self):
        c = CredalSet([P2])
        for e in S4.events():
            lb, ub = event_bounds(c, e)
            assert lb == pytest.approx(evaluate(P2, e), abs=1e-15) and ub == pytest.approx(evaluate(P2, e), abs=1e-15)


class TestHausdorff:
    def test_identity(self):
        assert hausdorff(PAIR, PAIR) == 0.0

    def test_brute_force_example(self):
        limit = CredalSet([ExtendedMeasure(S4, [0.25] * 4), ExtendedMeasure(S4, [0.4, 0.3, 0.2, 0.1])])
        d = [[d_etv(p, q) for q in limit] for p in PAIR]
        expected = max(max(min(row) for row in d), max(min(col) for col in zip(*d)))
        assert hausdorff(PAIR, limit) == expected == pytest.approx(1.0)

    def test_full_discovery(self):
        c = PAIR.observe(3).observe(4)
        limit = CredalSet([ExtendedMeasure(S4, np.abs(p.atoms)) for p in PAIR])
        assert hausdorff(c, limit) == 0.0


class TestCore:
    def test_member_witness(self):
        rep = core(Envelope.from_credal(PAIR))
        assert rep.nonempty and rep.coherent and rep.method == "member"
        assert rep.witness == P1
        assert in_core(P1, Envelope.from_credal(PAIR)) and not in_core(P2, Envelope.from_credal(PAIR))

    def test_lp_witness_on_elicited_copy(self):
        env = Envelope.from_credal(PAIR)
        copy = Envelope.elicited(S4, env.rows())
        rep = core(copy)
        assert rep.nonempty and rep.method == "lp" and rep.coherent
        assert core_slack(rep.witness, copy.lower_values).min() >= -1e-9
        assert rep.witness.total == pytest.approx(copy.lower([1, 2, 3, 4]), abs=1e-9)

    def test_singleton_set(self):
        rep = core(Envelope.from_credal(CredalSet([P2])))
        assert rep.nonempty and rep.witness == P2

    def test_superadditivity_failure(self):
        s2 = space(2)
        env = Envelope.elicited(s2, [([1], 0.3, 0.6), ([2], 0.3, 0.6), ([1, 2], 0.5, 1.0)])
        rep = core(env)
        assert not rep.nonempty and not rep.coherent
        assert rep.certificate["dutch_book"]["worst_payoff"] < 0

    def test_report_export(self):
        env = Envelope.from_credal(PAIR)
        d = core(env).to_dict(S4, env.lower_values)
        assert d["witness"] == [0.25, 0.25, -0.25, -0.25] and len(d["constraints"]) == 16
        assert min(c["slack"] for c in d["constraints"]) >= 0
