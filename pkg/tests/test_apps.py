import logging
import math
from fractions import Fraction

import numpy as np
import pytest

from _gen import space
from xprob import ExtendedMeasure, Split, ValidationError
from xprob.apps import (
    EpsilonSchedule,
    OpinionConfig,
    SpeciesConfig,
    geometric_oracle,
    influence,
    influence_step,
    run_boomerang,
    run_species,
)

S3 = space(3)
P = ExtendedMeasure(S3, [0.3, 0.3, -0.4])
Q = ExtendedMeasure(S3, [0.2, 0.3, 0.5])


def hand_posterior(p, m, cond):
    w = {k: Fraction(p) * (1 - Fraction(p)) ** (k - 1) for k in range(1, m + 1)}
    z = sum(w[k] for k in cond)
    return {k: float(w[k] / z) for k in cond}


class TestSpeciesConfig:
    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(n_prior=0, n_max=10, prior_family=[0.5], true_m=3),
            dict(n_prior=4, n_max=10, prior_family=[0.5], true_m=3),
            dict(n_prior=2, n_max=10, prior_family=[1.0], true_m=3),
            dict(n_prior=2, n_max=10, prior_family=[], true_m=3),
        ],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            SpeciesConfig(**kwargs)

    def test_round_trip(self):
        cfg = SpeciesConfig(5, 50, [0.1, 0.2], 8, seed=3, conditioning_events=[[6, 7]])
        assert SpeciesConfig.from_dict(cfg.to_dict()) == cfg


class TestSpecies:
    def test_geometric_oracle(self):
        oracle, tail = geometric_oracle(0.5, space(10))
        assert math.fsum(oracle.atoms) == pytest.approx(1.0, abs=1e-15)
        assert oracle.atoms[1] / oracle.atoms[0] == pytest.approx(0.5)
        assert tail == 0.5**10

    def test_reference_setting(self):
        family = [0.1, 0.2, 0.3]
        res = run_species(SpeciesConfig(5, 50, family, 8, conditioning_events=[[6, 7, 8]]))
        assert res.discovered == list(range(1, 9)) and res.trajectory.discovery_time == 3
        for k in (6, 7, 8):
            row = res.table.lookup(k, [6, 7, 8])
            vals = [hand_posterior(p, 8, [6, 7, 8])[k] for p in family]
            assert row.lower == pytest.approx(min(vals), abs=1e-12)
            assert row.upper == pytest.approx(max(vals), abs=1e-12)
            assert row.n_members_used == 3 and row.event == f"{k}|6 7 8"
            assert 0 <= row.lower <= row.upper <= 1

    def test_singleton_family_is_degenerate(self):
        res = run_species(SpeciesConfig(5, 50, [0.25], 8, conditioning_events=[[6, 7, 8], [1, 8]]))
        assert all(r.lower == r.upper for r in res.table.rows)

    def test_nothing_new(self):
        res = run_species(SpeciesConfig(5, 50, [0.1, 0.3], 5))
        assert res.trajectory.scenario == "proper_subset" and res.trajectory.discovery_time == 0
        for p, tilde in zip([0.1, 0.3], res.induced):
            w = np.array([p * (1 - p) ** (k - 1) for k in range(1, 6)])
            assert tilde.atoms[:5] == pytest.approx(w / w.sum(), abs=1e-12)
            assert np.all(tilde.atoms[5:] == 0)

    def test_intervals_contain_members_and_shrink(self):
        cond = [[2, 4, 6, 7]]
        full = run_species(SpeciesConfig(3, 30, [0.1, 0.2, 0.3, 0.4], 7, conditioning_events=cond))
        sub = run_species(SpeciesConfig(3, 30, [0.2, 0.3], 7, conditioning_events=cond))
        for r_full, r_sub in zip(full.table.rows, sub.table.rows):
            assert r_full.lower <= r_sub.lower <= r_sub.upper <= r_full.upper
        for tilde in full.induced:
            post = tilde.atoms / tilde([2, 4, 6, 7])
            for r in full.table.rows:
                i = full.space.index(r.state)
                assert r.lower - 1e-15 <= post[i] <= r.upper + 1e-15

    def test_induced_sum_and_ratios(self):
        res = run_species(SpeciesConfig(4, 20, [0.15, 0.35], 9))
        for traj, tilde in zip(res.trajectories, res.induced):
            assert math.fsum(tilde.atoms) == pytest.approx(1.0, abs=1e-12)
            a = traj.final.atoms
            for i in range(1, 9):
                assert tilde.atoms[i] / tilde.atoms[0] == pytest.approx(a[i] / a[0], abs=1e-12)

    def test_zero_probability_event_dropped(self, caplog):
        with caplog.at_level(logging.WARNING):
            res = run_species(SpeciesConfig(3, 20, [0.2, 0.4], 5, conditioning_events=[[10, 11]]))
        assert res.table.rows == []
        assert sum("probability 0" in m for m in caplog.messages) == 2

    def test_unpacks_as_pair(self):
        traj, table = run_species(SpeciesConfig(2, 10, [0.5], 3))
        assert traj.scenario == "proper_subset" and len(table.rows) == 3


class TestInfluence:
    def test_hand_example(self):
        hat = influence(P, Q, [0.8, 0.8, 1.5])
        assert hat.atoms == pytest.approx([0.28, 0.30, -0.85], abs=1e-12)
        assert math.fsum(hat.atoms) == pytest.approx(-0.27)
        assert hat.strict is False

    def test_identity_and_full_persuasion(self):
        assert np.array_equal(influence(P, Q, [1, 1, 1]).atoms, P.atoms)
        assert np.array_equal(influence(P, Q, [0, 0, 0]).atoms, Q.atoms)

    def test_direction(self):
        hat = influence(P, Q, [0.5, 0.5, 1.5])
        disp = hat.atoms - P.atoms
        assert np.sign(disp[0]) == np.sign(Q.atoms[0] - P.atoms[0])
        assert np.sign(disp[2]) == -np.sign(Q.atoms[2] - P.atoms[2])

    def test_validity_violation_names_atoms(self):
        with pytest.raises(ValidationError, match=r"atoms \[3\] outside"):
            influence(P, Q, [1.0, 1.0, 3.0])

    def test_total_above_one(self):
        regular = ExtendedMeasure(S3, [0.3, 0.3, 0.4])
        with pytest.raises(ValidationError, match="total"):
            influence(regular, Q, [0.7, 0.7, 0.5])

    def test_step_uses_schedule(self):
        cfg = OpinionConfig(Q, ExtendedMeasure(S3, [0.3, 0.3, 0.4]), Split.initial(S3, [1, 2]))
        assert influence_step(P, cfg, 0).atoms == pytest.approx([0.28, 0.30, -0.85], abs=1e-12)


class TestBoomerang:
    def make(self, **kw):
        oracle = ExtendedMeasure(S3, [0.3, 0.3, 0.4])
        return OpinionConfig(Q, oracle, Split.initial(S3, [1, 2]), **kw)

    def test_trajectory(self):
        res = run_boomerang(self.make(horizon=3))
        first, last = res.steps[0], res.steps[-1]
        assert first.influenced.atoms == pytest.approx([0.28, 0.30, -0.85], abs=1e-12)
        assert last.split.actual == S3.omega and last.prior.is_regular()
        assert last.influenced.is_regular() and res.identity_residual <= 1e-12
        assert len(res.rows()) == 4 * 3

    def test_override(self):
        sched = EpsilonSchedule(1.5, 0.8, {(3, 0): 1.2})
        res = run_boomerang(self.make(epsilon_schedule=sched, horizon=0))
        assert res.steps[0].epsilon.tolist() == [0.8, 0.8, 1.2]

    def test_persuader_must_be_regular(self):
        with pytest.raises(ValidationError):
            OpinionConfig(P, Q, Split.initial(S3, [1]))

    def test_invalid_epsilon(self):
        with pytest.raises(ValueError):
            EpsilonSchedule(-1.0)

    def test_config_round_trip(self):
        cfg = self.make(epsilon_schedule=EpsilonSchedule(1.4, 0.7, {(3, 0): 1.1}), horizon=2)
        again = OpinionConfig.from_dict(cfg.to_dict())
        assert again.to_dict() == cfg.to_dict()
        assert run_boomerang(again).rows() == run_boomerang(cfg).rows()
