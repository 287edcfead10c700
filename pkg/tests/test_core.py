import numpy as np
import pytest

from aoiline.core import (AgePmf, EmptyPathError, InfeasibleScheduleError,
                          LinkBudget, ProbOutOfRangeError, merge_slots,
                          pmf_mean, validate_path)


class TestValidatePath:
    def test_three_hop_scenario(self):
        path = validate_path((0.9, 0.4, 0.4))
        assert path.hops == 3
        assert path.loss_probs == (0.9, 0.4, 0.4)
        assert path.slots_per_period is None

    def test_empty_path_rejected(self):
        with pytest.raises(EmptyPathError):
            validate_path(())

    def test_certain_loss_rejected(self):
        # p = 1 would make the age diverge: no stationary distribution.
        with pytest.raises(ProbOutOfRangeError):
            validate_path((0.5, 1.0))

    def test_negative_and_nan_rejected(self):
        with pytest.raises(ProbOutOfRangeError):
            validate_path((-0.1,))
        with pytest.raises(ProbOutOfRangeError):
            validate_path((float("nan"),))

    def test_non_numeric_rejected(self):
        with pytest.raises(ProbOutOfRangeError):
            validate_path(("bogus",))

    def test_schedule_must_fit_path(self):
        with pytest.raises(InfeasibleScheduleError):
            validate_path((0.5, 0.5, 0.5), slots_per_period=2)

    def test_schedule_boundary_and_slack(self):
        assert validate_path((0.5, 0.5, 0.5), slots_per_period=3).slots_per_period == 3
        assert validate_path((0.9, 0.4, 0.4), slots_per_period=7).slots_per_period == 7

    def test_fractional_slots_rejected(self):
        with pytest.raises(InfeasibleScheduleError):
            validate_path((0.5,), slots_per_period=1.5)


class TestMergeSlots:
    def test_three_slots(self):
        assert merge_slots(LinkBudget(0.5, 3)) == pytest.approx(0.125, abs=1e-15)

    def test_single_slot_identity(self):
        assert merge_slots(LinkBudget(0.7, 1)) == 0.7

    def test_lossless(self):
        assert merge_slots(LinkBudget(0.0, 5)) == 0.0

    def test_invalid_budget(self):
        with pytest.raises(ProbOutOfRangeError):
            LinkBudget(1.0, 2)
        with pytest.raises(ValueError):
            LinkBudget(0.5, 0)


class TestAgePmf:
    def test_tail_mass_accounts_for_truncation(self):
        pmf = AgePmf(np.array([0.5, 0.25]), 0.25)
        assert pmf.delta_max == 1
        assert pmf.tail_mass == 0.25

    def test_rejects_unnormalized(self):
        with pytest.raises(ValueError):
            AgePmf(np.array([0.5, 0.25]), 0.3)

    def test_rejects_negative_entries_and_tail(self):
        with pytest.raises(ValueError):
            AgePmf(np.array([1.1, -0.1]), 0.0)
        with pytest.raises(ValueError):
            AgePmf(np.array([1.0]), -0.5)

    def test_probs_frozen(self):
        pmf = AgePmf(np.array([1.0]), 0.0)
        with pytest.raises(ValueError):
            pmf.probs[0] = 0.5


class TestPmfMean:
    def test_degenerate_atom(self):
        est = pmf_mean(AgePmf(np.array([1.0]), 0.0), 0.0)
        assert est.value == 0.0
        assert est.tail_correction == 0.0

    def test_single_hop_truncated_at_60(self):
        # Exact mean of a half-loss link is p/(1-p) = 1; the tail above 60
        # contributes (61 + 1) * 2**-61, which the correction recovers exactly.
        probs = 0.5 ** (np.arange(61) + 1)
        pmf = AgePmf(probs, 1.0 - probs.sum())
        est = pmf_mean(pmf, 0.5)
        assert est.value == pytest.approx(1.0, abs=1e-12)
        assert 0.0 < est.tail_correction < 1e-15

    def test_bad_rate_rejected(self):
        with pytest.raises(ProbOutOfRangeError):
            pmf_mean(AgePmf(np.array([1.0]), 0.0), 1.0)
