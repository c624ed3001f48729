import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hbzeros import (CoeffSequence, InvariantViolation, ZeroTable, deltas_to_zeros, l2_norm,
                     zeros_to_deltas)


def test_unit_and_zeros():
    e = CoeffSequence.unit(3, 5)
    assert e.N == 5
    assert e.at(3) == 1.0 and e.at(2) == 0.0 and e.at(99) == 0.0
    assert CoeffSequence.zeros(4).norm() == 0.0
    with pytest.raises(IndexError):
        e.at(0)


def test_values_are_read_only():
    x = CoeffSequence([1.0, 2.0])
    with pytest.raises(ValueError):
        x.values[0] = 3.0


def test_non_finite_rejected():
    with pytest.raises(InvariantViolation):
        CoeffSequence([1.0, np.nan])


def test_arithmetic_pads_shorter_operand():
    s = CoeffSequence([1.0, 2.0, 3.0]) - CoeffSequence([1.0])
    assert np.array_equal(s.values, [0.0, 2.0, 3.0])
    assert np.array_equal((2 * s).values, [0.0, 4.0, 6.0])


def test_l2_norm_does_not_overflow():
    assert l2_norm([3e200, 4e200]) == pytest.approx(5e200)


def test_grid_table_and_head():
    t = deltas_to_zeros(np.zeros(6))
    assert np.array_equal(t.tau, np.arange(1, 7) + 0.5)
    assert t.head(2).N == 2


def test_delta_out_of_cell_rejected():
    with pytest.raises(InvariantViolation):
        deltas_to_zeros([0.1, 0.6])


def test_inconsistent_columns_rejected():
    with pytest.raises(InvariantViolation):
        ZeroTable(tau=[1.4, 2.5], delta=[0.2, 0.0])


def test_tau1_below_half_rejected():
    with pytest.raises(InvariantViolation):
        deltas_to_zeros([1.0 - 1e-9])


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(-0.45, 0.45), min_size=1, max_size=40))
def test_round_trip_is_exact(ds):
    d = np.array(ds)
    # keep tau strictly increasing
    d = d * 0.5
    t = deltas_to_zeros(d)
    assert np.array_equal(zeros_to_deltas(t).values, d)
    assert np.allclose(t.tau, np.arange(1, d.size + 1) + 0.5 - d, rtol=0, atol=1e-15)
