import math

import pytest
from hypothesis import given, settings, example, strategies as st

from costmodel import (BsfParams, CostBreakdown, InvalidParameterError, SWEEP_COLUMNS,
                       predict_T1, predict_TK, predict_run_time, speedup_from_times,
                       predict_speedup, speedup_derivative, scalability_bound,
                       efficiency_exact, efficiency_approx, efficiency_terms, sweep, sweep_values)

WORKED = BsfParams(L=0.5, t_s=1, t_w=100, t_r=4, t_p=5)
DESK = BsfParams(L=1, t_s=2, t_w=10000)

times = st.floats(min_value=0.0, max_value=1e4, allow_nan=False, allow_infinity=False)
positive = st.floats(min_value=1e-3, max_value=1e4, allow_nan=False, allow_infinity=False)


@st.composite
def params(draw, work=positive):
    return BsfParams(L=draw(times), t_s=draw(times), t_w=draw(work),
                     t_r=draw(times), t_p=draw(times))


@st.composite
def bounded_params(draw):
    """Parameter sets whose bound K_star lies in [2, 300]"""
    c = draw(st.floats(min_value=1e-2, max_value=10.0))
    K_star = draw(st.floats(min_value=2.0, max_value=300.0))
    L = draw(st.floats(min_value=0.0, max_value=1.0)) * c / 2
    return BsfParams(L=L, t_s=c - 2 * L, t_w=K_star ** 2 * c,
                     t_r=draw(times), t_p=draw(times))


def rel_close(a, b, tol=1e-12):
    return math.isclose(a, b, rel_tol=tol, abs_tol=tol)


class TestParams:
    @pytest.mark.parametrize('field', ['L', 't_s', 't_w', 't_r', 't_p'])
    @pytest.mark.parametrize('value', [-1.0, math.inf, math.nan])
    def test_rejects_invalid_times(self, field, value):
        with pytest.raises(InvalidParameterError):
            BsfParams(**{field: value})

    @pytest.mark.parametrize('K', [0, -3, 1.5, True])
    def test_rejects_invalid_worker_count(self, K):
        with pytest.raises(InvalidParameterError):
            BsfParams(K=K)

    def test_derived_costs(self):
        assert WORKED.comm_cost == 2.0
        assert WORKED.master_cost == 9.0

    def test_scaled_and_replace(self):
        scaled = WORKED.scaled(10)
        assert scaled.t_w == 1000 and scaled.L == 5
        assert WORKED.replace(t_r=0).t_r == 0
        assert WORKED.replace(t_r=0).t_w == WORKED.t_w

    def test_dict_round_trip(self):
        assert BsfParams.from_dict(WORKED.to_dict()) == WORKED


class TestPredictions:
    def test_T1_examples(self):
        assert predict_T1(BsfParams()) == 0
        assert predict_T1(WORKED) == 111
        assert predict_T1(DESK) == 10004

    def test_TK_worked_example(self):
        breakdown = predict_TK(WORKED, 10)
        assert isinstance(breakdown, CostBreakdown)
        assert breakdown.T == pytest.approx(39)
        assert breakdown.component_sum() == pytest.approx(breakdown.T)

    def test_TK_zero_communication(self):
        assert predict_TK(BsfParams(t_w=100, t_r=4, t_p=5), 20).T == pytest.approx(14)

    @given(params(work=times))
    def test_TK_at_one_worker_is_T1(self, p):
        assert rel_close(predict_TK(p, 1).T, predict_T1(p))

    @given(params(), st.floats(min_value=1, max_value=1000))
    def test_breakdown_sums_to_total(self, p, K):
        breakdown = predict_TK(p, K)
        assert breakdown.component_sum() == pytest.approx(breakdown.T, rel=1e-12)
        assert all(v >= 0 for v in breakdown.to_dict().values())

    def test_run_time_is_linear_in_iterations(self):
        assert predict_run_time(WORKED, 10, 7) == pytest.approx(7 * 39)

    @pytest.mark.parametrize('K', [0, 0.5, -1, math.inf])
    def test_rejects_bad_K(self, K):
        with pytest.raises(InvalidParameterError):
            predict_TK(WORKED, K)


class TestSpeedup:
    def test_from_times_examples(self):
        assert speedup_from_times(111, 111) == 1
        assert speedup_from_times(111, 39) == pytest.approx(2.846153846)
        assert speedup_from_times(10, 5) == 2

    @pytest.mark.parametrize('T1,TK', [(0, 1), (1, 0), (-1, 1)])
    def test_from_times_rejects_nonpositive(self, T1, TK):
        with pytest.raises(InvalidParameterError):
            speedup_from_times(T1, TK)

    def test_worked_example(self):
        assert predict_speedup(WORKED, 10) == pytest.approx(1110 / 390, rel=1e-12)

    @given(st.integers(min_value=1, max_value=500), positive)
    def test_zero_overhead_is_linear(self, K, t_w):
        assert predict_speedup(BsfParams(t_w=t_w), K) == pytest.approx(K, rel=1e-12)

    @settings(max_examples=1000, deadline=None)
    @given(params())
    def test_normalized_at_one_worker(self, p):
        assert abs(predict_speedup(p, 1) - 1) <= 1e-12

    def test_undefined_without_work_or_cost(self):
        with pytest.raises(InvalidParameterError):
            predict_speedup(BsfParams(), 4)

    def test_matches_time_ratio(self):
        assert predict_speedup(WORKED, 10) == pytest.approx(
            speedup_from_times(predict_T1(WORKED), predict_TK(WORKED, 10).T), rel=1e-12)


class TestDerivative:
    def test_sign_around_the_bound(self):
        scale = predict_speedup(DESK, 50)
        assert abs(speedup_derivative(DESK, 50)) <= 1e-12 * scale
        assert speedup_derivative(DESK, 10) > 0
        assert speedup_derivative(DESK, 100) < 0

    @settings(max_examples=1000, deadline=None)
    @given(bounded_params())
    def test_vanishes_at_bound(self, p):
        K_star = scalability_bound(p).K_star
        assert abs(speedup_derivative(p, K_star)) <= 1e-9 * predict_speedup(p, K_star)

    @given(params(), st.floats(min_value=2, max_value=500))
    def test_matches_finite_difference(self, p, K):
        h = 1e-4 * K
        numeric = (predict_speedup(p, K + h) - predict_speedup(p, K - h)) / (2 * h)
        scale = predict_speedup(p, K) / K
        assert speedup_derivative(p, K) == pytest.approx(numeric, rel=1e-3, abs=1e-6 * scale)


class TestScalabilityBound:
    def test_desk_example(self):
        report = scalability_bound(DESK)
        assert report.K_star == 50
        assert report.K_opt == 50
        assert report.a_max == pytest.approx(predict_speedup(DESK, 50))
        assert report.e_at_opt == pytest.approx(report.a_max / 50)
        assert not report.unbounded

    def test_no_work(self):
        report = scalability_bound(BsfParams(L=1, t_s=2, t_r=1, t_p=1))
        assert report.K_opt == 1
        assert report.a_max == 1
        assert report.note

    def test_zero_communication_is_unbounded(self):
        report = scalability_bound(BsfParams(t_w=100))
        assert report.K_star == math.inf
        assert report.K_opt is None
        assert report.unbounded
        assert 'unbounded' in report.note

    def test_zero_communication_with_master_cost(self):
        report = scalability_bound(BsfParams(t_w=100, t_r=4, t_p=5))
        assert report.unbounded
        assert report.a_max == pytest.approx(109 / 9)

    def test_unbounded_reports_limits(self):
        p = BsfParams(t_w=100, t_r=4, t_p=5)
        report = scalability_bound(p)
        assert report.e_at_opt == 0.0
        assert predict_speedup(p, 1e9) == pytest.approx(report.a_max, rel=1e-6)
        assert efficiency_exact(p, 1e9) == pytest.approx(report.e_at_opt, abs=1e-6)

        free_master = scalability_bound(BsfParams(t_w=100))
        assert free_master.a_max == math.inf
        assert free_master.e_at_opt == 1.0
        assert efficiency_exact(BsfParams(t_w=100), 1e9) == pytest.approx(1.0)

    def test_bound_below_one_worker(self):
        report = scalability_bound(BsfParams(L=10, t_s=10, t_w=1))
        assert report.K_star < 1
        assert report.K_opt == 1

    @settings(max_examples=1000, deadline=None)
    @given(bounded_params())
    def test_bound_is_brute_force_argmax(self, p):
        report = scalability_bound(p)
        K_star = report.K_star
        candidates = range(1, math.ceil(2 * K_star) + 1)
        best = max(predict_speedup(p, K) for K in candidates)
        argmax = [K for K in candidates if math.isclose(predict_speedup(p, K), best, rel_tol=1e-12)]
        assert argmax[0] in (math.floor(K_star), math.ceil(K_star))
        assert report.K_opt in argmax

    @given(bounded_params(), st.floats(min_value=0.0, max_value=100.0),
           st.floats(min_value=0.0, max_value=100.0))
    def test_bound_ignores_master_costs(self, p, f_r, f_p):
        perturbed = p.replace(t_r=p.t_r * f_r, t_p=p.t_p * f_p)
        assert scalability_bound(perturbed).K_star == scalability_bound(p).K_star

    @pytest.mark.parametrize('c', [1e-3, 1.0, 1e3])
    @given(p=bounded_params(), K=st.integers(min_value=1, max_value=600))
    def test_scale_invariance(self, c, p, K):
        scaled = p.scaled(c)
        assert rel_close(predict_speedup(scaled, K), predict_speedup(p, K))
        assert scalability_bound(scaled).K_opt == scalability_bound(p).K_opt


class TestEfficiency:
    def test_worked_example(self):
        assert efficiency_exact(WORKED, 1) == pytest.approx(1, rel=1e-12)
        assert efficiency_exact(WORKED, 10) == pytest.approx(1110 / 3900, rel=1e-12)
        assert efficiency_approx(WORKED, 10) == pytest.approx(100 / 390, rel=1e-12)
        gap = efficiency_exact(WORKED, 10) - efficiency_approx(WORKED, 10)
        assert gap == pytest.approx(11 / 390, rel=1e-12)

    def test_zero_overhead(self):
        p = BsfParams(t_w=100)
        assert efficiency_exact(p, 17) == pytest.approx(1)
        assert efficiency_approx(p, 17) == 1

    def test_approx_needs_work(self):
        with pytest.raises(InvalidParameterError):
            efficiency_approx(BsfParams(L=1), 2)

    @settings(max_examples=300, deadline=None)
    @given(params(), st.integers(min_value=1, max_value=1000))
    def test_identities(self, p, K):
        e = efficiency_exact(p, K)
        assert e == predict_speedup(p, K) / K
        D = K * K * p.comm_cost + K * p.master_cost + p.t_w
        gap = (p.comm_cost + p.master_cost) / D
        assert rel_close(e - efficiency_approx(p, K), gap)

    @given(params(), st.integers(min_value=1, max_value=1000))
    def test_terms_decompose_exact_efficiency(self, p, K):
        comm, master, work = efficiency_terms(p, K)
        assert rel_close(comm + master + work, efficiency_exact(p, K))
        assert rel_close(work, efficiency_approx(p, K))


class TestSweep:
    def test_single_row(self):
        [row] = sweep(WORKED, 1, 1, 1)
        assert row.K == 1
        assert row.speedup == pytest.approx(1)
        assert row.efficiency_exact == pytest.approx(1)

    def test_rows_match_individual_operations(self):
        rows = {row.K: row for row in sweep(WORKED, 1, 100)}
        row = rows[10]
        assert row.T_K == predict_TK(WORKED, 10).T
        assert row.speedup == predict_speedup(WORKED, 10)
        assert row.efficiency_exact == efficiency_exact(WORKED, 10)
        assert row.efficiency_approx == efficiency_approx(WORKED, 10)
        assert list(row.to_dict()) == SWEEP_COLUMNS

    def test_step(self):
        assert [r.K for r in sweep(WORKED, 1, 20, 5)] == [1, 6, 11, 16]

    @pytest.mark.parametrize('K_min,K_max,step', [(0, 5, 1), (5, 4, 1), (1, 5, 0)])
    def test_empty_range(self, K_min, K_max, step):
        with pytest.raises(InvalidParameterError):
            sweep(WORKED, K_min, K_max, step)

    def test_no_work_has_no_approximation(self):
        [row] = sweep(BsfParams(L=1, t_r=1), 3, 3)
        assert row.efficiency_approx is None

    @given(bounded_params())
    @example(DESK)
    def test_speedup_increasing_below_bound(self, p):
        K_star = scalability_bound(p).K_star
        rows = sweep(p, 1, max(1, math.floor(K_star)))
        speedups = [r.speedup for r in rows]
        assert all(a < b for a, b in zip(speedups, speedups[1:]))

    def test_desk_curve_peaks_at_fifty(self):
        rows = sweep_values(DESK, range(1, 201))
        speedups = [r.speedup for r in rows]
        assert max(rows, key=lambda r: r.speedup).K == 50
        assert all(a < b for a, b in zip(speedups[:50], speedups[1:50]))
        assert all(a > b for a, b in zip(speedups[49:], speedups[50:]))
