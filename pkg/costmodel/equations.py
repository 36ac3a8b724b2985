"""Closed-form BSF cost model

All functions are pure. Times and K may be real; formulas are evaluated
in the common-denominator polynomial form so that speedup, efficiency and
iteration time share one code path.
"""

import math
from typing import Tuple

from .params import (BsfParams, CostBreakdown, ScalabilityReport,
                     InvalidParameterError, check_time, check_workers)

# Relative tolerance under which two speedups count as a tie
TIE_TOLERANCE = 1e-12


def _denominator(p: BsfParams, K: float) -> float:
    """K^2(2L + t_s) + K(t_r + t_p) + t_w"""
    return K * K * p.comm_cost + K * p.master_cost + p.t_w


def predict_T1(p: BsfParams) -> float:
    """Iteration time on a BSF-computer with a single worker"""
    # same grouping as _denominator(p, 1) so that a(1) == 1 exactly
    return p.comm_cost + p.master_cost + p.t_w


def predict_TK(p: BsfParams, K: float) -> CostBreakdown:
    """Iteration time on K workers, split into its phases"""
    K = check_workers(K)
    return CostBreakdown(
        send_total=K * p.t_s,
        compute=p.t_w / K,
        receive_total=p.t_r,
        evaluate=p.t_p,
        latency_total=2 * K * p.L,
        T=_denominator(p, K) / K,
    )


def predict_run_time(p: BsfParams, K: float, iterations: int) -> float:
    """Predicted time of a whole iterative run; init and finalize are free"""
    if int(iterations) != iterations or iterations < 1:
        raise InvalidParameterError(f"iterations must be a positive integer, got {iterations}")
    return iterations * predict_TK(p, K).T


def speedup_from_times(T1: float, TK: float) -> float:
    T1 = check_time('T1', T1)
    TK = check_time('TK', TK)
    if T1 == 0 or TK == 0:
        raise InvalidParameterError(f"Speedup needs positive times, got T1={T1}, TK={TK}")
    return T1 / TK


def predict_speedup(p: BsfParams, K: float) -> float:
    K = check_workers(K)
    T1 = predict_T1(p)
    if T1 == 0:
        raise InvalidParameterError("Speedup is undefined when all time parameters are zero")
    return K * T1 / _denominator(p, K)


def speedup_derivative(p: BsfParams, K: float) -> float:
    """Derivative of the speedup with respect to a continuous K

    Positive below the scalability bound, zero on it, negative above.
    """
    K = check_workers(K)
    total = predict_T1(p)
    inner = K * p.comm_cost + p.master_cost + p.t_w / K
    if inner == 0:
        raise InvalidParameterError("Speedup derivative is undefined when all time parameters are zero")
    return total * (p.t_w / (K * K) - p.comm_cost) / (inner * inner)


def efficiency_exact(p: BsfParams, K: float) -> float:
    K = check_workers(K)
    return predict_speedup(p, K) / K


def efficiency_approx(p: BsfParams, K: float) -> float:
    """Large-K efficiency estimate, dropping the overhead terms of the numerator"""
    K = check_workers(K)
    if p.t_w == 0:
        raise InvalidParameterError("Efficiency approximation is undefined for t_w = 0")
    return 1.0 / (1.0 + (K * K * p.comm_cost + K * p.master_cost) / p.t_w)


def efficiency_terms(p: BsfParams, K: float) -> Tuple[float, float, float]:
    """Exact efficiency split into communication, master and work terms

    The terms sum to efficiency_exact; the work term is the large-K estimate.
    """
    K = check_workers(K)
    D = _denominator(p, K)
    if D == 0:
        raise InvalidParameterError("Efficiency is undefined when all time parameters are zero")
    return p.comm_cost / D, p.master_cost / D, p.t_w / D


def scalability_bound(p: BsfParams) -> ScalabilityReport:
    """Upper bound of scalability and the integer worker count that attains it"""
    if p.t_w == 0:
        return ScalabilityReport(
            K_star=0.0, K_opt=1, a_max=1.0, e_at_opt=1.0,
            note='no work to distribute: speedup decreases with K',
        )

    if p.comm_cost == 0:
        # speedup tends to T1 / (t_r + t_p) as K grows without bound
        if p.master_cost == 0:
            a_limit, e_limit = math.inf, 1.0
        else:
            a_limit, e_limit = predict_T1(p) / p.master_cost, 0.0
        return ScalabilityReport(
            K_star=math.inf, K_opt=None, a_max=a_limit, e_at_opt=e_limit,
            unbounded=True, note='zero communication cost: scalability is unbounded',
        )

    K_star = math.sqrt(p.t_w / p.comm_cost)
    if K_star < 1:
        return ScalabilityReport(
            K_star=K_star, K_opt=1, a_max=1.0, e_at_opt=1.0,
            note='bound below one worker: no parallel speedup',
        )

    lower = max(1, math.floor(K_star))
    upper = max(1, math.ceil(K_star))
    K_opt, a_max = lower, predict_speedup(p, lower)
    if upper != lower:
        a_upper = predict_speedup(p, upper)
        # ties go to the smaller K
        if a_upper > a_max and not math.isclose(a_upper, a_max, rel_tol=TIE_TOLERANCE):
            K_opt, a_max = upper, a_upper
    return ScalabilityReport(K_star=K_star, K_opt=K_opt, a_max=a_max, e_at_opt=a_max / K_opt)
