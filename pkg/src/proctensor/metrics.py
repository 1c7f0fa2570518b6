"""Temporal-correlation quantifiers and the proved inequality audits.

All quantities are mutual informations of the 2n-slot Choi state, in nats:
total correlations over all slots, per-step (input:output) Markovian
correlations, and the non-Markovian correlations across step blocks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .config import DEFAULT_TOL
from .linalg import (
    DensityMatrix,
    kron,
    mutual_information,
    partial_trace,
    relative_entropy,
)
from .processes import ProcessTensor


@dataclass(frozen=True)
class CorrelationReport:
    """Correlation quantifiers of one process, all in nats."""

    n: int
    d: int
    total: float                      # multipartite MI over all 2n slots
    step_markov: tuple[float, ...]    # per-step (input:output) MI
    markov: float                     # sum of step_markov
    non_markov: float                 # MI across step blocks
    step_complement: tuple[float, ...]  # 2 ln d minus each step value
    additivity_residual: float        # |total - (markov + non_markov)|


@dataclass(frozen=True)
class BoundAudit:
    """Signed slacks (bound minus quantity) for every proved inequality.

    A nonnegative slack (up to tolerance) means the bound holds; zero slack
    flags saturation. ``two_step_slacks`` is populated only for n = 2.
    """

    unordered_slack: tuple[float, ...]   # per k: 2*sum_{j!=k} complement_j - N
    ordered_slack: tuple[float, ...]     # per k: 2*sum_{j<k} + sum_{j>k} complements - N
    max_nonmarkov_slack: float           # 2(n-1) ln d - N
    markov_tradeoff_slack: float         # 2n ln d - ((2^n-1)/(2^n-2)) N - M
    total_tradeoff_slack: float          # 2n ln d - N/(2^n-2) - I
    two_step_slacks: tuple[float, float] | None
    passed: bool


def _as_state(pt: ProcessTensor | DensityMatrix) -> tuple[DensityMatrix, int, int]:
    if isinstance(pt, ProcessTensor):
        return pt.state, pt.n, pt.d
    k = pt.num_subsystems
    if k == 0 or k % 2 != 0:
        raise ValueError(f"expected an even slot count, got {k}")
    d = pt.dims[0]
    if any(dim != d for dim in pt.dims):
        raise ValueError(f"slot dimensions must be uniform, got {pt.dims}")
    return pt, k // 2, d


def correlation_report(pt: ProcessTensor | DensityMatrix) -> CorrelationReport:
    """Compute all correlation quantifiers of a 2n-slot state.

    Accepts a raw multipartite density matrix as well, since the unordered
    bound applies without causality.
    """
    state, n, d = _as_state(pt)
    singles = tuple((j,) for j in range(2 * n))
    pairs = tuple((2 * j, 2 * j + 1) for j in range(n))
    total = mutual_information(state, singles)
    step = tuple(
        mutual_information(partial_trace(state, pair), ((0,), (1,))) for pair in pairs
    )
    markov = float(sum(step))
    non_markov = mutual_information(state, pairs)
    return CorrelationReport(
        n=n,
        d=d,
        total=total,
        step_markov=step,
        markov=markov,
        non_markov=non_markov,
        step_complement=tuple(2.0 * math.log(d) - m for m in step),
        additivity_residual=abs(total - (markov + non_markov)),
    )


def non_markovianity_crosscheck(pt: ProcessTensor | DensityMatrix) -> float:
    """Relative entropy to the product of step marginals.

    Independent route to the non-Markovian correlations: distance to the
    closest Markov (product-of-steps) Choi state. May return ``math.inf``
    on support mismatch; never silently capped.
    """
    state, n, _ = _as_state(pt)
    product = None
    dims: tuple[int, ...] = ()
    for j in range(n):
        marg = partial_trace(state, (2 * j, 2 * j + 1))
        product = marg.mat if product is None else kron(product, marg.mat)
        dims = dims + marg.dims
    return relative_entropy(state, DensityMatrix(product, dims, state.tol))


def audit_bounds(
    report: CorrelationReport, tol: float = DEFAULT_TOL.xcheck
) -> BoundAudit:
    """Evaluate every proved inequality on a correlation report."""
    n, d = report.n, report.d
    comp = report.step_complement
    big_n, big_m, big_i = report.non_markov, report.markov, report.total
    log_d = math.log(d)
    unordered = tuple(
        2.0 * sum(comp[j] for j in range(n) if j != k) - big_n for k in range(n)
    )
    ordered = tuple(
        2.0 * sum(comp[j] for j in range(k)) + sum(comp[j] for j in range(k + 1, n)) - big_n
        for k in range(n)
    )
    thm1 = 2.0 * (n - 1) * log_d - big_n
    if n == 1:
        # The step-count factor degenerates at n = 1, where N is identically
        # zero; the tradeoff bounds reduce to the plain range bounds.
        thm2 = 2.0 * n * log_d - big_m
        thm2p = 2.0 * n * log_d - big_i
    else:
        factor = (2.0**n - 1.0) / (2.0**n - 2.0)
        thm2 = 2.0 * n * log_d - factor * big_n - big_m
        thm2p = 2.0 * n * log_d - big_n / (2.0**n - 2.0) - big_i
    two_step = None
    if n == 2:
        two_step = (2.0 * comp[0] - big_n, comp[1] - big_n)
    slacks = list(unordered) + list(ordered) + [thm1, thm2, thm2p]
    if two_step is not None:
        slacks += list(two_step)
    passed = all(s >= -tol for s in slacks)
    return BoundAudit(
        unordered_slack=unordered,
        ordered_slack=ordered,
        max_nonmarkov_slack=thm1,
        markov_tradeoff_slack=thm2,
        total_tradeoff_slack=thm2p,
        two_step_slacks=two_step,
        passed=passed,
    )


IMPLICATIONS = (
    "high_step1_markov",   # M_1 near maximal forces N <= 2 eps
    "high_step2_markov",   # M_2 near maximal forces N <= eps
    "high_total",          # I near maximal forces N <= 2 eps
    "high_non_markov",     # N near maximal caps M_1, M_2 and I
)

Status = str  # "vacuous" | "holds" | "violated"


def implication_checks(report: CorrelationReport, epsilon: float) -> dict[str, Status]:
    """Evaluate the two-step high/low correlation implications.

    Each implication is "vacuous" when its premise does not fire, "holds"
    when premise and conclusion both hold, and "violated" otherwise.
    """
    if report.n != 2:
        raise ValueError(f"implication checks are defined for n = 2, got n = {report.n}")
    if epsilon < 0:
        raise ValueError(f"epsilon must be nonnegative, got {epsilon}")
    log_d = math.log(report.d)
    m1, m2 = report.step_markov
    big_n, big_i = report.non_markov, report.total

    def judge(premise: bool, conclusion: bool) -> Status:
        if not premise:
            return "vacuous"
        return "holds" if conclusion else "violated"

    return {
        "high_step1_markov": judge(m1 >= 2 * log_d - epsilon, big_n <= 2 * epsilon),
        "high_step2_markov": judge(m2 >= 2 * log_d - epsilon, big_n <= epsilon),
        "high_total": judge(big_i >= 4 * log_d - epsilon, big_n <= 2 * epsilon),
        "high_non_markov": judge(
            big_n >= 2 * log_d - 2 * epsilon,
            m1 <= log_d + epsilon and m2 <= 2 * epsilon and big_i <= 3 * log_d + epsilon,
        ),
    }
