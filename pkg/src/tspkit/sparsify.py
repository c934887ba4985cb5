"""Cost-preserving cut sparsification of a feasible 2ECSS point.

Each edge is kept independently with probability ``r_e = max(p_e, q_e)``
and reweighted by ``1 / r_e``; ``p_e`` follows the edge's strength in the
graph weighted by ``x`` (cut preservation) and ``q_e`` its share of the
cost (cost preservation). The sample is then scaled up by ``1 + eps'`` and
accepted only if it passes posterior checks.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CheckFailure, PreconditionError, SamplingFailure
from .graph import FractionalSolution, Graph
from .mincut import WeightedView, exact_strengths, stoer_wagner, weight_matrix
from .oracles import MAX_CUT_ENUM_N, min_cut_by_enumeration

log = logging.getLogger(__name__)

MAX_ATTEMPTS = 3
CUT_TOL = 1e-9
# Exhaustive cut checks are used up to this size, Stoer-Wagner above it.
ENUMERATION_LIMIT = 14


@dataclass(frozen=True)
class SparsifyParams:
    epsilon: float = 0.25
    d: float = 8.0
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.epsilon < 1:
            raise PreconditionError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.d < 1:
            raise PreconditionError(f"oversampling constant d must be >= 1, got {self.d}")

    @property
    def inner_epsilon(self) -> float:
        """Largest eps' with (1 + eps')**2 <= 1 + eps."""
        return math.sqrt(1 + self.epsilon) - 1

    def oversampling(self, n: int) -> float:
        return self.d * math.log(max(n, 2))


@dataclass(frozen=True)
class SampleProbabilities:
    p: np.ndarray
    q: np.ndarray
    r: np.ndarray


@dataclass(frozen=True)
class SparsifyResult:
    y: FractionalSolution
    probabilities: SampleProbabilities
    strengths: np.ndarray
    attempts: int
    single_shot_success: bool
    support_bound: float
    failures: list = field(default_factory=list)


def sample_probabilities(g: Graph, x: FractionalSolution, strengths: np.ndarray,
                         params: SparsifyParams) -> SampleProbabilities:
    eps_in = params.inner_epsilon
    delta = params.oversampling(g.n)
    xv = x.values
    # Scale-free costs, so probabilities do not move when costs are rescaled.
    cost = g.costs / np.max(g.costs) if g.m and np.max(g.costs) > 0 else g.costs
    weighted_total = float(np.dot(cost, xv))
    with np.errstate(divide="ignore", invalid="ignore"):
        p = np.where(xv > 0, np.minimum(1.0, delta * xv / (eps_in ** 2 * strengths)), 0.0)
        if weighted_total > 0:
            q = np.minimum(1.0, delta * cost * xv / (eps_in ** 2 * weighted_total))
        else:
            q = np.zeros_like(xv)
    return SampleProbabilities(p, q, np.maximum(p, q))


def support_bound(n: int, params: SparsifyParams) -> float:
    """Concrete ceiling on the sample's support size."""
    delta = params.oversampling(n)
    eps_in = params.inner_epsilon
    return 4 * (n * delta / eps_in ** 2 + delta / eps_in ** 2)


def sample_once(x: np.ndarray, r: np.ndarray, uniforms: np.ndarray) -> np.ndarray:
    """Keep edge ``e`` with value ``x_e / r_e`` when ``uniforms[e] < r_e``."""
    keep = (uniforms < r) & (r > 0)
    out = np.zeros_like(x)
    out[keep] = x[keep] / r[keep]
    return out


def edge_uniforms(seed: int, attempt: int, m: int) -> np.ndarray:
    """Uniforms from a Philox counter stream keyed by ``(seed, attempt)``;
    draw ``e`` belongs to edge ``e``."""
    bitgen = np.random.Philox(key=[seed & (2**64 - 1), attempt])
    return np.random.Generator(bitgen).random(m)


def min_cut_value(g: Graph, weights: np.ndarray) -> float:
    if g.n <= ENUMERATION_LIMIT:
        return min_cut_by_enumeration(g, weights)[0]
    return stoer_wagner(weight_matrix(g, weights))[0]


def sparsify_solution(g: Graph, x: FractionalSolution,
                      params: SparsifyParams | None = None, *,
                      debug_verify: bool = False) -> SparsifyResult:
    """Sparse feasible point ``y`` with ``support(y)`` inside ``support(x)``
    and cost at most ``(1 + eps)`` times that of ``x``.

    Up to three independent samples are drawn; the first that passes the
    feasibility, cost and support checks is returned.
    """
    params = params or SparsifyParams()
    if g.n < 2:
        return SparsifyResult(x, SampleProbabilities(*(np.ones(g.m),) * 3),
                              np.zeros(g.m), 1, True, 0.0)
    if debug_verify:
        cut = min_cut_value(g, x.values) if g.n <= MAX_CUT_ENUM_N else None
        if cut is not None and cut < 2 - CUT_TOL:
            raise PreconditionError(f"input point is infeasible: min cut {cut}")

    strengths = exact_strengths(WeightedView.of(g, x.values))
    probs = sample_probabilities(g, x, strengths, params)
    bound = support_bound(g.n, params)
    scale = 1 + params.inner_epsilon
    failures = []
    for attempt in range(MAX_ATTEMPTS):
        sampled = sample_once(x.values, probs.r, edge_uniforms(params.seed, attempt, g.m))
        y = FractionalSolution.from_values(g, scale * sampled)
        problems = _posterior_problems(g, x, y, params, bound)
        if not problems:
            return SparsifyResult(y, probs, strengths, attempt + 1, attempt == 0, bound, failures)
        log.info("sparsification attempt %d rejected: %s", attempt + 1, "; ".join(problems))
        failures.append(problems)
    raise SamplingFailure(
        f"sparsification failed {MAX_ATTEMPTS} times (a low-probability event)",
        {"failures": failures, "seed": params.seed, "expected_support": float(probs.r.sum())})


def _posterior_problems(g: Graph, x: FractionalSolution, y: FractionalSolution,
                        params: SparsifyParams, bound: float) -> list[str]:
    problems = []
    if np.any((y.values > 0) & (x.values <= 0)):
        problems.append("support escaped support(x)")
    cut = min_cut_value(g, y.values)
    if cut < 2 - CUT_TOL:
        problems.append(f"min cut {cut:.6g} < 2")
    if y.objective > (1 + params.epsilon) * x.objective * (1 + 1e-12):
        problems.append(f"cost {y.objective:.6g} exceeds (1+eps) * {x.objective:.6g}")
    size = int(np.count_nonzero(y.values))
    if size > bound:
        problems.append(f"support size {size} exceeds {bound:.6g}")
    return problems


def check_sparsified(g: Graph, x: FractionalSolution, y: FractionalSolution,
                     params: SparsifyParams) -> None:
    """Raise :class:`CheckFailure` unless ``y`` meets every output guarantee."""
    problems = _posterior_problems(g, x, y, params, support_bound(g.n, params))
    if problems:
        raise CheckFailure("; ".join(problems))
