"""Product-partition instances embedded into phase retrieval.

A multiset u_1..u_N of integers >= 2 asks whether some subset of the
first N-1 values has product u_N times the product of the rest. The
embedding plants the zero pairs (-u_k, -1/u_k) with anchor u_max^(N-1)
and top lag |x(0)|^2 * u_N, so that anchored solutions of the retrieval
instance correspond exactly to solution subsets. Reading a near-solution
back off is a root membership test with provable margins, which is what
``discriminate`` and ``decide_pp`` implement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from .errors import (
    BudgetExceeded,
    HypothesisViolated,
    InvalidWitness,
    NoFeasibleSolution,
    OverflowBeyondPrecision,
    SolverFailure,
)
from .signal_core import ComplexSignal
from .solvers import PRInstance, SolverConfig, reduction_iteration_budget
from .ztransform import ZeroPairing, eval_ztransform

BOTH_ROOTS_CAP = 0.25
SELECT_MARGIN = 0.75
BRUTE_FORCE_BUDGET = 26


class PPAnswer(Enum):
    HAS_SOLUTION = "has_solution"
    NO_SOLUTION = "no_solution"


class Verdict(Enum):
    SELECT_GAMMA = "select_gamma"
    SELECT_RECIP = "select_recip"
    BOTH_ROOTS = "both_roots"


@dataclass(frozen=True, eq=False)
class PPInstance:
    """Values u_1..u_N, all integers >= 2, with max(u_1..u_{N-1}) >= 3.

    Instances whose first N-1 values are all 2 are rejected; squaring
    every value yields an equivalent instance that is admissible.
    """

    u: tuple

    def __post_init__(self):
        vals = tuple(int(v) for v in self.u)
        if len(vals) < 2:
            raise ValueError("need at least two values")
        if any(v < 2 for v in vals):
            raise ValueError("all values must be >= 2")
        if max(vals[:-1]) < 3:
            raise ValueError(
                "max(u_1..u_{N-1}) must be >= 3; square all values to rescale"
            )
        object.__setattr__(self, "u", vals)

    @property
    def n(self) -> int:
        return len(self.u)

    @property
    def u_max(self) -> int:
        return max(self.u[:-1])


@dataclass(frozen=True, eq=False)
class PPDecision:
    """Outcome of a decision procedure.

    witness holds original 1-based indices into u_1..u_{N-1} when one is
    known; removed_pairs lists index pairs eliminated by the duplicate
    rule, each of which contributes one index to either side.
    """

    answer: PPAnswer
    witness: frozenset | None = None
    removed_pairs: tuple = ()


@dataclass(frozen=True, eq=False)
class HardInstance:
    """Constructed retrieval instance plus exact integer bookkeeping."""

    pp: PPInstance
    pr: PRInstance | None
    anchor_exact: int
    scale_exact: int
    ground_truth: ComplexSignal | None = None


@dataclass(frozen=True, eq=False)
class DiscriminationResult:
    """Verdict for one value plus the two measured root magnitudes."""

    verdict: Verdict
    mag_gamma: float
    mag_recip: float


@dataclass(frozen=True, eq=False)
class ClauseCheck:
    """Margin bookkeeping for one index of the separation estimate."""

    k: int
    double_root: bool
    mag_beta: float
    mag_recip: float
    margin: float
    passed: bool


@dataclass(frozen=True, eq=False)
class LemmaBoundsReport:
    c0: float
    cap: float
    checks: tuple

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _subset_product(values, indices) -> int:
    out = 1
    for i in indices:
        out *= values[i]
    return out


def brute_force_pp(pp: PPInstance, budget: int = BRUTE_FORCE_BUDGET) -> PPDecision:
    """Exhaustive reference decision in exact integer arithmetic.

    Scans subsets of {1..N-1} in increasing integer encoding (bit k-1
    is index k) and returns the first Gamma with
    prod_Gamma^2 == u_N * prod(all of u_1..u_{N-1}), an equivalent,
    division-free form of the product identity.
    """
    if pp.n > budget:
        raise BudgetExceeded(f"N={pp.n} exceeds brute-force budget {budget}")
    rest = pp.u[:-1]
    target = pp.u[-1]
    p = len(rest)
    total = math.prod(rest)
    for v in range(1 << p):
        gamma_prod = 1
        for k in range(p):
            if (v >> k) & 1:
                gamma_prod *= rest[k]
        if gamma_prod * gamma_prod == target * total:
            return PPDecision(
                PPAnswer.HAS_SOLUTION,
                frozenset(k + 1 for k in range(p) if (v >> k) & 1),
                (),
            )
    return PPDecision(PPAnswer.NO_SOLUTION, None, ())


def enumerate_witnesses(pp: PPInstance, budget: int = BRUTE_FORCE_BUDGET) -> list:
    """Every solution subset, in increasing integer encoding."""
    if pp.n > budget:
        raise BudgetExceeded(f"N={pp.n} exceeds brute-force budget {budget}")
    rest = pp.u[:-1]
    target = pp.u[-1]
    p = len(rest)
    total = math.prod(rest)
    out = []
    for v in range(1 << p):
        gamma_prod = 1
        for k in range(p):
            if (v >> k) & 1:
                gamma_prod *= rest[k]
        if gamma_prod * gamma_prod == target * total:
            out.append(frozenset(k + 1 for k in range(p) if (v >> k) & 1))
    return out


def _pr_from_values(values, u_last: int, anchor_exact: int, grid_mult: int = 4) -> PRInstance:
    pairs = tuple((-float(v), -1.0 / v) for v in values)
    flags = (False,) * len(pairs)
    scale = float(anchor_exact) ** 2 * u_last
    pairing = ZeroPairing(scale, pairs, flags)
    return PRInstance.from_pairing(pairing, float(anchor_exact), grid_mult)


def construct_hard_instance(pp: PPInstance, grid_mult: int = 4, want_float: bool = True) -> HardInstance:
    """Embed a product-partition instance as a retrieval instance.

    anchor = u_max^(N-1) and top lag |anchor|^2 * u_N, zero pairs
    (-u_k, -1/u_k) for k = 1..N-1. The exact integers are always
    recorded; the float instance is built only when want_float and its
    construction refuses to proceed once u_max^(2N) exceeds 2^52, where
    double precision would silently round the planted integers.
    """
    u_max = pp.u_max
    n = pp.n
    anchor_exact = u_max ** (n - 1)
    scale_exact = anchor_exact * anchor_exact * pp.u[-1]
    pr = None
    if want_float:
        if u_max ** (2 * n) > 2 ** 52:
            raise OverflowBeyondPrecision(
                f"u_max^(2N) = {u_max ** (2 * n)} exceeds 2^52; exact mode only"
            )
        pr = _pr_from_values(pp.u[:-1], pp.u[-1], anchor_exact, grid_mult)
    return HardInstance(pp, pr, anchor_exact, scale_exact, None)


def _check_witness(pp: PPInstance, gamma_set) -> frozenset:
    gamma = frozenset(int(k) for k in gamma_set)
    p = pp.n - 1
    if not gamma <= frozenset(range(1, p + 1)):
        raise InvalidWitness(f"indices must lie in 1..{p}")
    left = _subset_product(pp.u, [k - 1 for k in gamma])
    right = pp.u[-1] * _subset_product(
        pp.u, [k - 1 for k in range(1, p + 1) if k not in gamma]
    )
    if left != right:
        raise InvalidWitness(f"product identity fails: {left} != {right}")
    return gamma


def ground_truth_exact(pp: PPInstance, gamma_set) -> tuple:
    """Entries of the planted solution as exact Fractions.

    x(0) = u_max^(N-1) and the remaining entries expand
    x(0) * prod (z - beta_k) with beta_k = -u_k on the witness side and
    -1/u_k off it. When prod of the off-side values divides x(0) the
    entries are verified integral; otherwise they stay rational.
    """
    gamma = _check_witness(pp, gamma_set)
    p = pp.n - 1
    betas = [
        Fraction(-pp.u[k - 1]) if k in gamma else Fraction(-1, pp.u[k - 1])
        for k in range(1, p + 1)
    ]
    coeffs = [Fraction(pp.u_max ** (pp.n - 1))]
    for b in betas:
        nxt = coeffs + [Fraction(0)]
        for i, c in enumerate(coeffs):
            nxt[i + 1] -= b * c
        coeffs = nxt
    off_product = _subset_product(pp.u, [k - 1 for k in range(1, p + 1) if k not in gamma])
    if (pp.u_max ** (pp.n - 1)) % off_product == 0:
        if any(c.denominator != 1 for c in coeffs):
            raise AssertionError("entries should be integral when the off product divides the anchor")
    return tuple(coeffs)


def ground_truth_signal(pp: PPInstance, gamma_set) -> ComplexSignal:
    """Float view of ground_truth_exact; exact while entries stay dyadic."""
    exact = ground_truth_exact(pp, gamma_set)
    return ComplexSignal(np.array([float(c) for c in exact], dtype=np.complex128), full_support=True)


def discrimination_constant(u_max: int, n: int) -> float:
    """Guaranteed gap 1 - 2 * u_max^(-N) between the two root magnitudes."""
    return 1.0 - 2.0 * float(u_max) ** (-n)


def discriminate(xm: ComplexSignal, uk: int, u_max: int, n: int) -> DiscriminationResult:
    """Classify one value against a near-solution by root membership.

    Measures a = |X_m(-u_k)| and b = |X_m(-1/u_k)|. Both below 1/4 means
    both roots are present (a duplicate value split across the sides);
    b >= a + 3/4 selects the gamma side; anything else selects the
    reciprocal side. The constant thresholds are valid whenever
    u_max^(-N) <= 1/4, which the admission rule guarantees.
    """
    if uk < 2:
        raise ValueError("values are >= 2")
    if float(u_max) ** (-n) > BOTH_ROOTS_CAP:
        raise ValueError("thresholds require u_max^(-N) <= 1/4")
    a = abs(eval_ztransform(xm, -float(uk)))
    b = abs(eval_ztransform(xm, -1.0 / uk))
    if max(a, b) <= BOTH_ROOTS_CAP:
        verdict = Verdict.BOTH_ROOTS
    elif b >= a + SELECT_MARGIN:
        verdict = Verdict.SELECT_GAMMA
    else:
        verdict = Verdict.SELECT_RECIP
    return DiscriminationResult(verdict, a, b)


def check_lemma_bounds(pp: PPInstance, gamma_set, perturbation: ComplexSignal) -> LemmaBoundsReport:
    """Measure the separation margins on a perturbed planted solution.

    With ||perturbation|| <= u_max^(-2N), every index k must satisfy
    either |X_m(1/beta_k)| >= |X_m(beta_k)| + c0 with
    c0 = 1 - 2 u_max^(-N) (reciprocal not a root), or, when both roots
    are present, max of the two magnitudes <= u_max^(-N). Margins are
    reported per index; positive margin means the clause holds.
    """
    gamma = _check_witness(pp, gamma_set)
    n = pp.n
    u_max = pp.u_max
    if perturbation.n != n:
        raise ValueError("perturbation length must match the instance")
    hyp = float(u_max) ** (-2 * n)
    delta = perturbation.entries
    if float(np.linalg.norm(delta)) > hyp * (1.0 + 1e-12):
        raise HypothesisViolated(
            f"||perturbation|| = {float(np.linalg.norm(delta)):.3e} exceeds u_max^(-2N) = {hyp:.3e}"
        )
    exact = ground_truth_exact(pp, gamma)
    xm = ComplexSignal(np.array([float(c) for c in exact], dtype=np.complex128) + delta)
    c0 = discrimination_constant(u_max, n)
    cap = float(u_max) ** (-n)
    side = {k: (k in gamma) for k in range(1, n)}
    checks = []
    for k in range(1, n):
        uk = pp.u[k - 1]
        beta = -float(uk) if side[k] else -1.0 / uk
        recip = 1.0 / beta
        double = any(
            pp.u[j - 1] == uk and side[j] != side[k] for j in range(1, n) if j != k
        )
        mag_beta = abs(eval_ztransform(xm, beta))
        mag_recip = abs(eval_ztransform(xm, recip))
        if double:
            margin = cap - max(mag_beta, mag_recip)
        else:
            margin = mag_recip - mag_beta - c0
        checks.append(ClauseCheck(k, double, mag_beta, mag_recip, float(margin), margin >= 0.0))
    return LemmaBoundsReport(c0, cap, tuple(checks))


def decide_pp(
    pp: PPInstance,
    solver,
    cfg: SolverConfig | None = None,
    grid_mult: int = 4,
) -> PPDecision:
    """Decide a product-partition instance through retrieval plus readout.

    Each round plants the surviving values, runs the solver to a
    near-solution, and classifies every value by root membership. A
    both-roots verdict on a duplicated value removes that pair of
    indices (one belongs to each side of any solution) and restarts on
    the smaller multiset; a both-roots verdict without a duplicate
    already certifies a solution exists. After a clean round the claimed
    partition is verified exactly: the answer is positive iff the
    selected products satisfy the identity. A solver that certifies the
    anchor infeasible (NoFeasibleSolution) certifies no subset works.

    The anchor keeps the admission-time u_max through removals, so
    shrunken rounds stay well-posed even when the largest value was
    removed.
    """
    u_last = pp.u[-1]
    u_max = pp.u_max
    survivors = [(k, pp.u[k - 1]) for k in range(1, pp.n)]
    removed: list = []
    gamma1: list = []
    gamma2: list = []
    g1_vals: list = []
    g2_vals: list = []
    while survivors:
        gamma1, gamma2, g1_vals, g2_vals = [], [], [], []
        n_cur = len(survivors) + 1
        anchor_exact = u_max ** (n_cur - 1)
        inst = _pr_from_values([v for _, v in survivors], u_last, anchor_exact, grid_mult)
        run_cfg = cfg or SolverConfig(
            max_iters=reduction_iteration_budget(n_cur, u_max), seed=0
        )
        try:
            trace = solver(inst, run_cfg)
        except NoFeasibleSolution:
            return PPDecision(PPAnswer.NO_SOLUTION, None, tuple(removed))
        if not trace.iterates:
            raise SolverFailure("solver returned no iterate")
        xm = trace.iterates[-1]
        restart = False
        for pos, (orig_k, uk) in enumerate(survivors):
            res = discriminate(xm, uk, u_max, n_cur)
            if res.verdict is Verdict.BOTH_ROOTS:
                dup = next(
                    (i for i, (_, v) in enumerate(survivors) if v == uk and i != pos),
                    None,
                )
                if dup is None:
                    # both roots present yet the value is unique: a solution
                    # exists even though no explicit subset was read off
                    return PPDecision(PPAnswer.HAS_SOLUTION, None, tuple(removed))
                removed.append(tuple(sorted((orig_k, survivors[dup][0]))))
                survivors = [s for i, s in enumerate(survivors) if i not in (pos, dup)]
                restart = True
                break
            if res.verdict is Verdict.SELECT_GAMMA:
                gamma1.append(orig_k)
                g1_vals.append(uk)
            else:
                gamma2.append(orig_k)
                g2_vals.append(uk)
        if restart:
            continue
        break
    if not survivors:
        return PPDecision(PPAnswer.NO_SOLUTION, None, tuple(removed))
    quot = Fraction(math.prod(g1_vals), math.prod(g2_vals))
    if quot != u_last:
        return PPDecision(PPAnswer.NO_SOLUTION, None, tuple(removed))
    return PPDecision(PPAnswer.HAS_SOLUTION, frozenset(gamma1), tuple(removed))
