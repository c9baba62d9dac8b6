from fractions import Fraction

import numpy as np
import pytest

from fprlab.errors import (
    BudgetExceeded,
    HypothesisViolated,
    InvalidWitness,
    OverflowBeyondPrecision,
    SolverFailure,
)
from fprlab.hardness import (
    HardInstance,
    PPAnswer,
    PPDecision,
    PPInstance,
    Verdict,
    brute_force_pp,
    check_lemma_bounds,
    construct_hard_instance,
    decide_pp,
    discriminate,
    discrimination_constant,
    enumerate_witnesses,
    ground_truth_exact,
    ground_truth_signal,
)
from fprlab.signal_core import ComplexSignal, autocorrelation, fourier_intensity
from fprlab.solvers import IterateTrace, amplitude_loss, oracle_solve


def test_instance_admission():
    pp = PPInstance((2, 3, 6))
    assert pp.n == 3
    assert pp.u_max == 3
    with pytest.raises(ValueError, match="square"):
        PPInstance((2, 2))
    with pytest.raises(ValueError):
        PPInstance((2, 2, 4))
    with pytest.raises(ValueError):
        PPInstance((3,))
    with pytest.raises(ValueError):
        PPInstance((3, 1, 6))


def test_brute_force_frozen():
    d = brute_force_pp(PPInstance((2, 3, 6)))
    assert d.answer is PPAnswer.HAS_SOLUTION
    assert d.witness == frozenset({1, 2})
    d = brute_force_pp(PPInstance((2, 3, 5)))
    assert d.answer is PPAnswer.NO_SOLUTION
    assert d.witness is None
    d = brute_force_pp(PPInstance((2, 2, 3, 3)))
    assert d.witness == frozenset({1, 3})
    d = brute_force_pp(PPInstance((3, 3, 9)))
    assert d.witness == frozenset({1, 2})


def test_brute_force_first_witness_in_subset_integer_order():
    # both {1,2} and {1,3} solve (2,3,3,2); encoding 3 < 5 picks {1,2}
    d = brute_force_pp(PPInstance((2, 3, 3, 2)))
    assert d.witness == frozenset({1, 2})
    wits = enumerate_witnesses(PPInstance((2, 3, 3, 2)))
    assert wits == [frozenset({1, 2}), frozenset({1, 3})]
    assert enumerate_witnesses(PPInstance((2, 3, 5))) == []


def test_brute_force_budget():
    big = PPInstance((3,) * 27)
    with pytest.raises(BudgetExceeded):
        brute_force_pp(big)
    with pytest.raises(BudgetExceeded):
        enumerate_witnesses(big)


def test_construct_hard_instance_frozen():
    hard = construct_hard_instance(PPInstance((2, 3, 6)))
    assert hard.anchor_exact == 9
    assert hard.scale_exact == 486
    assert hard.pr is not None
    assert complex(hard.pr.anchor) == 9.0
    assert hard.pr.pairing.scale == 486.0
    assert hard.pr.pairing.pairs[0] == pytest.approx((-2.0, -0.5))
    assert hard.pr.pairing.pairs[1] == pytest.approx((-3.0, -1.0 / 3.0))
    assert hard.pr.grid.m == 12

    hard = construct_hard_instance(PPInstance((2, 2, 3, 3)))
    assert hard.anchor_exact == 27
    assert hard.scale_exact == 2187


def test_hard_instance_spectrum_matches_planted_signal():
    pp = PPInstance((2, 3, 6))
    hard = construct_hard_instance(pp)
    gt = ground_truth_signal(pp, {1, 2})
    direct = fourier_intensity(gt, hard.pr.grid.omegas).values
    assert np.allclose(hard.pr.grid.values, direct, rtol=1e-9, atol=1e-6)
    assert amplitude_loss(gt, hard.pr.grid) <= 1e-12


def test_overflow_guard():
    pp = PPInstance((6,) * 11 + (4,))
    with pytest.raises(OverflowBeyondPrecision):
        construct_hard_instance(pp)
    hard = construct_hard_instance(pp, want_float=False)
    assert hard.pr is None
    assert hard.anchor_exact == 6 ** 11
    assert hard.scale_exact == 6 ** 22 * 4


def test_ground_truth_exact_frozen():
    got = ground_truth_exact(PPInstance((2, 3, 6)), {1, 2})
    assert got == (Fraction(9), Fraction(45), Fraction(54))
    got = ground_truth_exact(PPInstance((2, 2, 3, 3)), {1, 3})
    assert got == (Fraction(27), Fraction(297, 2), Fraction(459, 2), Fraction(81))


def test_ground_truth_signal_frozen():
    gt = ground_truth_signal(PPInstance((2, 2, 3, 3)), {1, 3})
    assert gt.full_support
    assert np.allclose(gt.entries, [27.0, 148.5, 229.5, 81.0])
    # top autocorrelation lag carries the planted product exactly
    r = autocorrelation(gt)
    assert complex(r.entries[-1]) == 27.0 * 81.0


def test_ground_truth_rejects_bad_witness():
    with pytest.raises(InvalidWitness):
        ground_truth_exact(PPInstance((2, 3, 6)), {1})
    with pytest.raises(InvalidWitness):
        ground_truth_exact(PPInstance((2, 3, 6)), {5})


def test_discriminate_frozen():
    xm = ComplexSignal(np.array([9.0, 45.0, 54.0]))
    res = discriminate(xm, 2, 3, 3)
    assert res.verdict is Verdict.SELECT_GAMMA
    assert res.mag_gamma == pytest.approx(0.0, abs=1e-9)
    assert res.mag_recip == pytest.approx(135.0, rel=1e-9)
    res = discriminate(xm, 3, 3, 3)
    assert res.verdict is Verdict.SELECT_GAMMA
    assert res.mag_recip == pytest.approx(360.0, rel=1e-9)


def test_discriminate_recip_and_both_roots():
    # planted solution of (2,2,3,3) for witness {1,3}: carries -2, -1/2, -3
    xm = ground_truth_signal(PPInstance((2, 2, 3, 3)), {1, 3})
    res = discriminate(xm, 2, 3, 4)
    assert res.verdict is Verdict.BOTH_ROOTS
    assert max(res.mag_gamma, res.mag_recip) <= 0.25
    res = discriminate(xm, 3, 3, 4)
    assert res.verdict is Verdict.SELECT_GAMMA
    assert res.mag_recip == pytest.approx(540.0, rel=1e-9)
    # reciprocal side: signal carrying -1/2 but not -2
    y = ComplexSignal(np.array([2.0, 1.0]))  # root -1/2
    res = discriminate(y, 2, 3, 2)
    assert res.verdict is Verdict.SELECT_RECIP
    assert res.mag_gamma > 0.25


def test_discriminate_guards():
    xm = ComplexSignal(np.array([9.0, 45.0, 54.0]))
    with pytest.raises(ValueError):
        discriminate(xm, 1, 3, 3)
    with pytest.raises(ValueError):
        discriminate(xm, 2, 1, 1)


def test_discrimination_constant_frozen():
    assert discrimination_constant(3, 3) == pytest.approx(25.0 / 27.0)
    assert discrimination_constant(3, 3) == 1.0 - 2.0 * 3.0 ** -3


def test_lemma_bounds_clean():
    pp = PPInstance((2, 3, 6))
    zero = ComplexSignal(np.zeros(3))
    rep = check_lemma_bounds(pp, {1, 2}, zero)
    assert rep.all_passed
    assert rep.c0 == pytest.approx(25.0 / 27.0)
    assert rep.cap == pytest.approx(3.0 ** -3)
    assert [c.double_root for c in rep.checks] == [False, False]
    assert all(c.margin > 100.0 for c in rep.checks)


def test_lemma_bounds_at_hypothesis_boundary():
    pp = PPInstance((2, 3, 6))
    hyp = 3.0 ** -6
    rng = np.random.default_rng(0)
    for _ in range(20):
        d = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        d = d / np.linalg.norm(d) * hyp
        rep = check_lemma_bounds(pp, {1, 2}, ComplexSignal(d))
        assert rep.all_passed


def test_lemma_bounds_double_root_clause():
    pp = PPInstance((2, 2, 3, 3))
    zero = ComplexSignal(np.zeros(4))
    rep = check_lemma_bounds(pp, {1, 3}, zero)
    assert rep.all_passed
    assert [c.double_root for c in rep.checks] == [True, True, False]
    assert rep.cap == pytest.approx(3.0 ** -4)


def test_lemma_bounds_hypothesis_guard():
    pp = PPInstance((2, 3, 6))
    with pytest.raises(HypothesisViolated):
        check_lemma_bounds(pp, {1, 2}, ComplexSignal(np.array([0.1, 0.0, 0.0])))
    with pytest.raises(ValueError):
        check_lemma_bounds(pp, {1, 2}, ComplexSignal(np.zeros(4)))


def test_decide_frozen_positive():
    d = decide_pp(PPInstance((2, 3, 6)), oracle_solve)
    assert d.answer is PPAnswer.HAS_SOLUTION
    assert d.witness == frozenset({1, 2})
    assert d.removed_pairs == ()


def test_decide_frozen_negative():
    d = decide_pp(PPInstance((2, 3, 5)), oracle_solve)
    assert d.answer is PPAnswer.NO_SOLUTION
    assert d.witness is None


def test_decide_duplicate_removal():
    d = decide_pp(PPInstance((2, 2, 3, 3)), oracle_solve)
    assert d.answer is PPAnswer.HAS_SOLUTION
    assert d.witness == frozenset({3})
    assert d.removed_pairs == ((1, 2),)

    d = decide_pp(PPInstance((3, 3, 2, 2)), oracle_solve)
    assert d.answer is PPAnswer.HAS_SOLUTION
    assert d.witness == frozenset({3})
    assert d.removed_pairs == ((1, 2),)


def _stub_solver_for(entries):
    sig = ComplexSignal(np.asarray(entries, dtype=np.complex128))

    def solver(inst, cfg=None, start=None):
        return IterateTrace((sig,), np.array([0.0]), True)

    return solver


def test_decide_exhausting_removals_reports_no_solution():
    # a fake near-solution carrying all four root pairs forces the
    # duplicate rule twice, emptying the instance
    roots = np.array([-2.0, -0.5, -3.0, -1.0 / 3.0])
    stub = _stub_solver_for(np.poly(roots))
    d = decide_pp(PPInstance((2, 2, 3, 3, 5)), stub)
    assert d.answer is PPAnswer.NO_SOLUTION
    assert d.removed_pairs == ((1, 2), (3, 4))


def test_decide_both_roots_without_duplicate_certifies_existence():
    stub = _stub_solver_for(np.poly(np.array([-2.0, -0.5])))
    d = decide_pp(PPInstance((2, 3, 6)), stub)
    assert d.answer is PPAnswer.HAS_SOLUTION
    assert d.witness is None


def test_decide_rejects_empty_trace():
    def broken(inst, cfg=None, start=None):
        return IterateTrace((), np.array([]), False)

    with pytest.raises(SolverFailure):
        decide_pp(PPInstance((2, 3, 6)), broken)


def _witness_identity_holds(pp, decision):
    removed = {i for pair in decision.removed_pairs for i in pair}
    top, bot = 1, 1
    for k in range(1, pp.n):
        if k in removed:
            continue
        if k in decision.witness:
            top *= pp.u[k - 1]
        else:
            bot *= pp.u[k - 1]
    return top == pp.u[-1] * bot


def test_decide_agrees_with_brute_force_on_random_solvable():
    from fprlab.generate import random_solvable_pp

    rng = np.random.default_rng(42)
    for trial in range(25):
        pp = random_solvable_pp(3 + trial % 3, rng, unique_witness=False)
        d = decide_pp(pp, oracle_solve)
        assert d.answer is PPAnswer.HAS_SOLUTION
        if d.witness is not None:
            assert _witness_identity_holds(pp, d)


def test_decide_mini_sweep_agreement():
    from fprlab.generate import all_pp_instances

    n_checked = 0
    for pp in all_pp_instances(3, 2, 4):
        want = brute_force_pp(pp).answer
        got = decide_pp(pp, oracle_solve).answer
        assert got is want, f"disagreement on {pp.u}"
        n_checked += 1
    assert n_checked == 27 - 3  # (2,2,*) inadmissible
