"""Enumeration and normalization of intensity-equivalent signals.

All 2^(N-1) root selections of a pairing share one Fourier intensity.
Modding out global phase, translation and conjugate reflection leaves
2^(N-2) genuinely different signals; an anchor value x(0) cuts the set
down further, generically to a single survivor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    EnumerationBudgetExceeded,
    NoFeasibleSolution,
    ZeroAnchor,
    ZeroSignal,
)
from .signal_core import ComplexSignal
from .ztransform import RootSelection, ZeroPairing, signal_from_selection

ENUM_BUDGET_PAIRS = 24
ANCHOR_REL_TOL = 1e-6
CANON_DECIMALS = 9


@dataclass(frozen=True, eq=False)
class SolutionSet:
    """Signals sharing one intensity, tagged by their choice vectors."""

    pairing: ZeroPairing
    solutions: tuple
    canonical: bool = False

    def __post_init__(self):
        object.__setattr__(self, "solutions", tuple(self.solutions))

    def signals(self) -> list:
        return [sig for _, sig in self.solutions]


def enumerate_solutions(pairing: ZeroPairing, alpha: float = 0.0) -> SolutionSet:
    """Expand every root selection, ordered by choice-vector integer encoding.

    Bit k of the encoding picks gamma (True) or gamma_recip (False) for
    pair k. Raises EnumerationBudgetExceeded past 24 pairs.
    """
    p = pairing.n_pairs
    if p > ENUM_BUDGET_PAIRS:
        raise EnumerationBudgetExceeded(f"{p} pairs exceed the {ENUM_BUDGET_PAIRS}-pair budget")
    out = []
    for v in range(1 << p):
        choices = tuple(bool((v >> k) & 1) for k in range(p))
        sig = signal_from_selection(RootSelection(pairing, choices, alpha))
        out.append((choices, sig))
    return SolutionSet(pairing, tuple(out), canonical=False)


def _phase_fixed(e: np.ndarray) -> np.ndarray:
    w = e * np.exp(-1j * np.angle(e[0]))
    w[0] = abs(e[0])
    return w


def _lex_key(e: np.ndarray):
    rounded = np.round(np.column_stack([e.real, e.imag]), CANON_DECIMALS).ravel()
    return tuple(rounded)


def canonicalize(x: ComplexSignal) -> ComplexSignal:
    """Unique representative of x modulo the trivial ambiguities.

    Strips leading/trailing zero entries (translation), rotates the
    global phase so the first entry is real positive, and keeps the
    lexicographically smaller of the result and its conjugate
    reflection under (re, im) entry order after rounding to 1e-9.
    """
    mag = np.abs(x.entries)
    peak = float(np.max(mag))
    if peak == 0.0:
        raise ZeroSignal("the all-zero signal has no canonical form")
    nz = np.nonzero(mag > 1e-12 * peak)[0]
    core = x.entries[nz[0] : nz[-1] + 1]
    a = _phase_fixed(np.array(core))
    b = _phase_fixed(np.conj(core[::-1]))
    pick = a if _lex_key(a) <= _lex_key(b) else b
    return ComplexSignal(pick)


def product_constraint(sel: RootSelection, x0: complex) -> float:
    """Residual of the anchored product identity.

    A selection consistent with anchor x0 must satisfy
    prod(-beta_j) = r(N-1) / |x0|^2, the ratio x(N-1)/x(0) of the
    expanded signal. Returns |prod(-beta_j) - r(N-1)/|x0|^2|.
    """
    x0 = complex(x0)
    if x0 == 0:
        raise ZeroAnchor("x(0) = 0 cannot anchor")
    betas = sel.betas()
    prod = complex(np.prod(-betas)) if betas.size else 1.0 + 0j
    target = complex(sel.pairing.scale) / abs(x0) ** 2
    return float(abs(prod - target))


def filter_by_anchor(
    sols: SolutionSet, x0: complex, tol: float = ANCHOR_REL_TOL
) -> SolutionSet:
    """Keep selections whose product residual is below tol relative to |scale|/|x0|^2.

    Survivors are re-expanded with alpha = arg(x0) so their leading entry
    matches the anchor's phase. Raises NoFeasibleSolution when nothing
    survives, which certifies the anchor is inconsistent with the pairing.
    """
    x0 = complex(x0)
    if x0 == 0:
        raise ZeroAnchor("x(0) = 0 cannot anchor")
    threshold = tol * abs(complex(sols.pairing.scale)) / abs(x0) ** 2
    alpha = float(np.angle(x0))
    keep = []
    for choices, _ in sols.solutions:
        sel = RootSelection(sols.pairing, choices, alpha)
        if product_constraint(sel, x0) <= threshold:
            keep.append((choices, signal_from_selection(sel)))
    if not keep:
        raise NoFeasibleSolution(f"no selection matches anchor {x0}")
    return SolutionSet(sols.pairing, tuple(keep), canonical=False)


def trivial_orbit_distance(a: ComplexSignal, b: ComplexSignal, reflection: bool = True) -> float:
    """Euclidean distance between a and the trivial orbit of b.

    Minimizes over global phase in closed form; with reflection=True the
    conjugate reflection of b competes too. Length mismatches give inf.
    """
    if a.n != b.n:
        return float("inf")

    def phase_min(u, v):
        inner = abs(np.vdot(v, u))
        d2 = float(np.vdot(u, u).real + np.vdot(v, v).real - 2.0 * inner)
        return np.sqrt(max(d2, 0.0))

    best = phase_min(a.entries, b.entries)
    if reflection:
        best = min(best, phase_min(a.entries, np.conj(b.entries[::-1])))
    return float(best)


def distinct_canonical(signals, rel_tol: float = 1e-6) -> list:
    """Greedy clustering of canonical forms; returns one representative per cluster."""
    reps: list = []
    for sig in signals:
        can = canonicalize(sig)
        scale = float(np.linalg.norm(can.entries))
        hit = False
        for rep in reps:
            if rep.n == can.n and np.linalg.norm(rep.entries - can.entries) <= rel_tol * max(scale, 1e-300):
                hit = True
                break
        if not hit:
            reps.append(can)
    return reps
