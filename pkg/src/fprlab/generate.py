"""Random and exhaustive instance generation for experiments and tests."""

from __future__ import annotations

import itertools

import numpy as np

from .ambiguity import enumerate_solutions, product_constraint
from .errors import NoFeasibleSolution
from .hardness import PPInstance, brute_force_pp, enumerate_witnesses
from .signal_core import ComplexSignal, autocorrelation
from .ztransform import RootSelection, ZeroPairing, build_S_poly, find_roots, pair_roots


def random_signal(n: int, rng: np.random.Generator, min_edge: float = 0.1) -> ComplexSignal:
    """Complex Gaussian entries, resampled until both edge moduli clear min_edge."""
    if n < 1:
        raise ValueError("n must be >= 1")
    while True:
        e = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        if abs(e[0]) >= min_edge and abs(e[-1]) >= min_edge:
            return ComplexSignal(e, full_support=True)


def pairing_of(x: ComplexSignal) -> ZeroPairing:
    """Zero pairing of the measured autocorrelation of x."""
    r = autocorrelation(x)
    s = build_S_poly(r)
    roots = find_roots(s)
    return pair_roots(roots, r.entries[-1])


def generic_instance(n: int, rng: np.random.Generator, max_tries: int = 200) -> tuple:
    """Draw a signal whose zero pairing is numerically unambiguous.

    Rejects draws with near-unit-circle zeros, near-coincident zeros, or
    an anchor filter that is not decisively unique (second-best residual
    within 10x of the accept threshold). Returns (signal, pairing).
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    for _ in range(max_tries):
        x = random_signal(n, rng)
        try:
            pairing = pairing_of(x)
        except Exception:
            continue
        roots = [g for pair in pairing.pairs for g in pair]
        if any(abs(abs(g) - 1.0) < 1e-3 for g in roots):
            continue
        if any(
            abs(a - b) < 1e-3
            for a, b in itertools.combinations(roots, 2)
        ):
            continue
        x0 = complex(x.entries[0])
        residuals = sorted(
            product_constraint(RootSelection(pairing, choices), x0)
            for choices in itertools.product((False, True), repeat=pairing.n_pairs)
        )
        threshold = 1e-6 * abs(pairing.scale) / abs(x0) ** 2
        if residuals[0] > threshold * 0.1:
            continue
        if len(residuals) > 1 and residuals[1] < 10.0 * threshold:
            continue
        return x, pairing
    raise NoFeasibleSolution(f"no clean draw of length {n} in {max_tries} tries")


def random_solvable_pp(
    n: int,
    rng: np.random.Generator,
    lo: int = 2,
    hi: int = 6,
    unique_witness: bool = True,
    max_tries: int = 5000,
) -> PPInstance:
    """Random admissible instance that has a solution.

    Draws u_1..u_{N-1} uniformly from [lo, hi], picks a random subset as
    the planted side, and sets u_N to its product over the complement
    when that quotient is an integer >= 2. unique_witness additionally
    requires exactly one solution subset.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    for _ in range(max_tries):
        rest = [int(rng.integers(lo, hi + 1)) for _ in range(n - 1)]
        if max(rest) < 3:
            continue
        mask = int(rng.integers(0, 1 << (n - 1)))
        top = 1
        bottom = 1
        for k in range(n - 1):
            if (mask >> k) & 1:
                top *= rest[k]
            else:
                bottom *= rest[k]
        if top % bottom != 0:
            continue
        u_n = top // bottom
        if u_n < 2:
            continue
        inst = PPInstance(tuple(rest) + (u_n,))
        if unique_witness and len(enumerate_witnesses(inst)) != 1:
            continue
        return inst
    raise NoFeasibleSolution(f"no solvable instance of size {n} in {max_tries} tries")


def all_pp_instances(n: int, lo: int = 2, hi: int = 6):
    """Every admissible instance with values in [lo, hi], lexicographic order."""
    for u in itertools.product(range(lo, hi + 1), repeat=n):
        if max(u[:-1]) >= 3:
            yield PPInstance(u)


def planted_retrieval(n: int, rng: np.random.Generator, grid_mult: int = 4):
    """Random solvable hard instance plus its planted solution.

    Returns (hard, signal) where signal is the exact planted solution of
    the unique witness. Sizes stay small so the planted integers remain
    exactly representable in doubles.
    """
    from .hardness import construct_hard_instance, ground_truth_signal

    pp = random_solvable_pp(n, rng)
    hard = construct_hard_instance(pp, grid_mult=grid_mult)
    witness = brute_force_pp(pp).witness
    return hard, ground_truth_signal(pp, witness)
