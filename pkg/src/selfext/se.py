"""Self-extension coefficient evidence, l1 -> linf embeddings and stability arithmetic.

Searches report the largest ratio ``min ||S|| / ||T||`` seen over candidate
operators; that is a lower bound on the self-extension coefficient and
nothing more.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .exact import ONE, ZERO, Mat
from .extend import ExtensionProblem, LowerBoundCertificate, min_norm_extension
from .spaces import L1, PolyhedralSpace, Subspace, subspace_operator_norm

GRID_VALUES = (Fraction(-1, 2), ZERO, Fraction(1, 2))


@dataclass(frozen=True)
class SearchReport:
    space: str
    subspace: Mat
    best_ratio: Fraction
    witness: Optional[Mat]
    candidates_evaluated: int
    strategy: str
    seed: int

    def to_json(self) -> dict:
        from .serialize import encode

        return {
            "space": self.space,
            "subspace": {"basis": encode(self.subspace)},
            "best_ratio": encode(self.best_ratio),
            "best_ratio_is": "lower bound on the self-extension coefficient",
            "witness": None if self.witness is None else encode(self.witness),
            "candidates_evaluated": self.candidates_evaluated,
            "strategy": self.strategy,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class StabilityFacts:
    d: float
    bound: float


def evaluate_candidate(space: PolyhedralSpace, Y: Subspace, T: Mat) -> Fraction:
    """``min ||S|| / ||T||`` over extensions ``S`` of ``T``."""
    t_norm = subspace_operator_norm(Y, T)
    if t_norm == 0:
        raise ValueError("zero operator has no extension ratio")
    return min_norm_extension(ExtensionProblem(space, Y, T)).value / t_norm


def _grid(d: int) -> Iterable[Mat]:
    for entries in itertools.product(GRID_VALUES, repeat=d * d):
        yield Mat((entries[i * d:(i + 1) * d] for i in range(d)), cols=d)


def _random_ops(d: int, rng: random.Random) -> Iterable[Mat]:
    while True:
        yield Mat(
            ((Fraction(rng.randint(-4, 4), rng.randint(1, 4)) for _ in range(d)) for _ in range(d)),
            cols=d,
        )


def _negation_seen(T: Mat) -> bool:
    """In the grid, -T precedes T when T's first nonzero entry is positive."""
    for r in T.row_list():
        for x in r:
            if x:
                return x > 0
    return False


def se_lower_bound_search(
    space: PolyhedralSpace,
    Y: Subspace,
    strategy: str = "grid",
    budget: int = 1000,
    seed: int = 0,
    candidates: Sequence[Mat] = (),
) -> SearchReport:
    """Largest extension ratio over candidate operators on ``Y``.

    ``candidates`` are evaluated first (for ``strategy="fixed"`` they are
    the only ones). The grid is every matrix with entries in {-1/2, 0, 1/2}
    in lexicographic order, skipping zero and any matrix whose negation was
    already evaluated (the ratio is invariant under sign). ``budget`` caps
    the number of extension programs solved.
    """
    if budget < 1:
        raise ValueError("budget must be positive")
    if strategy not in ("grid", "random", "fixed"):
        raise ValueError(f"unknown strategy {strategy!r}")
    d = Y.dim
    best, witness, evaluated = None, None, 0
    seen = set()

    def consider(T: Mat):
        nonlocal best, witness, evaluated
        if T in seen or subspace_operator_norm(Y, T) == 0:
            return
        seen.add(T)
        seen.add(-T)
        ratio = evaluate_candidate(space, Y, T)
        evaluated += 1
        if best is None or ratio > best:
            best, witness = ratio, T

    for T in candidates:
        if evaluated >= budget:
            break
        consider(T)
    if strategy == "grid":
        source = (T for T in _grid(d) if not _negation_seen(T))
    elif strategy == "random":
        source = _random_ops(d, random.Random(seed))
    else:
        source = iter(())
    for T in source:
        if evaluated >= budget:
            break
        consider(T)
    return SearchReport(
        space.describe(), Y.basis, best if best is not None else ZERO, witness, evaluated, strategy, seed
    )


def l1_to_linf_embedding(n: int) -> Mat:
    """Rows ``(eps_1, ..., eps_{n-1}, 1)`` over all sign patterns, lexicographic in eps.

    ``x -> E x`` is an isometry from l1^n onto a subspace of linf^(2^(n-1)).
    """
    if not 2 <= n <= 12:
        raise ValueError("embedding dimension must be between 2 and 12")
    rows = [eps + (ONE,) for eps in itertools.product((ONE, -ONE), repeat=n - 1)]
    return Mat(rows, cols=n)


def heredity_lift(p: ExtensionProblem, N: int) -> ExtensionProblem:
    """Zero-pad an l1^n extension problem into l1^N (n <= N)."""
    if p.space.kind != L1:
        raise ValueError("heredity lift is defined for l1 spaces")
    n = p.space.dim
    if N < n:
        raise ValueError(f"cannot lift a {n}-dim problem into dimension {N}")
    if N == n:
        return p
    pad = lambda M: Mat(M.row_list() + [(ZERO,) * M.cols] * (N - n), cols=M.cols)
    X = PolyhedralSpace.l1(N)
    Y = Subspace(X, pad(p.subspace.basis))
    op = p.op if p.images == "subspace" else pad(p.op)
    return ExtensionProblem(X, Y, op, p.images)


def lift_certificate(cert: LowerBoundCertificate, N: int) -> LowerBoundCertificate:
    return cert.padded(N)


def bm_l1_lp(p: float) -> float:
    """Banach-Mazur distance between 4-dimensional l1 and lp, valid for 1 <= p <= 2."""
    if not 1 <= p <= 2:
        raise ValueError("closed form holds only for 1 <= p <= 2")
    return 4.0 ** (1.0 - 1.0 / p)


def particr4_threshold() -> float:
    """Supremum of p for which 4-dimensional lp lies within sqrt(5)/2 of l1."""
    return 1.0 / (1.0 - math.log(math.sqrt(5.0) / 2.0, 4.0))


def stability_bound(se_known: float, d: float) -> float:
    """Upper bound ``se_known * d^2`` on the coefficient of a space at distance d."""
    if se_known < 1 or d < 1:
        raise ValueError("need se_known >= 1 and d >= 1")
    return se_known * d * d


def stability_facts(se_known: float, d: float) -> StabilityFacts:
    return StabilityFacts(d, stability_bound(se_known, d))
