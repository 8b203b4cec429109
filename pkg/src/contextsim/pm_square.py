"""The Peres-Mermin square of nine two-qubit observables and its six contexts.

The square arranges nine +/-1-valued observables on a 3x3 grid

    A = s_z x 1      B = 1 x s_z      C = s_z x s_z
    a = 1 x s_x      b = s_x x 1      c = s_x x s_x
    alpha = s_z x s_x   beta = s_x x s_z   gamma = s_y x s_y

(path factor first).  The three observables of every row and every column
commute pairwise; each row product and the first two column products equal
+1, while the third column product equals -1.  That sign pattern forces the
six-term correlation sum chi to equal 6 for every quantum state, while any
noncontextual +/-1 assignment is bounded by chi <= 4.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .qcore import ATOL_STRUCT, I2, SIGMA_X, SIGMA_Y, SIGMA_Z, expectation, tensor

#: Observable labels in grid (row-major) order.
LABELS = ("A", "B", "C", "a", "b", "c", "alpha", "beta", "gamma")

#: Pretty single-character forms used in human-readable output.
DISPLAY = {"alpha": "α", "beta": "β", "gamma": "γ"}


@dataclass(frozen=True)
class PMObservable:
    """A labeled observable of the square (Hermitian involution on C^4)."""

    label: str
    operator: np.ndarray


@dataclass(frozen=True)
class Context:
    """Three mutually commuting observables in the order they are measured.

    ``sign`` is the scalar s with O1 O2 O3 = s * I; it is the coefficient the
    context's correlation carries in the chi sum.
    """

    ordered_labels: tuple[str, str, str]
    sign: int

    @property
    def display(self) -> str:
        return "".join(DISPLAY.get(l, l) for l in self.ordered_labels)


@dataclass(frozen=True)
class PMSquare:
    """3x3 grid of observables; rows (A,B,C)/(a,b,c)/(alpha,beta,gamma)."""

    grid: tuple[tuple[PMObservable, PMObservable, PMObservable], ...]

    def observable(self, label: str) -> PMObservable:
        for row in self.grid:
            for obs in row:
                if obs.label == label:
                    return obs
        raise KeyError(f"unknown observable label: {label!r}")

    def rows(self) -> tuple[tuple[PMObservable, ...], ...]:
        return self.grid

    def columns(self) -> tuple[tuple[PMObservable, ...], ...]:
        return tuple(tuple(self.grid[r][c] for r in range(3)) for c in range(3))


@dataclass(frozen=True)
class CompatibilityReport:
    """Commutator norms within contexts and across incompatible pairs."""

    max_context_commutator: float
    min_incompatible_commutator: float
    incompatible_pairs: tuple[tuple[str, str], ...]


@lru_cache(maxsize=1)
def build_square() -> PMSquare:
    """Construct the nine observables in the fixed (path x polarization) basis."""
    ops = {
        "A": tensor(SIGMA_Z, I2),
        "B": tensor(I2, SIGMA_Z),
        "C": tensor(SIGMA_Z, SIGMA_Z),
        "a": tensor(I2, SIGMA_X),
        "b": tensor(SIGMA_X, I2),
        "c": tensor(SIGMA_X, SIGMA_X),
        "alpha": tensor(SIGMA_Z, SIGMA_X),
        "beta": tensor(SIGMA_X, SIGMA_Z),
        "gamma": tensor(SIGMA_Y, SIGMA_Y),
    }
    rows = (("A", "B", "C"), ("a", "b", "c"), ("alpha", "beta", "gamma"))
    grid = tuple(tuple(PMObservable(l, ops[l]) for l in row) for row in rows)
    return PMSquare(grid)


def observable(label: str) -> np.ndarray:
    """Operator of the labeled observable."""
    return build_square().observable(label).operator


@lru_cache(maxsize=1)
def contexts() -> tuple[Context, ...]:
    """The six measured contexts, in reporting order, with their chi signs.

    The measured orders are (C,A,B), (c,b,a), (beta,gamma,alpha), (alpha,A,a),
    (beta,b,B) and (c,gamma,C); only the last term carries sign -1.
    """
    ctxs = (
        Context(("C", "A", "B"), +1),
        Context(("c", "b", "a"), +1),
        Context(("beta", "gamma", "alpha"), +1),
        Context(("alpha", "A", "a"), +1),
        Context(("beta", "b", "B"), +1),
        Context(("c", "gamma", "C"), -1),
    )
    for ctx in ctxs:
        if context_product_sign(ctx) != ctx.sign:
            raise AssertionError(f"context {ctx.ordered_labels} sign mismatch")
    return ctxs


def context_operators(ctx: Context) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    square = build_square()
    o1, o2, o3 = (square.observable(l).operator for l in ctx.ordered_labels)
    return o1, o2, o3


def context_product_sign(ctx: Context, atol: float = ATOL_STRUCT) -> int:
    """Scalar s with O1 O2 O3 = s * I, or raise if the product is not +/-I."""
    o1, o2, o3 = context_operators(ctx)
    product = o1 @ o2 @ o3
    for s in (+1, -1):
        if np.max(np.abs(product - s * np.eye(4))) <= atol:
            return s
    raise ValueError(f"product of {ctx.ordered_labels} is not proportional to the identity")


def commutator_norm(x: np.ndarray, y: np.ndarray) -> float:
    """Frobenius norm of [x, y]."""
    return float(np.linalg.norm(x @ y - y @ x))


def verify_compatibility(square: PMSquare | None = None) -> CompatibilityReport:
    """Check that contexts commute and that cross-context pairs genuinely do not.

    Returns the largest commutator norm found inside any row or column (must
    vanish) and the smallest one over all incompatible pairs (must not).
    """
    square = square or build_square()
    max_inside = 0.0
    compatible: set[frozenset[str]] = set()
    for line in square.rows() + square.columns():
        for i in range(3):
            for j in range(i + 1, 3):
                compatible.add(frozenset((line[i].label, line[j].label)))
                max_inside = max(max_inside, commutator_norm(line[i].operator, line[j].operator))
    min_outside = np.inf
    incompatible: list[tuple[str, str]] = []
    flat = [obs for row in square.grid for obs in row]
    for i in range(len(flat)):
        for j in range(i + 1, len(flat)):
            if frozenset((flat[i].label, flat[j].label)) in compatible:
                continue
            incompatible.append((flat[i].label, flat[j].label))
            min_outside = min(min_outside, commutator_norm(flat[i].operator, flat[j].operator))
    return CompatibilityReport(max_inside, float(min_outside), tuple(incompatible))


def chi_operator() -> np.ndarray:
    """The operator sum over contexts of sign * O1 O2 O3 (equals 6 * I)."""
    total = np.zeros((4, 4), dtype=complex)
    for ctx in contexts():
        o1, o2, o3 = context_operators(ctx)
        total += ctx.sign * (o1 @ o2 @ o3)
    return total


def chi_expectation(rho: np.ndarray) -> float:
    """Operator-level chi value Tr(rho * chi_operator); 6 for every state."""
    return expectation(rho, chi_operator())
