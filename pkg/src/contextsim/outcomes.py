"""Distributions over ordered outcome triples of a three-observable sequence.

Detector leaves are labeled by the ordered outcomes (o1, o2, o3) with +1
sorted before -1 at every level, i.e. "+++", "++-", "+-+", ..., "---".
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

#: The eight ordered outcome triples, +1 before -1 at each level.
OUTCOME_TRIPLES: tuple[tuple[int, int, int], ...] = tuple(
    itertools.product((+1, -1), repeat=3)
)

#: Detector labels such as "+++" or "+-+", aligned with OUTCOME_TRIPLES.
OUTCOME_LABELS: tuple[str, ...] = tuple(
    "".join("+" if o > 0 else "-" for o in triple) for triple in OUTCOME_TRIPLES
)

#: Product o1*o2*o3 per triple, aligned with OUTCOME_TRIPLES.
OUTCOME_SIGNS = np.array([o1 * o2 * o3 for o1, o2, o3 in OUTCOME_TRIPLES], dtype=float)


@dataclass(frozen=True)
class OutcomeDistribution:
    """Eight probabilities or counts indexed by OUTCOME_TRIPLES."""

    values: np.ndarray
    kind: str = "probability"  # "probability" | "count"

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        if values.shape != (8,):
            raise ValueError(f"expected 8 outcome bins, got shape {values.shape}")
        if np.any(values < -1e-12):
            raise ValueError("outcome bins must be nonnegative")
        if self.kind == "probability":
            total = values.sum()
            if abs(total - 1.0) > 1e-10:
                raise ValueError(f"probabilities sum to {total}, expected 1")
        elif self.kind == "count":
            if np.max(np.abs(values - np.rint(values))) > 0:
                raise ValueError("counts must be integers")
        else:
            raise ValueError(f"unknown distribution kind: {self.kind!r}")

    @property
    def total(self) -> float:
        return float(self.values.sum())


def correlation(dist: OutcomeDistribution) -> float:
    """Ensemble average of the product o1*o2*o3 under a probability distribution."""
    if dist.kind != "probability":
        raise ValueError("correlation expects a probability-mode distribution")
    return float(np.dot(OUTCOME_SIGNS, dist.values))


def total_variation(d1: OutcomeDistribution, d2: OutcomeDistribution) -> float:
    """Total-variation distance between two probability distributions."""
    return float(0.5 * np.sum(np.abs(d1.values - d2.values)))
