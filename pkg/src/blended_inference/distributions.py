"""Finite probability distributions and the information divergence between them.

All divergences are in nats. Infinite results are carried as
:class:`ExtendedReal` values rather than IEEE infinities so that the
indeterminate form ``inf - inf`` stays detectable.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import total_ordering
from typing import Hashable, Sequence

import numpy as np

from .exceptions import StructuralError, ValidationError

#: Absolute tolerance on the total mass of a distribution.
NORMALIZATION_TOL = 1e-12


class Kind(enum.Enum):
    FINITE = "finite"
    POS_INF = "+inf"
    NEG_INF = "-inf"
    INDETERMINATE = "indeterminate"


@total_ordering
@dataclass(frozen=True)
class ExtendedReal:
    """A real number, a signed infinity, or the indeterminate form ``inf - inf``.

    ``value`` is meaningful only when ``kind`` is ``Kind.FINITE``.
    """

    value: float = 0.0
    kind: Kind = Kind.FINITE

    def __post_init__(self):
        if self.kind is Kind.FINITE and not math.isfinite(self.value):
            raise ValueError(f"finite value expected, got {self.value!r}")

    @classmethod
    def finite(cls, value: float) -> "ExtendedReal":
        return cls(float(value), Kind.FINITE)

    @property
    def is_finite(self) -> bool:
        return self.kind is Kind.FINITE

    @property
    def is_infinite(self) -> bool:
        return self.kind in (Kind.POS_INF, Kind.NEG_INF)

    @property
    def is_indeterminate(self) -> bool:
        return self.kind is Kind.INDETERMINATE

    def __float__(self) -> float:
        return {
            Kind.FINITE: self.value,
            Kind.POS_INF: math.inf,
            Kind.NEG_INF: -math.inf,
            Kind.INDETERMINATE: math.nan,
        }[self.kind]

    def __neg__(self) -> "ExtendedReal":
        if self.kind is Kind.FINITE:
            return ExtendedReal(-self.value)
        if self.kind is Kind.POS_INF:
            return NEG_INF
        if self.kind is Kind.NEG_INF:
            return POS_INF
        return self

    def __sub__(self, other: "ExtendedReal") -> "ExtendedReal":
        if not isinstance(other, ExtendedReal):
            return NotImplemented
        if self.is_indeterminate or other.is_indeterminate:
            return INDETERMINATE
        if self.is_finite and other.is_finite:
            return ExtendedReal(self.value - other.value)
        if self.is_infinite and other.is_infinite:
            return INDETERMINATE if self.kind is other.kind else self
        return self if self.is_infinite else -other

    def _key(self):
        if self.is_indeterminate:
            raise TypeError("indeterminate values are unordered")
        return float(self)

    def __eq__(self, other):
        if not isinstance(other, ExtendedReal):
            return NotImplemented
        if self.kind is not other.kind:
            return False
        return self.kind is not Kind.FINITE or self.value == other.value

    def __hash__(self):
        return hash((self.kind, self.value if self.is_finite else None))

    def __lt__(self, other):
        if not isinstance(other, ExtendedReal):
            return NotImplemented
        return self._key() < other._key()

    def __repr__(self):
        if self.is_finite:
            return f"ExtendedReal({self.value!r})"
        return f"ExtendedReal({self.kind.value})"


POS_INF = ExtendedReal(0.0, Kind.POS_INF)
NEG_INF = ExtendedReal(0.0, Kind.NEG_INF)
INDETERMINATE = ExtendedReal(0.0, Kind.INDETERMINATE)


@dataclass(frozen=True, init=False)
class FiniteDistribution:
    """Probability vector over an ordered list of unique atom labels.

    A total mass within ``NORMALIZATION_TOL`` of one is accepted as given
    (rescaling would perturb exact inputs by an ulp); anything further off is
    rejected.

    Examples
    --------
    >>> d = FiniteDistribution([0.25, 0.75], atoms=("H0", "H1"))
    >>> d["H1"]
    0.75
    """

    atoms: tuple
    probs: tuple

    def __init__(self, probs: Sequence[float], atoms: Sequence[Hashable] | None = None):
        probs = np.asarray(probs, dtype=float)
        if probs.ndim != 1 or probs.size == 0:
            raise ValidationError("probs must be a non-empty 1-d sequence")
        if atoms is None:
            atoms = tuple(range(probs.size))
        atoms = tuple(atoms)
        if len(atoms) != probs.size:
            raise ValidationError(
                f"{len(atoms)} atoms but {probs.size} probabilities"
            )
        if len(set(atoms)) != len(atoms):
            raise ValidationError(f"atoms must be unique, got {atoms!r}")
        if not np.all(np.isfinite(probs)):
            raise ValidationError("probabilities must be finite")
        if np.any(probs < 0) or np.any(probs > 1):
            raise ValidationError(f"probabilities must lie in [0, 1], got {probs.tolist()}")
        total = math.fsum(probs)
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise ValidationError(f"probabilities sum to {total!r}, not 1")
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "probs", tuple(float(p) for p in probs))

    def __len__(self):
        return len(self.probs)

    def __getitem__(self, atom):
        return self.probs[self.atoms.index(atom)]

    def as_array(self) -> np.ndarray:
        return np.array(self.probs)

    def with_probs(self, probs) -> "FiniteDistribution":
        """Same atoms, new probability vector."""
        return FiniteDistribution(probs, self.atoms)

    def support(self) -> tuple:
        return tuple(a for a, p in zip(self.atoms, self.probs) if p > 0)


def _check_atoms(*dists: FiniteDistribution):
    first = dists[0].atoms
    for d in dists[1:]:
        if d.atoms != first:
            raise StructuralError(f"atom lists differ: {first!r} vs {d.atoms!r}")


def kl_divergence(p: FiniteDistribution, q: FiniteDistribution) -> ExtendedReal:
    """Information divergence ``sum_i p_i ln(p_i / q_i)`` in nats.

    Atoms with ``p_i == 0`` contribute nothing. Returns ``POS_INF`` when
    ``p`` puts mass on an atom where ``q`` has none.
    """
    _check_atoms(p, q)
    terms = []
    for pi, qi in zip(p.probs, q.probs):
        if pi == 0.0:
            continue
        if qi == 0.0:
            return POS_INF
        terms.append(pi * (math.log(pi) - math.log(qi)))
    # clamp rounding noise; the exact sum is nonnegative
    return ExtendedReal(max(math.fsum(terms), 0.0))


def inferential_gain(
    p: FiniteDistribution, benchmark: FiniteDistribution, q: FiniteDistribution
) -> ExtendedReal:
    """Information gained by reporting ``q`` instead of ``benchmark`` when ``p`` is true.

    Equal to ``I(p||benchmark) - I(p||q)``; ``INDETERMINATE`` when both
    divergences are infinite.
    """
    _check_atoms(p, benchmark, q)
    return kl_divergence(p, benchmark) - kl_divergence(p, q)
