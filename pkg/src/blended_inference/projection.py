"""Information projection onto box-constrained posterior sets, and the maximin game.

The blended posterior is the distribution in a convex set of Bayesian
posteriors that is closest, in information divergence, to a benchmark
posterior. :func:`blend` computes it directly; :func:`maximin_bruteforce`
recovers the same divergence by searching the underlying game on a grid and
serves as an independent check.
"""

from __future__ import annotations

import enum
import itertools
import json
import math
from dataclasses import dataclass
from os import PathLike
from typing import Hashable, Sequence

import numpy as np

from .distributions import (
    NORMALIZATION_TOL,
    ExtendedReal,
    FiniteDistribution,
    kl_divergence,
)
from .exceptions import DomainError, InfeasibleError, StructuralError, ValidationError

#: Slack allowed when checking that a point satisfies a constraint set.
BOUND_TOL = 1e-9


class Bound(enum.Enum):
    LOWER = "at-lower"
    UPPER = "at-upper"
    INTERIOR = "interior"


@dataclass(frozen=True, init=False)
class ConstraintSet:
    """Per-atom probability bounds ``lower[i] <= P(i) <= upper[i]`` on the simplex."""

    atoms: tuple
    lower: tuple
    upper: tuple

    def __init__(
        self,
        lower: Sequence[float],
        upper: Sequence[float],
        atoms: Sequence[Hashable] | None = None,
    ):
        lower = np.asarray(lower, dtype=float)
        upper = np.asarray(upper, dtype=float)
        if lower.ndim != 1 or lower.shape != upper.shape or lower.size == 0:
            raise ValidationError("lower and upper must be non-empty 1-d arrays of equal length")
        if atoms is None:
            atoms = tuple(range(lower.size))
        atoms = tuple(atoms)
        if len(atoms) != lower.size:
            raise ValidationError(f"{len(atoms)} atoms but {lower.size} bounds")
        if len(set(atoms)) != len(atoms):
            raise ValidationError(f"atoms must be unique, got {atoms!r}")
        if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
            raise ValidationError("bounds must be finite")
        if np.any(lower < 0) or np.any(upper > 1):
            raise ValidationError("bounds must lie in [0, 1]")
        bad = [atoms[i] for i in np.flatnonzero(lower > upper)]
        if bad:
            raise ValidationError(f"lower exceeds upper for atoms {bad!r}")
        lo_sum, hi_sum = math.fsum(lower), math.fsum(upper)
        if lo_sum > 1 + NORMALIZATION_TOL or hi_sum < 1 - NORMALIZATION_TOL:
            raise InfeasibleError(
                f"no distribution satisfies the bounds (sum lower={lo_sum!r}, sum upper={hi_sum!r})",
                atoms,
            )
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "lower", tuple(float(x) for x in lower))
        object.__setattr__(self, "upper", tuple(float(x) for x in upper))

    @classmethod
    def singleton(cls, dist: FiniteDistribution) -> "ConstraintSet":
        return cls(dist.probs, dist.probs, dist.atoms)

    @classmethod
    def unconstrained(cls, atoms: Sequence[Hashable]) -> "ConstraintSet":
        n = len(atoms)
        return cls([0.0] * n, [1.0] * n, atoms)

    def __len__(self):
        return len(self.atoms)

    @property
    def is_singleton(self) -> bool:
        return self.lower == self.upper

    def contains(self, dist: FiniteDistribution, tol: float = BOUND_TOL) -> bool:
        if dist.atoms != self.atoms:
            raise StructuralError(f"atom lists differ: {self.atoms!r} vs {dist.atoms!r}")
        return all(
            lo - tol <= p <= hi + tol for p, lo, hi in zip(dist.probs, self.lower, self.upper)
        )

    def vertices(self) -> np.ndarray:
        """Vertices of the polytope ``box ∩ simplex``, as rows.

        Every vertex has all but at most one coordinate at a bound, so the
        enumeration is over ``n * 2**(n-1)`` candidates. Intended for small
        atom counts.
        """
        lo, hi = np.array(self.lower), np.array(self.upper)
        n = lo.size
        found = []
        for free in range(n):
            others = [i for i in range(n) if i != free]
            for choice in itertools.product((0, 1), repeat=n - 1):
                v = np.empty(n)
                for i, c in zip(others, choice):
                    v[i] = hi[i] if c else lo[i]
                v[free] = 1.0 - math.fsum(v[others])
                if lo[free] - NORMALIZATION_TOL <= v[free] <= hi[free] + NORMALIZATION_TOL:
                    v[free] = min(max(v[free], lo[free]), hi[free])
                    found.append(v)
        if not found:
            raise InfeasibleError("constraint set has no vertices", self.atoms)
        return np.unique(np.array(found), axis=0)


@dataclass(frozen=True)
class ProjectionResult:
    projection: FiniteDistribution
    divergence_to_benchmark: ExtendedReal
    active_constraints: tuple


@dataclass(frozen=True)
class GameSolution:
    value: float
    statistician: FiniteDistribution
    worst_case_nature: FiniteDistribution
    grid_step: float


def _check_shared(cset: ConstraintSet, benchmark: FiniteDistribution):
    if cset.atoms != benchmark.atoms:
        raise StructuralError(f"atom lists differ: {cset.atoms!r} vs {benchmark.atoms!r}")


def finite_divergence_subset(cset: ConstraintSet, benchmark: FiniteDistribution) -> ConstraintSet:
    """Restrict ``cset`` to members with finite divergence to ``benchmark``.

    Atoms the benchmark gives no mass get their upper bound forced to zero.
    Raises :class:`InfeasibleError` if nothing is left.
    """
    _check_shared(cset, benchmark)
    upper = list(cset.upper)
    offending = []
    for i, q in enumerate(benchmark.probs):
        if q == 0.0:
            upper[i] = 0.0
            if cset.lower[i] > 0:
                offending.append(cset.atoms[i])
    if offending:
        raise InfeasibleError(
            f"lower bounds force mass on atoms {offending!r} where the benchmark has none",
            offending,
        )
    if math.fsum(upper) < 1 - NORMALIZATION_TOL:
        zeroed = [a for a, q in zip(cset.atoms, benchmark.probs) if q == 0.0]
        raise InfeasibleError(
            f"excluding zero-mass atoms {zeroed!r} leaves no feasible distribution", zeroed
        )
    if tuple(upper) == cset.upper:
        return cset
    return ConstraintSet(cset.lower, upper, cset.atoms)


def _active_flags(p: Sequence[float], cset: ConstraintSet) -> tuple:
    flags = []
    for x, lo, hi in zip(p, cset.lower, cset.upper):
        if x <= lo:
            flags.append(Bound.LOWER)
        elif x >= hi:
            flags.append(Bound.UPPER)
        else:
            flags.append(Bound.INTERIOR)
    return tuple(flags)


def _clamped_mass(c, q, lo, hi):
    return np.clip(c * q, lo, hi)


def _kkt_projection(q, lo, hi, initial_multiplier=None, max_iter=200):
    # p_i = clip(c * q_i, lo_i, hi_i); total mass is nondecreasing in c
    if initial_multiplier is None:
        pos = q > 0
        c_lo = float(np.min(lo[pos] / q[pos]))
        c_hi = float(np.max(hi[pos] / q[pos]))
    else:
        if not initial_multiplier > 0:
            raise DomainError("initial_multiplier must be positive")
        c_lo = c_hi = float(initial_multiplier)
        while _clamped_mass(c_lo, q, lo, hi).sum() > 1:
            c_lo /= 2
        while _clamped_mass(c_hi, q, lo, hi).sum() < 1:
            c_hi *= 2
    for _ in range(max_iter):
        mid = 0.5 * (c_lo + c_hi)
        total = _clamped_mass(mid, q, lo, hi).sum()
        if abs(total - 1) <= NORMALIZATION_TOL or mid in (c_lo, c_hi):
            break
        if total < 1:
            c_lo = mid
        else:
            c_hi = mid
    c = 0.5 * (c_lo + c_hi)
    p = _clamped_mass(c, q, lo, hi)
    # Solve exactly for the multiplier given the active set at c.
    free = (p > lo) & (p < hi)
    if free.any():
        c = (1.0 - p[~free].sum()) / q[free].sum()
        p = np.where(free, np.clip(c * q, lo, hi), p)
    return p


def i_projection(
    cset: ConstraintSet,
    benchmark: FiniteDistribution,
    *,
    initial_multiplier: float | None = None,
) -> ProjectionResult:
    """Minimize ``I(P || benchmark)`` over ``P`` in ``cset``.

    The set is first restricted to members of finite divergence. Two atoms are
    handled in closed form by clamping the benchmark's first coordinate;
    otherwise the normalization multiplier of the clamped stationarity
    condition ``p_i ∝ q_i`` is found by bisection.

    Parameters
    ----------
    cset : ConstraintSet
        Bayesian posterior set.
    benchmark : FiniteDistribution
        Benchmark (e.g. confidence) posterior.
    initial_multiplier : float, optional
        Starting point for the multiplier bracket in the general case. The
        minimizer is unique, so this affects only the path taken.
    """
    _check_shared(cset, benchmark)
    tight = finite_divergence_subset(cset, benchmark)
    q = benchmark.as_array()
    lo, hi = np.array(tight.lower), np.array(tight.upper)

    if tight.contains(benchmark, tol=0.0):
        p = q
    elif tight.is_singleton:
        p = lo
    elif len(q) == 2:
        a = max(lo[0], 1.0 - hi[1])
        b = min(hi[0], 1.0 - lo[1])
        p0 = min(max(q[0], a), b)
        p = np.array([p0, 1.0 - p0])
    else:
        p = _kkt_projection(q, lo, hi, initial_multiplier)

    proj = benchmark.with_probs(p)
    return ProjectionResult(
        projection=proj,
        divergence_to_benchmark=kl_divergence(proj, benchmark),
        active_constraints=_active_flags(proj.probs, tight),
    )


def blend(
    cset: ConstraintSet, benchmark: FiniteDistribution, **kwargs
) -> ProjectionResult:
    """Blended posterior of the Bayesian set ``cset`` with ``benchmark``."""
    return i_projection(finite_divergence_subset(cset, benchmark), benchmark, **kwargs)


def simplex_grid(n_atoms: int, grid_step: float) -> np.ndarray:
    """Points of the probability simplex whose coordinates are multiples of ``grid_step``.

    Rows are in lexicographic order.
    """
    n = int(round(1.0 / grid_step))
    if not math.isclose(n * grid_step, 1.0, rel_tol=1e-9):
        raise DomainError(f"grid_step {grid_step!r} must divide 1")
    if n_atoms == 2:
        k = np.arange(n + 1)
        first = k / n
        return np.column_stack([first, (n - k) / n])
    if n_atoms == 3:
        i, j = np.meshgrid(np.arange(n + 1), np.arange(n + 1), indexing="ij")
        keep = i + j <= n
        i, j = i[keep], j[keep]
        return np.column_stack([i / n, j / n, (n - i - j) / n])
    raise DomainError(f"grid search supports 2 or 3 atoms, got {n_atoms}")


def _candidates(cset: ConstraintSet, benchmark: FiniteDistribution, grid_step: float):
    pts = np.vstack([simplex_grid(len(cset), grid_step), cset.vertices(), benchmark.as_array()])
    lo, hi = np.array(cset.lower), np.array(cset.upper)
    inside = np.all((pts >= lo - NORMALIZATION_TOL) & (pts <= hi + NORMALIZATION_TOL), axis=1)
    pts = np.clip(pts[inside], lo, hi)
    order = np.lexsort(pts.T[::-1])
    pts = pts[order]
    # drop exact duplicates while keeping lexicographic order
    keep = np.ones(len(pts), dtype=bool)
    keep[1:] = np.any(np.diff(pts, axis=0) != 0, axis=1)
    return pts[keep]


# Stand-in for ln(0): keeps 0 * ln(0) == 0 inside a matrix product while any
# pair with P_i > 0 = Q_i scores far below the value 0 that Q = benchmark secures.
_LOG_ZERO = -1e300


def _gain_matrix(nature: np.ndarray, log_ratio: np.ndarray) -> np.ndarray:
    # gain(P, Q) = sum_i P_i ln(Q_i / B_i); rows index nature, columns the statistician
    return nature @ log_ratio.T


def maximin_bruteforce(
    cset: ConstraintSet,
    benchmark: FiniteDistribution,
    grid_step: float = 1e-3,
    *,
    chunk_size: int = 1024,
) -> GameSolution:
    """Solve ``sup_Q inf_P [I(P||benchmark) - I(P||Q)]`` by exhaustive grid search.

    Both players range over grid points of the (closed) finite-divergence
    subset of ``cset``, plus its vertices and the benchmark itself. Ties are
    broken by the first candidate in lexicographic order.
    """
    if len(cset) not in (2, 3):
        raise DomainError(f"brute-force search supports 2 or 3 atoms, got {len(cset)}")
    if not 1e-5 <= grid_step <= 1e-1:
        raise DomainError(f"grid_step must lie in [1e-5, 1e-1], got {grid_step!r}")
    _check_shared(cset, benchmark)
    tight = finite_divergence_subset(cset, benchmark)
    pts = _candidates(tight, benchmark, grid_step)
    b = benchmark.as_array()

    log_q = np.log(pts, where=pts > 0, out=np.full_like(pts, _LOG_ZERO))
    log_b = np.log(b, where=b > 0, out=np.zeros_like(b))
    log_ratio = log_q - log_b
    # atoms outside the benchmark's support carry no mass for either player
    log_ratio[:, b == 0] = 0.0

    best_value, best_q, best_p = -math.inf, 0, 0
    for start in range(0, len(pts), chunk_size):
        stop = min(start + chunk_size, len(pts))
        inner = np.full(stop - start, math.inf)
        arg_inner = np.zeros(stop - start, dtype=int)
        for p_start in range(0, len(pts), 8 * chunk_size):
            p_stop = min(p_start + 8 * chunk_size, len(pts))
            g = _gain_matrix(pts[p_start:p_stop], log_ratio[start:stop])
            idx = np.argmin(g, axis=0)
            vals = g[idx, np.arange(stop - start)]
            better = vals < inner
            inner[better] = vals[better]
            arg_inner[better] = idx[better] + p_start
        j = int(np.argmax(inner))
        if inner[j] > best_value:
            best_value, best_q, best_p = float(inner[j]), start + j, int(arg_inner[j])

    return GameSolution(
        value=best_value,
        statistician=benchmark.with_probs(pts[best_q]),
        worst_case_nature=benchmark.with_probs(pts[best_p]),
        grid_step=grid_step,
    )


def load_problem(path: str | PathLike) -> tuple[ConstraintSet, FiniteDistribution]:
    """Read a game/projection problem from a JSON file.

    The document has the form
    ``{"atoms": [...], "benchmark": [...], "lower": [...], "upper": [...]}``.
    """
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_problem(text, source=str(path))


def parse_problem(text: str, source: str = "<string>") -> tuple[ConstraintSet, FiniteDistribution]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(
            f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from None
    if not isinstance(doc, dict):
        raise ValidationError(f"{source}: top-level value must be an object")
    missing = [k for k in ("atoms", "benchmark", "lower", "upper") if k not in doc]
    if missing:
        raise ValidationError(f"{source}: missing keys {missing}")
    atoms = doc["atoms"]
    if not isinstance(atoms, list) or not all(isinstance(a, str) for a in atoms):
        raise ValidationError(f"{source}: 'atoms' must be a list of strings")
    for key in ("benchmark", "lower", "upper"):
        vals = doc[key]
        if not isinstance(vals, list) or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in vals
        ):
            raise ValidationError(f"{source}: '{key}' must be a list of numbers")
        if len(vals) != len(atoms):
            raise ValidationError(
                f"{source}: '{key}' has {len(vals)} entries, expected {len(atoms)}"
            )
    benchmark = FiniteDistribution(doc["benchmark"], atoms)
    cset = ConstraintSet(doc["lower"], doc["upper"], atoms)
    return cset, benchmark
