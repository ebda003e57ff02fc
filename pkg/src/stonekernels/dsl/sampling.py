"""Seeded exact ancestral sampling from states.

A draw walks the levels of the codomain: level 0 is drawn from the level-0
distribution, and level ``j + 1`` from the level-``j + 1`` masses of the fiber over the
element already drawn. Each step consumes one 64-bit word ``u`` from
``random.Random(seed)`` and picks the first outcome whose integer threshold
``ceil(C_k · 2^64 / total)`` exceeds ``u``, where ``C_k`` is the exact cumulative mass.
No floating point is involved, so a seed fixes every draw on every platform.
"""

from __future__ import annotations

import math
import random
from bisect import bisect_right
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from ..errors import KernelValidationError
from ..logging_config import get_logger, log_duration
from ..proker import ProKernel, clopen_measure
from ..rationals import ZERO
from ..stone import Clopen

log = get_logger(__name__)

WORD_BITS = 64
_SCALE = 1 << WORD_BITS


def cdf_thresholds(weights: tuple[Fraction, ...]) -> tuple[int, ...]:
    """Integer thresholds ``ceil(C_k · 2^64 / total)`` for inverse-CDF lookup.

    The last threshold is ``2^64``; zero-weight outcomes repeat the previous threshold
    and are never selected.

    Examples:
        >>> cdf_thresholds((Fraction(1, 4), Fraction(3, 4)))
        (4611686018427387904, 18446744073709551616)
    """
    total = sum(weights, ZERO)
    if total <= 0:
        raise KernelValidationError("Cannot sample from a fiber with no mass")
    thresholds = []
    cumulative = ZERO
    for w in weights:
        cumulative += w
        thresholds.append(math.ceil(cumulative * _SCALE / total))
    return tuple(thresholds)


def pick(thresholds: tuple[int, ...], word: int) -> int:
    """The outcome selected by a 64-bit word."""
    return bisect_right(thresholds, word)


@dataclass
class AncestralSampler:
    """Draws level-``depth`` elements of a state's codomain, one level at a time.

    Thresholds are cached per ``(level, parent)``, so repeated draws only pay for the
    lookups.
    """

    state: ProKernel
    depth: int
    _cache: dict[tuple[int, int], tuple[tuple[int, ...], tuple[int, ...]]] = field(
        default_factory=dict, repr=False
    )

    def __post_init__(self) -> None:
        if not self.state.is_state:
            raise KernelValidationError(f"{self.state} is not a state (its domain is not the unit)")
        if self.depth < 0:
            raise KernelValidationError(f"Depth must be non-negative, got {self.depth}")
        self.state.level(self.depth)

    def _fiber(self, level: int, parent: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
        key = (level, parent)
        cached = self._cache.get(key)
        if cached is None:
            row = self.state.level(level).entries[0]
            if level == 0:
                outcomes = tuple(range(len(row)))
            else:
                connect = self.state.cod.connect(level - 1)
                outcomes = tuple(e for e, image in enumerate(connect) if image == parent)
            cached = (outcomes, cdf_thresholds(tuple(row[e] for e in outcomes)))
            self._cache[key] = cached
        return cached

    def draw(self, rng: random.Random) -> int:
        element = 0
        for level in range(self.depth + 1):
            outcomes, thresholds = self._fiber(level, element)
            element = outcomes[pick(thresholds, rng.getrandbits(WORD_BITS))]
        return element


def sample_state(state: ProKernel, depth: int, seed: int, count: int) -> tuple[int, ...]:
    """Draw ``count`` level-``depth`` elements from ``state`` with a seeded generator.

    Raises:
        KernelValidationError: If ``state`` is not a state or ``count`` is negative
        DepthExceededError: If the state is not defined down to ``depth``
    """
    if count < 0:
        raise KernelValidationError(f"Sample count must be non-negative, got {count}")
    sampler = AncestralSampler(state, depth)
    rng = random.Random(seed)
    return tuple(sampler.draw(rng) for _ in range(count))


@dataclass(frozen=True)
class SampleReport:
    """Outcome of a sampling run.

    Attributes:
        depth: Level the samples live on
        seed: Generator seed
        samples: The drawn elements, in draw order
        clopen: Cylinder whose empirical frequency is reported, if any
        exact: Exact measure of the cylinder under the state
    """

    depth: int
    seed: int
    samples: tuple[int, ...]
    clopen: Clopen | None = None
    exact: Fraction | None = None

    @property
    def count(self) -> int:
        return len(self.samples)

    @property
    def counts(self) -> dict[int, int]:
        """Draws per element, sorted by element."""
        return dict(sorted(Counter(self.samples).items()))

    @property
    def hits(self) -> int | None:
        """Draws that land in the cylinder."""
        if self.clopen is None:
            return None
        subset = self.clopen.refine(self.depth).subset
        return sum(1 for s in self.samples if s in subset)

    @property
    def frequency(self) -> float | None:
        """Empirical frequency of the cylinder; the one floating-point summary."""
        hits = self.hits
        if hits is None or not self.samples:
            return None
        return hits / len(self.samples)


def sample_report(
    state: ProKernel, depth: int, seed: int, count: int, clopen: Clopen | None = None
) -> SampleReport:
    """Sample and, with a cylinder, pair its empirical frequency with its exact measure.

    Raises:
        KernelValidationError: If the cylinder is finer than ``depth``
        SystemMismatchError: If the cylinder is on another system
    """
    exact = None
    if clopen is not None:
        if clopen.level > depth:
            raise KernelValidationError(
                f"Clopen level {clopen.level} is finer than the sampled depth {depth}"
            )
        exact = clopen_measure(state, clopen)
    with log_duration(log, "sampling_finished", depth=depth, seed=seed, count=count) as extra:
        samples = sample_state(state, depth, seed, count)
        report = SampleReport(depth, seed, samples, clopen, exact)
        if clopen is not None:
            extra["hits"] = report.hits
    return report
