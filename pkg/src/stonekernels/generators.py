"""Seeded random and exhaustive generators of kernels, systems, states and terms.

Everything here is reproducible: random generators take a :class:`random.Random` (or a
seed) and draw only exact rationals. A random row is built by choosing a denominator
``d`` and a uniform composition of ``d`` into as many parts as the row has entries.
"""

from __future__ import annotations

import functools
import itertools
import random
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

from .dsl.terms import Copy, Discard, Ident, Name, Par, Seq, Swap, Term
from .errors import KernelValidationError
from .finker import FinKernel, FinObj, Row
from .proker import ProKernel
from .rationals import ZERO
from .stone import UNIT_SYSTEM, Clopen, ConstantSystem, ExplicitSystem, InverseSystem

SplitStrategy = Literal["random", "canonical"]


def composition(rng: random.Random, total: int, parts: int) -> list[int]:
    """A uniformly random composition of ``total`` into ``parts`` non-negative parts."""
    if parts == 0:
        return []
    bars = sorted(rng.sample(range(total + parts - 1), parts - 1))
    edges = [-1, *bars, total + parts - 1]
    return [edges[k + 1] - edges[k] - 1 for k in range(parts)]


def random_row(rng: random.Random, width: int, max_denominator: int = 16) -> Row:
    """A random distribution on ``width`` outcomes with denominator at most ``max_denominator``."""
    if width == 0:
        raise KernelValidationError("There is no distribution on the empty set")
    d = rng.randint(1, max_denominator)
    return tuple(Fraction(c, d) for c in composition(rng, d, width))


def random_kernel(rng: random.Random, dom: int, cod: int, max_denominator: int = 16) -> FinKernel:
    """A random kernel ``dom ⇝ cod``; ``cod`` may be 0 only when ``dom`` is 0."""
    rows = tuple(random_row(rng, cod, max_denominator) for _ in range(dom))
    return FinKernel._trusted(FinObj(dom), FinObj(cod), rows)


def random_size(rng: random.Random, max_size: int) -> int:
    return rng.randint(1, max_size)


def exhaustive_rows(width: int, max_denominator: int) -> list[Row]:
    """Every distribution on ``width`` outcomes whose common denominator is at most
    ``max_denominator``."""
    if width == 0:
        return []
    rows: set[Row] = set()
    for d in range(1, max_denominator + 1):
        for bars in itertools.combinations(range(d + width - 1), width - 1):
            edges = [-1, *bars, d + width - 1]
            rows.add(tuple(Fraction(edges[k + 1] - edges[k] - 1, d) for k in range(width)))
    return sorted(rows)


def _positive_compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Compositions of ``total`` into ``parts`` positive parts, in lexicographic order."""
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _positive_compositions(total - first, parts - 1):
            yield (first, *rest)


@functools.cache
def least_lift_shares(width: int, max_denominator: int = 16) -> Row:
    """The lexicographically least split of a unit mass over a fiber of ``width`` preimages.

    The search runs over splits that give every preimage a positive share with a common
    denominator ``d ≤ max_denominator``. A fiber wider than the bound keeps positive shares
    on its leading ``max_denominator`` preimages and zero on the rest.

    Examples:
        >>> [str(s) for s in least_lift_shares(3, 4)]
        ['1/4', '1/4', '1/2']
    """
    if width < 1 or max_denominator < 1:
        raise KernelValidationError(
            f"Cannot split a mass over {width} preimages with denominators ≤ {max_denominator}"
        )
    support = min(width, max_denominator)
    candidates = (
        tuple(Fraction(part, d) for part in parts)
        for d in range(support, max_denominator + 1)
        for parts in itertools.islice(_positive_compositions(d, support), 1)
    )
    return min(candidates) + (ZERO,) * (width - support)


def exhaustive_kernels(max_size: int, max_denominator: int) -> Iterator[FinKernel]:
    """Every kernel between sets of size ``0..max_size`` whose rows have small denominators."""
    for dom in range(max_size + 1):
        for cod in range(max_size + 1):
            if dom == 0:
                yield FinKernel._trusted(FinObj(0), FinObj(cod), ())
                continue
            rows = exhaustive_rows(cod, max_denominator)
            for choice in itertools.product(rows, repeat=dom):
                yield FinKernel._trusted(FinObj(dom), FinObj(cod), tuple(choice))


@dataclass(frozen=True)
class CausalityCase:
    """``f : A ⇝ B``, ``g : B ⇝ C`` and two kernels ``h1, h2 : C ⇝ D``."""

    f: FinKernel
    g: FinKernel
    h1: FinKernel
    h2: FinKernel


def random_causality_case(
    rng: random.Random, max_size: int = 4, max_denominator: int = 16
) -> CausalityCase:
    a, b, c, d = (random_size(rng, max_size) for _ in range(4))
    h1 = random_kernel(rng, c, d, max_denominator)
    h2 = h1 if rng.random() < 0.25 else random_kernel(rng, c, d, max_denominator)
    return CausalityCase(
        random_kernel(rng, a, b, max_denominator), random_kernel(rng, b, c, max_denominator), h1, h2
    )


def zero_mass_causality_case(
    rng: random.Random, max_size: int = 4, max_denominator: int = 16
) -> CausalityCase:
    """A case whose ``h1`` and ``h2`` differ only on an element ``c`` that ``g`` never reaches."""
    a, b, d = (random_size(rng, max_size) for _ in range(3))
    c = rng.randint(2, max(2, max_size))
    unreachable = rng.randrange(c)
    g_rows = []
    for _ in range(b):
        row = list(random_row(rng, c - 1, max_denominator))
        row.insert(unreachable, ZERO)
        g_rows.append(tuple(row))
    g = FinKernel._trusted(FinObj(b), FinObj(c), tuple(g_rows))
    h1 = random_kernel(rng, c, d, max_denominator)
    h2_rows = list(h1.entries)
    h2_rows[unreachable] = random_row(rng, d, max_denominator)
    h2 = FinKernel._trusted(FinObj(c), FinObj(d), tuple(h2_rows))
    return CausalityCase(random_kernel(rng, a, b, max_denominator), g, h1, h2)


def random_surjection(rng: random.Random, upper: int, lower: int) -> tuple[int, ...]:
    """A random surjection ``upper → lower`` (requires ``upper ≥ lower > 0`` or both 0)."""
    table = list(range(lower)) + [rng.randrange(lower) for _ in range(upper - lower)]
    rng.shuffle(table)
    return tuple(table)


def random_system(rng: random.Random, max_size: int = 3, max_levels: int = 3) -> InverseSystem:
    """A small system: a constant one, or a stabilizing explicit table of growing levels."""
    if rng.random() < 0.4:
        return ConstantSystem(random_size(rng, max_size))
    levels = [random_size(rng, max_size)]
    for _ in range(rng.randint(1, max_levels) - 1):
        levels.append(rng.randint(levels[-1], max_size))
    connects = [random_surjection(rng, levels[n + 1], levels[n]) for n in range(len(levels) - 1)]
    return ExplicitSystem(levels, connects, stabilize=True)


class _RandomLevels:
    """Lazy level builder for :func:`random_prokernel`; level ``j+1`` refines level ``j``."""

    def __init__(
        self,
        dom: InverseSystem,
        cod: InverseSystem,
        seed: int,
        shift: int,
        strategy: SplitStrategy,
        max_denominator: int,
    ) -> None:
        self.dom, self.cod = dom, cod
        self.seed, self.shift = seed, shift
        self.strategy = strategy
        self.max_denominator = max_denominator
        self.levels: list[FinKernel] = []

    def schedule(self, j: int) -> int:
        return j + self.shift

    def __call__(self, j: int) -> FinKernel:
        while len(self.levels) <= j:
            self.levels.append(self._build(len(self.levels)))
        return self.levels[j]

    def _build(self, j: int) -> FinKernel:
        rng = random.Random(f"{self.seed}:{j}")
        i = self.schedule(j)
        if j == 0:
            return random_kernel(
                rng, self.dom.level_size(i), self.cod.level_size(0), self.max_denominator
            )
        below = self.levels[j - 1]
        parents = self.dom.projection_table(i, self.schedule(j - 1))
        fibers: list[list[int]] = [[] for _ in range(self.cod.level_size(j - 1))]
        for e, image in enumerate(self.cod.connect(j - 1)):
            fibers[image].append(e)
        width = self.cod.level_size(j)
        rows: list[Row] = []
        for x in range(self.dom.level_size(i)):
            row = [ZERO] * width
            for y, mass in enumerate(below.entries[parents[x]]):
                if not mass:
                    continue
                fiber = fibers[y]
                if self.strategy == "random":
                    shares = random_row(rng, len(fiber), self.max_denominator)
                else:
                    shares = least_lift_shares(len(fiber), self.max_denominator)
                for e, share in zip(fiber, shares, strict=True):
                    row[e] += mass * share
            rows.append(tuple(row))
        return FinKernel._trusted(FinObj(self.dom.level_size(i)), FinObj(width), tuple(rows))


def random_prokernel(
    dom: InverseSystem,
    cod: InverseSystem,
    seed: int,
    *,
    shift: int = 0,
    strategy: SplitStrategy = "canonical",
    max_denominator: int = 16,
) -> ProKernel:
    """A random compatible ProKernel with schedule ``i(j) = j + shift``.

    Level 0 is a random kernel; every further level splits each mass of the level below
    over the fiber of the connecting map, so the compatibility squares hold exactly.
    The ``canonical`` strategy splits by :func:`least_lift_shares`; ``random`` draws a
    fresh split for every mass.
    """
    builder = _RandomLevels(dom, cod, seed, shift, strategy, max_denominator)
    return ProKernel(dom, cod, builder.schedule, builder, name=f"random#{seed}")


def random_state(
    cod: InverseSystem,
    seed: int,
    *,
    strategy: SplitStrategy = "canonical",
    max_denominator: int = 16,
) -> ProKernel:
    """A random compatible state on ``cod``."""
    return random_prokernel(
        UNIT_SYSTEM, cod, seed, strategy=strategy, max_denominator=max_denominator
    )


def random_clopen(rng: random.Random, system: InverseSystem, max_level: int) -> Clopen:
    level = rng.randint(0, max_level)
    elements = [e for e in range(system.level_size(level)) if rng.random() < 0.5]
    return Clopen(system, level, frozenset(elements))


def random_term(
    rng: random.Random,
    kernels: Sequence[str],
    objects: Sequence[str],
    depth: int = 4,
) -> Term:
    """A random term over the given names; not necessarily well typed."""
    if depth <= 0 or rng.random() < 0.3:
        choice = rng.randrange(5)
        if choice == 0 and kernels:
            return Name(rng.choice(kernels))
        obj = rng.choice(objects)
        if choice == 1:
            return Ident(obj)
        if choice == 2:
            return Copy(obj)
        if choice == 3:
            return Discard(obj)
        return Swap(obj, rng.choice(objects))
    left = random_term(rng, kernels, objects, depth - 1)
    right = random_term(rng, kernels, objects, depth - 1)
    return Seq(left, right) if rng.random() < 0.5 else Par(left, right)
