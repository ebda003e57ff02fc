"""Countably based Stone spaces as inverse systems of finite sets.

An :class:`InverseSystem` is a sequence of finite sets ``X_0, X_1, ...`` with surjective
connecting maps ``connect(n) : X_{n+1} → X_n``; it stands for its limit. Level data is
produced lazily and memoized per instance. Connecting maps are stored as tables:
``connect(n)[e]`` is the image in ``X_n`` of element ``e`` of ``X_{n+1}``.

Builtin families:

* :class:`ConstantSystem` - every level the same set, identity connects (finite objects)
* :class:`PrefixSystem` - words of length ``n`` over an alphabet, truncation connects
  (``binary_prefix()`` is the Cantor space with big-endian element indices)
* :class:`ExplicitSystem` - per-level tables up to a declared depth
* :class:`ProductSystem` - finite products, level-wise and row-major
* :class:`CountableProductSystem` - countable products with diagonal truncation

Two systems compare equal when their normalized structural keys agree. The key flattens
nested finite products, drops unit factors and merges adjacent constant factors, because
row-major pairing gives all of those presentations identical level data.
"""

from __future__ import annotations

import math
import threading
from abc import ABC, abstractmethod
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field
from typing import Any, Generic, TypeVar

from .errors import DepthExceededError, KernelValidationError, SystemMismatchError
from .finker import FinKernel, FinObj, from_function
from .logging_config import get_logger

log = get_logger(__name__)

Table = tuple[int, ...]
SystemKey = tuple[Any, ...]
K = TypeVar("K")
V = TypeVar("V")


def _check_level_index(n: int) -> None:
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise KernelValidationError(f"Levels are natural numbers, got {n!r}")


class LevelMemo(Generic[K, V]):
    """A memo table filled under a lock, so each value is computed once per instance.

    Reads of filled entries take no lock. The lock is re-entrant because producers may
    consult other entries of the same table.
    """

    def __init__(self) -> None:
        self._values: dict[K, V] = {}
        self._lock = threading.RLock()

    def get(self, key: K, compute: Callable[[], V]) -> V:
        try:
            return self._values[key]
        except KeyError:
            pass
        with self._lock:
            if key not in self._values:
                self._values[key] = compute()
            return self._values[key]

    def __contains__(self, key: object) -> bool:
        return key in self._values

    def __len__(self) -> int:
        return len(self._values)


class InverseSystem(ABC):
    """
    A sequential inverse system of finite sets with surjective connecting maps.

    Subclasses implement :meth:`_level_size`, :meth:`_connect` and :meth:`_raw_key`;
    this base class adds memoization, depth checks and the derived maps.

    Attributes:
        max_depth: Deepest level the system declares, or None if unbounded
    """

    max_depth: int | None = None

    def __init__(self) -> None:
        self._sizes: LevelMemo[int, int] = LevelMemo()
        self._connects: LevelMemo[int, Table] = LevelMemo()
        self._projections: LevelMemo[tuple[int, int], Table] = LevelMemo()
        self._least_preimages: LevelMemo[int, Table] = LevelMemo()
        self._key: SystemKey | None = None

    @abstractmethod
    def _level_size(self, n: int) -> int: ...

    @abstractmethod
    def _connect(self, n: int) -> Table: ...

    @abstractmethod
    def _raw_key(self) -> SystemKey: ...

    def describe(self) -> str:
        """Short human-readable description used in messages and reports."""
        return type(self).__name__

    # Level data

    def check_depth(self, n: int) -> None:
        """Raise :class:`DepthExceededError` if level ``n`` is beyond the declared tables."""
        _check_level_index(n)
        if self.max_depth is not None and n > self.max_depth:
            raise DepthExceededError(self.describe(), n, self.max_depth)

    def level_size(self, n: int) -> int:
        """``|X_n|``."""
        if n not in self._sizes:
            self.check_depth(n)
        return self._sizes.get(n, lambda: self._level_size(n))

    def level(self, n: int) -> FinObj:
        """``X_n`` as a finite object."""
        return FinObj(self.level_size(n))

    def connect(self, n: int) -> Table:
        """The surjection ``X_{n+1} → X_n`` as a table."""
        if n not in self._connects:
            self.check_depth(n + 1)
        return self._connects.get(n, lambda: self._connect(n))

    def connect_kernel(self, n: int) -> FinKernel:
        """The connecting map as a deterministic kernel."""
        return from_function(self.connect(n), self.level(n + 1), self.level(n))

    def projection_table(self, m: int, n: int) -> Table:
        """The composite ``X_m → X_n`` of connecting maps, for ``n ≤ m``."""
        if n > m:
            raise KernelValidationError(
                f"Cannot project from level {m} to the deeper level {n} of {self.describe()}"
            )
        return self._projections.get((m, n), lambda: self._compose_connects(m, n))

    def _compose_connects(self, m: int, n: int) -> Table:
        table: Table = tuple(range(self.level_size(m)))
        for k in range(m - 1, n - 1, -1):
            step = self.connect(k)
            table = tuple(step[e] for e in table)
        return table

    def projection_kernel(self, m: int, n: int) -> FinKernel:
        """``projection_table(m, n)`` as a deterministic kernel ``X_m ⇝ X_n``."""
        return from_function(self.projection_table(m, n), self.level(m), self.level(n))

    def least_preimages(self, n: int) -> Table:
        """For each element of ``X_n``, its least-index preimage in ``X_{n+1}``."""

        def build() -> Table:
            first: dict[int, int] = {}
            for e, image in enumerate(self.connect(n)):
                first.setdefault(image, e)
            return tuple(first[x] for x in range(self.level_size(n)))

        return self._least_preimages.get(n, build)

    # Identity

    @property
    def key(self) -> SystemKey:
        """Normalized structural key; equal keys mean identical level data."""
        if self._key is None:
            self._key = normalize_key(self._raw_key())
        return self._key

    @property
    def is_constant(self) -> bool:
        """True for finite objects: systems whose every connect is an identity."""
        return self.key[0] == "constant"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, InverseSystem):
            return NotImplemented
        return self is other or self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"<{self.describe()}>"

    def validate(self, depth: int) -> None:
        """Check that every connecting map up to ``depth`` is a surjection between the levels.

        Raises:
            KernelValidationError: On the first connect that is not a surjection
        """
        for n in range(depth):
            table = self.connect(n)
            size, upper = self.level_size(n), self.level_size(n + 1)
            if len(table) != upper or any(not 0 <= e < size for e in table):
                raise KernelValidationError(
                    f"connect({n}) of {self.describe()} is not a map {upper} → {size}"
                )
            if len(set(table)) != size:
                raise KernelValidationError(f"connect({n}) of {self.describe()} is not surjective")


def normalize_key(key: SystemKey) -> SystemKey:
    """Flatten products, drop unit factors and merge adjacent constant factors."""
    if key[0] != "product":
        return key
    flat: list[SystemKey] = []
    for factor in key[1:]:
        factor = normalize_key(factor)
        parts = factor[1:] if factor[0] == "product" else (factor,)
        for part in parts:
            if part == ("constant", 1):
                continue
            if part[0] == "constant" and flat and flat[-1][0] == "constant":
                flat[-1] = ("constant", flat[-1][1] * part[1])
            else:
                flat.append(part)
    if not flat:
        return ("constant", 1)
    if len(flat) == 1:
        return flat[0]
    return ("product", *flat)


class ConstantSystem(InverseSystem):
    """Every level is the same finite set; every connect is the identity."""

    def __init__(self, size: int) -> None:
        super().__init__()
        self.size = FinObj(size).size

    def _level_size(self, n: int) -> int:
        return self.size

    def _connect(self, n: int) -> Table:
        return tuple(range(self.size))

    def _raw_key(self) -> SystemKey:
        return ("constant", self.size)

    def describe(self) -> str:
        return f"constant({self.size})"


UNIT_SYSTEM = ConstantSystem(1)


class PrefixSystem(InverseSystem):
    """
    Words of length ``n`` over ``{0..arity-1}``, with truncation as connecting map.

    Element ``e`` of level ``n`` is the word read as a big-endian base-``arity`` number,
    so ``connect(n)(e) = e // arity`` drops the last letter.
    """

    def __init__(self, arity: int) -> None:
        super().__init__()
        if isinstance(arity, bool) or not isinstance(arity, int) or arity < 2:
            raise KernelValidationError(
                f"Prefix systems need an arity of at least 2, got {arity!r}"
            )
        self.arity = arity

    def _level_size(self, n: int) -> int:
        return self.arity**n

    def _connect(self, n: int) -> Table:
        return tuple(e // self.arity for e in range(self.arity ** (n + 1)))

    def least_preimages(self, n: int) -> Table:
        return tuple(x * self.arity for x in range(self.level_size(n)))

    def _raw_key(self) -> SystemKey:
        return ("prefix", self.arity)

    def describe(self) -> str:
        return "binary_prefix" if self.arity == 2 else f"prefix({self.arity})"


def binary_prefix() -> PrefixSystem:
    """The Cantor space: ``X_n = 2^n`` bit strings, big-endian."""
    return PrefixSystem(2)


class ExplicitSystem(InverseSystem):
    """
    An inverse system given by explicit level sizes and connect tables.

    With ``stabilize`` the last declared level repeats forever with identity connects;
    otherwise levels beyond the table raise :class:`DepthExceededError`.
    """

    def __init__(
        self,
        levels: Sequence[int],
        connects: Sequence[Sequence[int]],
        *,
        stabilize: bool = False,
        name: str | None = None,
    ) -> None:
        super().__init__()
        if not levels:
            raise KernelValidationError("An explicit system needs at least one level")
        if len(connects) != len(levels) - 1:
            raise KernelValidationError(
                f"{len(levels)} levels need {len(levels) - 1} connect tables, got {len(connects)}"
            )
        self.levels: tuple[int, ...] = tuple(FinObj(s).size for s in levels)
        self.connects: tuple[Table, ...] = tuple(tuple(c) for c in connects)
        self.stabilize = stabilize
        self.name = name
        self.max_depth = None if stabilize else len(self.levels) - 1
        self.validate(len(self.levels) - 1)

    def _level_size(self, n: int) -> int:
        return self.levels[min(n, len(self.levels) - 1)]

    def _connect(self, n: int) -> Table:
        if n < len(self.connects):
            return self.connects[n]
        return tuple(range(self.levels[-1]))

    def _raw_key(self) -> SystemKey:
        identities = all(c == tuple(range(len(c))) for c in self.connects)
        if self.stabilize and identities and len(set(self.levels)) == 1:
            return ("constant", self.levels[0])
        return ("explicit", self.levels, self.connects, self.stabilize)

    def describe(self) -> str:
        return self.name or f"explicit{list(self.levels)}"


def _mixed_radix_encode(components: Iterable[int], sizes: Sequence[int]) -> int:
    index = 0
    for component, size in zip(components, sizes, strict=True):
        index = index * size + component
    return index


def _mixed_radix_decode(index: int, sizes: Sequence[int]) -> tuple[int, ...]:
    digits: list[int] = []
    for size in reversed(sizes):
        index, digit = divmod(index, size) if size else (index, 0)
        digits.append(digit)
    return tuple(reversed(digits))


class ProductSystem(InverseSystem):
    """Finite product: level ``n`` is ``Π_α X^α_n`` in row-major order."""

    def __init__(self, factors: Sequence[InverseSystem]) -> None:
        super().__init__()
        self.factors: tuple[InverseSystem, ...] = tuple(factors)
        depths = [f.max_depth for f in self.factors if f.max_depth is not None]
        self.max_depth = min(depths) if depths else None

    def factor_sizes(self, n: int) -> tuple[int, ...]:
        return tuple(f.level_size(n) for f in self.factors)

    def components(self, n: int, element: int) -> tuple[int, ...]:
        """Coordinates of a level-``n`` element, one per factor."""
        return _mixed_radix_decode(element, self.factor_sizes(n))

    def encode(self, n: int, components: Sequence[int]) -> int:
        return _mixed_radix_encode(components, self.factor_sizes(n))

    def _level_size(self, n: int) -> int:
        return math.prod(self.factor_sizes(n))

    def _connect(self, n: int) -> Table:
        upper = self.factor_sizes(n + 1)
        lower = self.factor_sizes(n)
        steps = [f.connect(n) for f in self.factors]
        return tuple(
            _mixed_radix_encode(
                (step[c] for step, c in zip(steps, _mixed_radix_decode(e, upper), strict=True)),
                lower,
            )
            for e in range(math.prod(upper))
        )

    def _raw_key(self) -> SystemKey:
        return ("product", *(f.key for f in self.factors))

    def describe(self) -> str:
        return " × ".join(f.describe() for f in self.factors) or "unit"


class CountableProductSystem(InverseSystem):
    """
    Countable product ``Π_{α∈ℕ} X^α`` with diagonal truncation.

    Level ``n`` is ``Π_{α ≤ n} X^α_n`` in row-major order with factor 0 most significant;
    ``connect(n)`` drops factor ``n + 1`` and connects the rest component-wise.

    Args:
        factor: Producer of the factor system at each index
        label: Identity of the family; two countable products are equal iff labels agree
    """

    base: InverseSystem | None = None

    def __init__(self, factor: Callable[[int], InverseSystem], label: str) -> None:
        super().__init__()
        self._factor = factor
        self._factors: LevelMemo[int, InverseSystem] = LevelMemo()
        self.label = label

    @classmethod
    def power(cls, system: InverseSystem) -> CountableProductSystem:
        """The countable product of copies of one system."""
        power = cls(lambda _alpha: system, label=f"power({system.key!r})")
        power.base = system
        power.max_depth = system.max_depth
        return power

    def factor(self, alpha: int) -> InverseSystem:
        return self._factors.get(alpha, lambda: self._factor(alpha))

    def factor_sizes(self, n: int, count: int | None = None) -> tuple[int, ...]:
        count = n + 1 if count is None else count
        return tuple(self.factor(alpha).level_size(n) for alpha in range(count))

    def components(self, n: int, element: int) -> tuple[int, ...]:
        """Coordinates ``(x_0, ..., x_n)`` of a level-``n`` element."""
        return _mixed_radix_decode(element, self.factor_sizes(n))

    def encode(self, n: int, components: Sequence[int]) -> int:
        return _mixed_radix_encode(components, self.factor_sizes(n))

    def _level_size(self, n: int) -> int:
        return math.prod(self.factor_sizes(n))

    def _connect(self, n: int) -> Table:
        upper = self.factor_sizes(n + 1)
        lower = self.factor_sizes(n)
        steps = [self.factor(alpha).connect(n) for alpha in range(n + 1)]
        result: list[int] = []
        for e in range(math.prod(upper)):
            kept = _mixed_radix_decode(e, upper)[:-1]
            result.append(
                _mixed_radix_encode((s[c] for s, c in zip(steps, kept, strict=True)), lower)
            )
        return tuple(result)

    def _raw_key(self) -> SystemKey:
        return ("countable", self.label)

    def describe(self) -> str:
        if self.base is not None:
            return f"power({self.base.describe()})"
        return f"countable({self.label})"


def product(
    systems: Sequence[InverseSystem] | Callable[[int], InverseSystem], label: str | None = None
) -> InverseSystem:
    """The Kolmogorov product of a finite sequence or a countable family of systems.

    Args:
        systems: A finite sequence, or a producer ``α ↦ X^α`` for a countable family
        label: Identity of a countable family (required for producers)

    Examples:
        >>> product([ConstantSystem(2), ConstantSystem(2)]).level_size(5)
        4
        >>> product(lambda _: ConstantSystem(2), label="coins").level_size(3)
        16
    """
    if callable(systems):
        if label is None:
            raise KernelValidationError("A countable product needs a label that identifies it")
        return CountableProductSystem(systems, label)
    return ProductSystem(systems)


def power(system: InverseSystem) -> CountableProductSystem:
    """Countable product of copies of ``system``."""
    return CountableProductSystem.power(system)


def projection(system: InverseSystem, m: int, n: int) -> Table:
    """The map ``X_m → X_n`` for ``n ≤ m``; the identity when ``m == n``.

    Raises:
        KernelValidationError: If ``n > m``
    """
    return system.projection_table(m, n)


def require_same_system(left: InverseSystem, right: InverseSystem, what: str) -> None:
    """Raise :class:`SystemMismatchError` unless the two systems are equal."""
    if left != right:
        raise SystemMismatchError(
            f"{what}: {left.describe()} does not match {right.describe()}"
        )


# Points


@dataclass(eq=False)
class Point:
    """
    A point of the limit: a compatible choice of one element per level.

    Attributes:
        system: The system the point lives in
        producer: ``n ↦ element of X_n``; must be deterministic
    """

    system: InverseSystem
    producer: Callable[[int], int]
    _memo: LevelMemo[int, int] = field(default_factory=LevelMemo, repr=False)

    def at(self, n: int) -> int:
        """The element of ``X_n`` the point passes through."""
        return self._memo.get(n, lambda: self._produce(n))

    def _produce(self, n: int) -> int:
        value = self.producer(n)
        if not 0 <= value < self.system.level_size(n):
            raise KernelValidationError(
                f"Point has element {value} at level {n}, outside {self.system.describe()}"
            )
        return value

    def is_compatible(self, depth: int) -> bool:
        """Whether ``connect_n(point(n+1)) = point(n)`` for every ``n < depth``."""
        return all(self.system.connect(n)[self.at(n + 1)] == self.at(n) for n in range(depth))


def thread_through(system: InverseSystem, level: int, element: int) -> Point:
    """The point through ``element`` of ``X_level``, taking least-index preimages above it."""
    if not 0 <= element < system.level_size(level):
        raise KernelValidationError(
            f"Element {element} is not in level {level} of {system.describe()} "
            f"(size {system.level_size(level)})"
        )
    thread = [element]

    def producer(n: int) -> int:
        if n <= level:
            return system.projection_table(level, n)[element]
        while len(thread) <= n - level:
            k = level + len(thread) - 1
            thread.append(system.least_preimages(k)[thread[-1]])
        return thread[n - level]

    return Point(system, producer)


def least_thread(system: InverseSystem, start: int) -> Point:
    """The point starting at ``start ∈ X_0`` that always takes the least-index preimage.

    Examples:
        >>> [least_thread(binary_prefix(), 0).at(n) for n in range(4)]
        [0, 0, 0, 0]
    """
    return thread_through(system, 0, start)


# Clopens


@dataclass(frozen=True, eq=False)
class Clopen:
    """
    A cylinder: the points whose level-``level`` element lies in ``subset``.

    Equality (``==``) is semantic: two clopens are equal when their refinements to a
    common level agree.
    """

    system: InverseSystem
    level: int
    subset: frozenset[int]

    def __post_init__(self) -> None:
        size = self.system.level_size(self.level)
        subset = frozenset(self.subset)
        bad = sorted(e for e in subset if isinstance(e, bool) or not 0 <= e < size)
        if bad:
            raise KernelValidationError(
                f"Clopen elements {bad} are outside level {self.level} of "
                f"{self.system.describe()} (size {size})"
            )
        object.__setattr__(self, "subset", subset)

    @classmethod
    def whole(cls, system: InverseSystem, level: int = 0) -> Clopen:
        return cls(system, level, frozenset(range(system.level_size(level))))

    @classmethod
    def empty(cls, system: InverseSystem, level: int = 0) -> Clopen:
        return cls(system, level, frozenset())

    @classmethod
    def from_literal(cls, system: InverseSystem, text: str) -> Clopen:
        """Parse ``"LEVEL:e1,e2,..."`` (an empty element list is the empty clopen).

        Examples:
            >>> Clopen.from_literal(binary_prefix(), "3:5").subset
            frozenset({5})
        """
        level_text, sep, elements_text = text.partition(":")
        try:
            if not sep:
                raise ValueError(text)
            level = int(level_text.strip())
            elements = [int(e) for e in elements_text.split(",") if e.strip()]
        except ValueError:
            raise KernelValidationError(
                f"'{text}' is not a clopen literal; expected LEVEL:e1,e2,... such as 3:5"
            ) from None
        return cls(system, level, frozenset(elements))

    def refine(self, level: int) -> Clopen:
        """The same set presented at a level ``≥ self.level`` (preimage)."""
        if level < self.level:
            raise KernelValidationError(
                f"Cannot refine a level-{self.level} clopen to the coarser level {level}"
            )
        table = self.system.projection_table(level, self.level)
        subset = frozenset(e for e, x in enumerate(table) if x in self.subset)
        return Clopen(self.system, level, subset)

    def _aligned(self, other: Clopen) -> tuple[Clopen, Clopen]:
        require_same_system(self.system, other.system, "Clopen operation")
        level = max(self.level, other.level)
        return self.refine(level), other.refine(level)

    def union(self, other: Clopen) -> Clopen:
        a, b = self._aligned(other)
        return Clopen(self.system, a.level, a.subset | b.subset)

    def intersection(self, other: Clopen) -> Clopen:
        a, b = self._aligned(other)
        return Clopen(self.system, a.level, a.subset & b.subset)

    def complement(self) -> Clopen:
        whole = frozenset(range(self.system.level_size(self.level)))
        return Clopen(self.system, self.level, whole - self.subset)

    __or__ = union
    __and__ = intersection
    __invert__ = complement

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Clopen):
            return NotImplemented
        if self.system != other.system:
            return False
        a, b = self._aligned(other)
        return a.subset == b.subset

    __hash__ = None  # type: ignore[assignment]

    def contains(self, point: Point) -> bool:
        """Membership of a point, tested at the base level."""
        require_same_system(self.system, point.system, "Clopen membership")
        return point.at(self.level) in self.subset

    def __contains__(self, point: Point) -> bool:
        return self.contains(point)

    def literal(self) -> str:
        return f"{self.level}:{','.join(str(e) for e in sorted(self.subset))}"

    def __str__(self) -> str:
        return self.literal()


def prefix_cylinder(system: PrefixSystem, word: Sequence[int]) -> Clopen:
    """The cylinder of streams starting with ``word`` in a prefix system."""
    if any(not 0 <= letter < system.arity for letter in word):
        raise KernelValidationError(f"Word {list(word)} uses letters outside 0..{system.arity - 1}")
    element = _mixed_radix_encode(word, [system.arity] * len(word))
    return Clopen(system, len(word), frozenset({element}))


def coordinate_cylinder(system: CountableProductSystem, values: Sequence[int]) -> Clopen:
    """The cylinder fixing coordinates ``0..k-1`` to ``values`` (elements at level ``k-1``)."""
    if not values:
        return Clopen.whole(system)
    level = len(values) - 1
    sizes = system.factor_sizes(level)
    if any(not 0 <= v < s for v, s in zip(values, sizes, strict=True)):
        raise KernelValidationError(
            f"Coordinates {list(values)} are outside the level-{level} factors"
        )
    return Clopen(system, level, frozenset({_mixed_radix_encode(values, sizes)}))
