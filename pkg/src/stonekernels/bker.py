"""The dual presentation: finite Boolean algebras, the interval effect monoid and BKer.

A finite Boolean algebra is the powerset of its atoms; elements are frozensets of atom
indices. The effect-algebra tensor ``𝕀 ⊗ A`` of a finite algebra is the set of step
functions: one value in [0, 1] per atom. A kernel ``k : A ⇝ B`` in Boolean form is a map
``B → 𝕀 ⊗ A`` that is additive on disjoint elements and sends ⊤ to the constant 1; it is
stored by its values on the atoms of ``B``.

:func:`bker_from_finkernel` and :func:`to_finkernel` are the two halves of the duality
with FinKer and are strict inverses of each other.
"""

from __future__ import annotations

import itertools
from collections.abc import Callable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction

from .errors import KernelValidationError, SystemMismatchError, format_validation_error
from .finker import CausalityInstance, FinKernel, FinObj, pair_index
from .logging_config import get_logger
from .rationals import ONE, ZERO, RationalLike, format_rational, is_probability, to_rational

log = get_logger(__name__)

Element = frozenset[int]


@dataclass(frozen=True)
class FinBoolAlg:
    """The finite Boolean algebra of subsets of ``{0, ..., atoms - 1}``."""

    atoms: int

    def __post_init__(self) -> None:
        FinObj(self.atoms)

    @property
    def top(self) -> Element:
        return frozenset(range(self.atoms))

    @property
    def bottom(self) -> Element:
        return frozenset()

    def atom(self, index: int) -> Element:
        return frozenset({index})

    def elements(self) -> Iterator[Element]:
        """Every element, in order of increasing size then lexicographically."""
        for r in range(self.atoms + 1):
            for combo in itertools.combinations(range(self.atoms), r):
                yield frozenset(combo)

    def contains(self, element: Element) -> bool:
        return all(0 <= a < self.atoms for a in element)

    def join(self, a: Element, b: Element) -> Element:
        return a | b

    def meet(self, a: Element, b: Element) -> Element:
        return a & b

    def complement(self, a: Element) -> Element:
        return self.top - a

    def require(self, element: Element) -> Element:
        if not self.contains(element):
            raise KernelValidationError(
                f"{sorted(element)} is not an element of the algebra with {self.atoms} atoms"
            )
        return frozenset(element)


TWO = FinBoolAlg(1)


def _weights(values: Sequence[RationalLike]) -> tuple[Fraction, ...]:
    return tuple(to_rational(v) for v in values)


@dataclass(frozen=True)
class Distribution:
    """A point of ``𝕀(n)``: exact weights on ``n`` outcomes summing to 1."""

    weights: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        weights = _weights(self.weights)
        if any(not is_probability(w) for w in weights):
            raise KernelValidationError(
                f"Distribution weights must lie in [0, 1]: {_show(weights)}"
            )
        total = sum(weights, ZERO)
        if total != ONE:
            raise KernelValidationError(
                format_validation_error(
                    f"Distribution weights sum to {format_rational(total)}, not 1",
                    fix="Adjust the weights so they sum to exactly 1",
                )
            )
        object.__setattr__(self, "weights", weights)

    @classmethod
    def of(cls, *weights: RationalLike) -> Distribution:
        return cls(_weights(weights))

    @classmethod
    def point(cls, size: int, at: int) -> Distribution:
        return cls(tuple(ONE if i == at else ZERO for i in range(size)))

    @property
    def size(self) -> int:
        return len(self.weights)

    def __getitem__(self, index: int) -> Fraction:
        return self.weights[index]


UNIT_DISTRIBUTION = Distribution((ONE,))


def _show(values: Sequence[Fraction]) -> str:
    return "(" + ", ".join(format_rational(v) for v in values) + ")"


def _function_table(f: Sequence[int] | Callable[[int], int], size: int) -> tuple[int, ...]:
    return tuple(f(i) for i in range(size)) if callable(f) else tuple(f)


def i_action(
    f: Sequence[int] | Callable[[int], int], phi: Distribution, n: int | None = None
) -> Distribution:
    """Pushforward ``𝕀(f)(φ) = λi. Σ_{f(j)=i} φ(j)`` along ``f : m → n``.

    Args:
        f: Table or callable for the map on ``0..m-1``
        phi: Distribution on ``m``
        n: Size of the target (default ``max(f) + 1``)

    Examples:
        >>> i_action([0, 0, 1], Distribution.of("1/6", "1/3", "1/2")).weights
        (Fraction(1, 2), Fraction(1, 2))
    """
    table = _function_table(f, phi.size)
    if len(table) != phi.size:
        raise KernelValidationError(
            f"Map has {len(table)} entries for a distribution on {phi.size}"
        )
    n = n if n is not None else (max(table) + 1 if table else 0)
    if any(not 0 <= v < n for v in table):
        raise KernelValidationError(f"Map values {list(table)} are outside 0..{n - 1}")
    out = [ZERO] * n
    for j, i in enumerate(table):
        out[i] += phi.weights[j]
    return Distribution(tuple(out))


def i_mult(
    f: Sequence[int] | Callable[[int], int],
    phi: Distribution,
    psi: Distribution,
    n: int | None = None,
) -> Distribution:
    """The monoid multiplication ``(f, φ, ψ) ↦ 𝕀(f)(λ(i, j). φ(i)·ψ(j))``.

    ``f`` is indexed by row-major pairs: ``f[i * |b| + j]``.
    """
    joint = Distribution(tuple(p * q for p in phi.weights for q in psi.weights))
    return i_action(f, joint, n)


# Measures

Measure = Mapping[Element, Fraction]


def measure_check(
    algebra: FinBoolAlg, measure: Measure | Callable[[Element], RationalLike]
) -> bool:
    """Whether ``m`` is a finitely additive probability measure on ``algebra``.

    Checks ``m(⊥) = 0``, ``m(⊤) = 1``, values in [0, 1], and additivity on every pair of
    disjoint elements.
    """
    values = {e: to_rational(_lookup(measure, e)) for e in algebra.elements()}
    if values[algebra.bottom] != ZERO or values[algebra.top] != ONE:
        return False
    if any(not is_probability(v) for v in values.values()):
        return False
    for a, b in itertools.combinations(values, 2):
        if not a & b and values[a | b] != values[a] + values[b]:
            log.debug("measure_not_additive", left=sorted(a), right=sorted(b))
            return False
    return True


def _lookup(measure: Measure | Callable[[Element], RationalLike], element: Element) -> RationalLike:
    if callable(measure):
        return measure(element)
    if element not in measure:
        raise KernelValidationError(f"Measure has no value for {sorted(element)}")
    return measure[element]


def measure_from_distribution(phi: Distribution) -> dict[Element, Fraction]:
    """The measure on ``FinBoolAlg(n)`` whose atom masses are ``φ``."""
    return {e: sum((phi.weights[a] for a in e), ZERO) for e in FinBoolAlg(phi.size).elements()}


def distribution_from_measure(algebra: FinBoolAlg, measure: Measure) -> Distribution:
    """The atom masses of a measure.

    Raises:
        KernelValidationError: If ``measure`` is not a probability measure
    """
    if not measure_check(algebra, measure):
        raise KernelValidationError("Not a finitely additive probability measure")
    return Distribution(tuple(to_rational(measure[algebra.atom(a)]) for a in range(algebra.atoms)))


# Step functions


@dataclass(frozen=True)
class StepFunction:
    """An element of ``𝕀 ⊗ A``: one value in [0, 1] per atom of ``A``."""

    algebra: FinBoolAlg
    values: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        values = _weights(self.values)
        if len(values) != self.algebra.atoms:
            raise KernelValidationError(
                f"Step function has {len(values)} values for {self.algebra.atoms} atoms"
            )
        if any(not is_probability(v) for v in values):
            raise KernelValidationError(f"Step function values must lie in [0, 1]: {_show(values)}")
        object.__setattr__(self, "values", values)

    @classmethod
    def constant(cls, algebra: FinBoolAlg, value: RationalLike) -> StepFunction:
        return cls(algebra, tuple(to_rational(value) for _ in range(algebra.atoms)))

    @classmethod
    def indicator(cls, algebra: FinBoolAlg, element: Element) -> StepFunction:
        element = algebra.require(element)
        return cls(algebra, tuple(ONE if a in element else ZERO for a in range(algebra.atoms)))

    def __call__(self, atom: int) -> Fraction:
        return self.values[atom]

    def __add__(self, other: StepFunction) -> StepFunction:
        """The partial effect-algebra sum; defined only where the result stays ≤ 1."""
        if self.algebra != other.algebra:
            raise SystemMismatchError("Step functions over different algebras cannot be added")
        summed = (a + b for a, b in zip(self.values, other.values, strict=True))
        return StepFunction(self.algebra, tuple(summed))

    def is_sharp(self) -> bool:
        return all(v == ZERO or v == ONE for v in self.values)

    def __str__(self) -> str:
        return _show(self.values)


def canonical_decomposition(step: StepFunction) -> tuple[tuple[Fraction, Element], ...]:
    """Write ``step = Σ c_i · 1_{e_i}`` with distinct nonzero ``c_i`` and disjoint ``e_i``.

    Coefficients appear in increasing order.

    Examples:
        >>> s = StepFunction(FinBoolAlg(3), (Fraction(1, 2), Fraction(0), Fraction(1, 2)))
        >>> canonical_decomposition(s)
        ((Fraction(1, 2), frozenset({0, 2})),)
    """
    groups: dict[Fraction, set[int]] = {}
    for atom, value in enumerate(step.values):
        if value:
            groups.setdefault(value, set()).add(atom)
    return tuple((c, frozenset(groups[c])) for c in sorted(groups))


# Kernels


@dataclass(frozen=True)
class BKerMap:
    """
    A kernel ``target ⇝ source`` in Boolean form, i.e. a map ``source → 𝕀 ⊗ target``.

    Attributes:
        source: The algebra ``B`` whose elements are mapped
        target: The algebra ``A`` whose step functions are the values
        atom_values: ``m(atom b)`` for each atom ``b`` of ``source``
    """

    source: FinBoolAlg
    target: FinBoolAlg
    atom_values: tuple[StepFunction, ...]

    def __post_init__(self) -> None:
        if len(self.atom_values) != self.source.atoms:
            raise KernelValidationError(
                f"BKer map has {len(self.atom_values)} atom values for {self.source.atoms} atoms"
            )
        for b, step in enumerate(self.atom_values):
            if step.algebra != self.target:
                raise SystemMismatchError(
                    f"Value of atom {b} is not a step function over the target"
                )
        for a in range(self.target.atoms):
            total = sum((step.values[a] for step in self.atom_values), ZERO)
            if total != ONE:
                raise KernelValidationError(
                    format_validation_error(
                        f"Values at target atom {a} sum to {format_rational(total)}, not 1",
                        fix="A BKer map sends the top element to the constant 1",
                    )
                )

    @classmethod
    def from_assignment(
        cls, source: FinBoolAlg, target: FinBoolAlg, assignment: Mapping[Element, StepFunction]
    ) -> BKerMap:
        """Build a map from values on every element, enforcing additivity and unit.

        Raises:
            KernelValidationError: If the assignment is not additive or misses an element
        """
        atoms = tuple(_assigned(assignment, source.atom(b)) for b in range(source.atoms))
        result = cls(source, target, atoms)
        for element in source.elements():
            if _assigned(assignment, element) != result(element):
                raise KernelValidationError(
                    f"Assignment is not additive at {sorted(element)}: "
                    f"{_assigned(assignment, element)} ≠ {result(element)}"
                )
        return result

    def __call__(self, element: Element) -> StepFunction:
        """The additive extension to an arbitrary element of ``source``."""
        element = self.source.require(element)
        return StepFunction(
            self.target,
            tuple(
                sum((self.atom_values[b].values[a] for b in element), ZERO)
                for a in range(self.target.atoms)
            ),
        )


def _assigned(assignment: Mapping[Element, StepFunction], element: Element) -> StepFunction:
    if element not in assignment:
        raise KernelValidationError(f"Assignment has no value for {sorted(element)}")
    return assignment[element]


def bker_from_finkernel(kernel: FinKernel) -> BKerMap:
    """The Boolean form of ``k : A ⇝ B``: atom ``b`` ↦ the step ``x ↦ k(x, b)``."""
    source = FinBoolAlg(kernel.cod.size)
    target = FinBoolAlg(kernel.dom.size)
    columns = tuple(
        StepFunction(target, tuple(row[b] for row in kernel.entries)) for b in range(source.atoms)
    )
    return BKerMap(source, target, columns)


def to_finkernel(m: BKerMap) -> FinKernel:
    """``k(x, b) = m(atom b)(x)``; row-stochastic because ``m(⊤) = 1``."""
    rows = tuple(
        tuple(m.atom_values[b].values[x] for b in range(m.source.atoms))
        for x in range(m.target.atoms)
    )
    return FinKernel(FinObj(m.target.atoms), FinObj(m.source.atoms), rows)


def identity_bker(algebra: FinBoolAlg) -> BKerMap:
    atoms = (StepFunction.indicator(algebra, algebra.atom(b)) for b in range(algebra.atoms))
    return BKerMap(algebra, algebra, tuple(atoms))


def compose_bker(first: BKerMap, second: BKerMap) -> BKerMap:
    """Kleisli composition, diagrammatic like FinKer: ``first`` then ``second``.

    With ``first`` dual to ``f : A ⇝ B`` and ``second`` dual to ``g : B ⇝ C``, the result is
    dual to ``compose(f, g)``: ``result(c)(a) = Σ_b first(b)(a) · second(c)(b)``.

    Raises:
        SystemMismatchError: If ``second.target`` is not ``first.source``
    """
    if second.target != first.source:
        raise SystemMismatchError(
            f"Cannot compose BKer maps: {first.source.atoms} atoms vs {second.target.atoms} atoms"
        )
    middle = range(first.source.atoms)

    def pulled_back(step: StepFunction) -> StepFunction:
        return StepFunction(
            first.target,
            tuple(
                sum((first.atom_values[b].values[a] * step.values[b] for b in middle), ZERO)
                for a in range(first.target.atoms)
            ),
        )

    values = tuple(pulled_back(step) for step in second.atom_values)
    return BKerMap(second.source, first.target, values)


def compose_bker_all(*maps: BKerMap) -> BKerMap:
    if not maps:
        raise KernelValidationError("compose_bker_all needs at least one map")
    result = maps[0]
    for m in maps[1:]:
        result = compose_bker(result, m)
    return result


def coproduct(left: FinBoolAlg, right: FinBoolAlg) -> FinBoolAlg:
    """The coproduct in BAlg: atoms are row-major pairs of atoms."""
    return FinBoolAlg(left.atoms * right.atoms)


def coproduct_injections(
    left: FinBoolAlg, right: FinBoolAlg
) -> tuple[Callable[[Element], Element], Callable[[Element], Element]]:
    """The two Boolean homomorphisms into :func:`coproduct` (preimages of projections)."""

    def inject_left(element: Element) -> Element:
        element = left.require(element)
        return frozenset(pair_index(a, b, right.atoms) for a in element for b in range(right.atoms))

    def inject_right(element: Element) -> Element:
        element = right.require(element)
        return frozenset(pair_index(a, b, right.atoms) for a in range(left.atoms) for b in element)

    return inject_left, inject_right


def tensor_bker(m1: BKerMap, m2: BKerMap) -> BKerMap:
    """Atom ``(b, d)`` ↦ the step ``(a, c) ↦ m1(b)(a) · m2(d)(c)``."""
    target = coproduct(m1.target, m2.target)
    values = tuple(
        StepFunction(target, tuple(p * q for p in s1.values for q in s2.values))
        for s1 in m1.atom_values
        for s2 in m2.atom_values
    )
    return BKerMap(coproduct(m1.source, m2.source), target, values)


def cocopy(algebra: FinBoolAlg) -> BKerMap:
    """The codiagonal ``A + A → A`` followed by the unit ``A → 𝕀 ⊗ A``."""
    n = algebra.atoms
    zero = StepFunction.constant(algebra, ZERO)
    values = tuple(
        StepFunction.indicator(algebra, algebra.atom(a)) if a == b else zero
        for a in range(n)
        for b in range(n)
    )
    return BKerMap(coproduct(algebra, algebra), algebra, values)


def codiscard(algebra: FinBoolAlg) -> BKerMap:
    """The unique map ``𝟚 → 𝕀 ⊗ A``."""
    return BKerMap(TWO, algebra, (StepFunction.constant(algebra, ONE),))


def coswap(left: FinBoolAlg, right: FinBoolAlg) -> BKerMap:
    """The dual of the symmetry ``A × B ⇝ B × A``."""
    target = coproduct(left, right)
    return BKerMap(
        coproduct(right, left),
        target,
        tuple(
            StepFunction.indicator(target, frozenset({pair_index(a, b, right.atoms)}))
            for b in range(right.atoms)
            for a in range(left.atoms)
        ),
    )


def is_deterministic_bker(m: BKerMap) -> bool:
    """Whether every atom value is sharp: all canonical coefficients equal 1."""
    return all(c == ONE for step in m.atom_values for c, _ in canonical_decomposition(step))


def pushforward_measure(m: BKerMap, phi: Distribution) -> Distribution:
    """Integrate a measure on the target through ``m``: ``ν(b) = Σ_a m(b)(a) · φ(a)``."""
    if phi.size != m.target.atoms:
        raise SystemMismatchError(f"Measure on {phi.size} atoms, map target has {m.target.atoms}")
    return Distribution(
        tuple(
            sum((step.values[a] * phi.weights[a] for a in range(phi.size)), ZERO)
            for step in m.atom_values
        )
    )


def causality_instance_bker(f: BKerMap, g: BKerMap, h1: BKerMap, h2: BKerMap) -> CausalityInstance:
    """Causality with every composite built on the Boolean side.

    Shapes mirror :func:`stonekernels.finker.causality_instance` under duality.
    """
    c_alg, b_alg = g.source, f.source

    def discard_b(h: BKerMap) -> BKerMap:
        return compose_bker_all(f, g, cocopy(c_alg), tensor_bker(h, identity_bker(c_alg)))

    def keep_b(h: BKerMap) -> BKerMap:
        keep_c = compose_bker_all(g, cocopy(c_alg), tensor_bker(h, identity_bker(c_alg)))
        return compose_bker_all(f, cocopy(b_alg), tensor_bker(keep_c, identity_bker(b_alg)))

    return CausalityInstance(
        hypothesis=discard_b(h1) == discard_b(h2),
        conclusion=keep_b(h1) == keep_b(h2),
    )


# The Bernoulli kernel


def bit(index: int, coordinate: int, depth: int) -> int:
    """Coordinate ``i`` of a big-endian ``depth``-bit vector (``x_0`` most significant)."""
    return (index >> (depth - 1 - coordinate)) & 1


def depends_on_coordinate(table: Sequence[RationalLike], coordinate: int) -> bool:
    """Whether flipping ``coordinate`` changes ``f`` for some input.

    Args:
        table: ``f`` over all ``2^d`` big-endian bit vectors
        coordinate: ``i < d``

    Raises:
        KernelValidationError: If the table length is not a power of two or ``i ≥ d``
    """
    size = len(table)
    depth = size.bit_length() - 1
    if size == 0 or 1 << depth != size:
        raise KernelValidationError(f"A table over bit vectors has 2^d entries, got {size}")
    if not 0 <= coordinate < depth:
        raise KernelValidationError(f"Coordinate {coordinate} is not below the depth {depth}")
    mask = 1 << (depth - 1 - coordinate)
    values = [to_rational(v) for v in table]
    return any(values[x] != values[x ^ mask] for x in range(size))


def bernoulli_bias_table(depth: int) -> tuple[Fraction, ...]:
    """``x ↦ Σ_i x_i · 2^(-i-1)`` over ``depth`` bits, which is ``index / 2^depth``."""
    scale = 1 << depth
    return tuple(Fraction(x, scale) for x in range(scale))


def bernoulli_witness(depth: int, agree: int) -> tuple[int, int] | None:
    """Two bit vectors agreeing on the first ``agree`` coordinates with different biases.

    Returns None when no such pair exists (only when ``agree ≥ depth``).
    """
    table = bernoulli_bias_table(depth)
    for coordinate in range(agree, depth):
        mask = 1 << (depth - 1 - coordinate)
        for x in range(len(table)):
            if table[x] != table[x ^ mask]:
                return x, x ^ mask
    return None
