"""Morphisms of ProDet(FinKer): compatible level-indexed families of finite kernels.

A :class:`ProKernel` ``f : X ⇝ Y`` between inverse systems gives, for every level ``j`` of
``Y``, a domain level ``i(j)`` and a finite kernel ``X_{i(j)} ⇝ Y_j``. The family is
compatible when every square

    proj^X_{i(j+1)→i(j)} ; level(j)  =  level(j+1) ; connect^Y_j

commutes exactly. Two presentations of the same morphism may use different schedules
``i``; :func:`equal_at_depth` compares them after lifting to a common domain level.

A *state* (:data:`ProState`) is a ProKernel out of the unit system: a compatible family
of finite distributions, i.e. an exact Kolmogorov-extension measure on the cylinders.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from . import finker
from .errors import DepthExceededError, KernelValidationError, SystemMismatchError
from .finker import CausalityInstance, FinKernel, FinObj, Row
from .logging_config import get_logger
from .rationals import ONE, ZERO, RationalLike, format_rational, to_rational
from .stone import (
    UNIT_SYSTEM,
    Clopen,
    ConstantSystem,
    CountableProductSystem,
    InverseSystem,
    LevelMemo,
    Point,
    PrefixSystem,
    ProductSystem,
    least_thread,
    power,
    product,
    require_same_system,
)

log = get_logger(__name__)

LevelSchedule = Callable[[int], int]
LevelProducer = Callable[[int], FinKernel]


@dataclass(frozen=True, eq=False)
class ProKernel:
    """
    A morphism ``dom ⇝ cod`` of ProDet(FinKer), produced lazily level by level.

    Attributes:
        dom: Domain system ``X``
        cod: Codomain system ``Y``
        dom_level: Monotone schedule ``j ↦ i(j)``
        producer: ``j ↦`` finite kernel ``X_{i(j)} ⇝ Y_j``
        max_depth: Deepest level with data (level tables), or None
        name: Optional label used in messages
    """

    dom: InverseSystem
    cod: InverseSystem
    dom_level: LevelSchedule
    producer: LevelProducer
    max_depth: int | None = None
    name: str = ""
    _levels: LevelMemo[int, FinKernel] = field(default_factory=LevelMemo, repr=False)

    def source_level(self, j: int) -> int:
        """``i(j)``: the domain level the level-``j`` kernel reads from."""
        return self.dom_level(j)

    def level(self, j: int) -> FinKernel:
        """The finite kernel ``X_{i(j)} ⇝ Y_j``.

        Raises:
            DepthExceededError: If ``j`` is beyond a level table or a declared system
        """
        return self._levels.get(j, lambda: self._produce(j))

    def _produce(self, j: int) -> FinKernel:
        if self.max_depth is not None and j > self.max_depth:
            raise DepthExceededError(self.name or "kernel", j, self.max_depth)
        kernel = self.producer(j)
        i = self.source_level(j)
        if kernel.dom.size != self.dom.level_size(i) or kernel.cod.size != self.cod.level_size(j):
            raise KernelValidationError(
                f"Level {j} of {self.name or 'kernel'} is {kernel.dom.size}⇝{kernel.cod.size}, "
                f"expected {self.dom.level_size(i)}⇝{self.cod.level_size(j)}"
            )
        return kernel

    def lifted(self, j: int, i: int) -> FinKernel:
        """The level-``j`` kernel read from domain level ``i ≥ i(j)``."""
        base = self.source_level(j)
        kernel = self.level(j)
        if i == base:
            return kernel
        return finker.compose(self.dom.projection_kernel(i, base), kernel)

    @property
    def is_state(self) -> bool:
        return self.dom == UNIT_SYSTEM

    def first_incompatibility(self, depth: int) -> int | None:
        """The first ``j < depth`` whose square fails, or whose schedule decreases."""
        for j in range(depth):
            i_next, i_here = self.source_level(j + 1), self.source_level(j)
            if i_next < i_here:
                return j
            left = finker.compose(self.level(j + 1), self.cod.connect_kernel(j))
            right = finker.compose(self.dom.projection_kernel(i_next, i_here), self.level(j))
            if left != right:
                return j
        return None

    def validate(self, depth: int) -> None:
        """Check the compatibility squares and the schedule up to ``depth``.

        Raises:
            KernelValidationError: Naming the first failing level
        """
        j = self.first_incompatibility(depth)
        if j is not None:
            raise KernelValidationError(
                f"{self.name or 'Kernel'} is not compatible between levels {j} and {j + 1}"
            )

    def __str__(self) -> str:
        return f"{self.name or 'kernel'} : {self.dom.describe()} ⇝ {self.cod.describe()}"


ProState = ProKernel


def _constant_level(_: int) -> int:
    return 0


def _same_level(j: int) -> int:
    return j


# Constructors


def pro_id(system: InverseSystem) -> ProKernel:
    """The identity: ``i(j) = j`` and the identity kernel at every level."""
    return ProKernel(
        system, system, _same_level, lambda j: finker.identity(system.level(j)), name="id"
    )


def from_finite(kernel: FinKernel, name: str = "") -> ProKernel:
    """A finite kernel as a morphism between constant systems."""
    return ProKernel(
        ConstantSystem(kernel.dom.size),
        ConstantSystem(kernel.cod.size),
        _constant_level,
        lambda _j: kernel,
        name=name,
    )


def deterministic(
    dom: InverseSystem,
    cod: InverseSystem,
    dom_level: LevelSchedule,
    maps: Callable[[int], Sequence[int]],
    name: str = "",
) -> ProKernel:
    """A deterministic pro-map from level functions ``X_{i(j)} → Y_j``."""
    return ProKernel(
        dom,
        cod,
        dom_level,
        lambda j: finker.from_function(maps(j), dom.level(dom_level(j)), cod.level(j)),
        name=name,
    )


def from_level_table(
    dom: InverseSystem,
    cod: InverseSystem,
    levels: Sequence[tuple[int, FinKernel]],
    name: str = "",
) -> ProKernel:
    """A kernel given by explicit ``(dom_level, matrix)`` pairs for levels ``0..len-1``.

    The table is checked for shape, monotonicity and compatibility on construction.

    Raises:
        KernelValidationError: If the table is empty, mis-shaped or incompatible
    """
    if not levels:
        raise KernelValidationError(f"Level table {name!r} has no levels")
    table = tuple(levels)
    depth = len(table) - 1
    kernel = ProKernel(
        dom,
        cod,
        lambda j: table[min(j, depth)][0],
        lambda j: table[j][1],
        max_depth=depth,
        name=name,
    )
    kernel.validate(depth)
    return kernel


# Structure


def pro_compose(f: ProKernel, g: ProKernel) -> ProKernel:
    """First ``f : X ⇝ Y`` then ``g : Y ⇝ Z``.

    Level ``j`` reads ``Y`` at ``i_g(j)`` and ``X`` at ``i_f(i_g(j))``.

    Raises:
        SystemMismatchError: If ``cod(f) != dom(g)``
    """
    require_same_system(f.cod, g.dom, "Cannot compose")

    def schedule(j: int) -> int:
        return f.source_level(g.source_level(j))

    def level(j: int) -> FinKernel:
        return finker.compose(f.level(g.source_level(j)), g.level(j))

    return ProKernel(f.dom, g.cod, schedule, level, name=_joined(f, g, " ; "))


def pro_compose_all(*kernels: ProKernel) -> ProKernel:
    """Compose a non-empty chain left to right."""
    if not kernels:
        raise KernelValidationError("pro_compose_all needs at least one kernel")
    result = kernels[0]
    for k in kernels[1:]:
        result = pro_compose(result, k)
    return result


def pro_tensor(f: ProKernel, g: ProKernel) -> ProKernel:
    """``f ⊗ g : X × Z ⇝ Y × W`` reading both factors at ``max(i_f(j), i_g(j))``."""

    def schedule(j: int) -> int:
        return max(f.source_level(j), g.source_level(j))

    def level(j: int) -> FinKernel:
        i = schedule(j)
        return finker.tensor(f.lifted(j, i), g.lifted(j, i))

    return ProKernel(
        product([f.dom, g.dom]),
        product([f.cod, g.cod]),
        schedule,
        level,
        name=_joined(f, g, " (x) "),
    )


def pro_copy(system: InverseSystem) -> ProKernel:
    """The copy map ``X ⇝ X × X``: ``finker.copy(X_j)`` at every level."""
    return ProKernel(
        system,
        product([system, system]),
        _same_level,
        lambda j: finker.copy(system.level(j)),
        name="copy",
    )


def pro_discard(system: InverseSystem) -> ProKernel:
    """The discard map ``X ⇝ 1``, read from level 0."""
    return ProKernel(
        system,
        UNIT_SYSTEM,
        _constant_level,
        lambda _j: finker.discard(system.level(0)),
        name="discard",
    )


def pro_swap(left: InverseSystem, right: InverseSystem) -> ProKernel:
    """The symmetry ``X × Y ⇝ Y × X``."""
    return ProKernel(
        product([left, right]),
        product([right, left]),
        _same_level,
        lambda j: finker.swap(left.level(j), right.level(j)),
        name="swap",
    )


def marginal_projection(system: InverseSystem, factor: int) -> ProKernel:
    """The deterministic marginal onto one factor of a product system.

    For a countable product, levels before factor ``α`` appears are read from level
    ``α`` and projected down inside the factor.

    Raises:
        KernelValidationError: If the factor is not part of the family
    """
    if isinstance(system, ProductSystem):
        if not 0 <= factor < len(system.factors):
            raise KernelValidationError(
                f"Factor {factor} is not in a product of {len(system.factors)} systems"
            )
        target = system.factors[factor]
        return deterministic(
            system,
            target,
            _same_level,
            lambda j: [system.components(j, e)[factor] for e in range(system.level_size(j))],
            name=f"marginal[{factor}]",
        )
    if isinstance(system, CountableProductSystem):
        if factor < 0:
            raise KernelValidationError(f"Factor index must be non-negative, got {factor}")
        target = system.factor(factor)

        def schedule(j: int) -> int:
            return max(j, factor)

        def maps(j: int) -> list[int]:
            i = schedule(j)
            down = target.projection_table(i, j)
            return [down[system.components(i, e)[factor]] for e in range(system.level_size(i))]

        return deterministic(system, target, schedule, maps, name=f"marginal[{factor}]")
    if factor == 0:
        return pro_id(system)
    raise KernelValidationError(f"{system.describe()} is not a product system")


# Equality and determinism


@dataclass(frozen=True)
class LevelDifference:
    """Witness of inequality: the level and the first differing entry after lifting."""

    level: int
    row: int
    column: int
    left: Fraction
    right: Fraction

    def describe(self) -> str:
        return (
            f"level {self.level}, entry ({self.row}, {self.column}): "
            f"{format_rational(self.left)} ≠ {format_rational(self.right)}"
        )


def compare_at_depth(f: ProKernel, g: ProKernel, depth: int) -> LevelDifference | None:
    """The first level ``j ≤ depth`` at which ``f`` and ``g`` differ, or None.

    Raises:
        SystemMismatchError: If the declared domains or codomains differ
    """
    require_same_system(f.dom, g.dom, "Domains differ")
    require_same_system(f.cod, g.cod, "Codomains differ")
    for j in range(depth + 1):
        i = max(f.source_level(j), g.source_level(j))
        diff = finker.first_difference(f.lifted(j, i), g.lifted(j, i))
        if diff is not None:
            return LevelDifference(j, diff.row, diff.column, diff.left, diff.right)
    return None


def equal_at_depth(f: ProKernel, g: ProKernel, depth: int) -> bool:
    """Whether ``f`` and ``g`` agree at every level ``j ≤ depth`` after common refinement."""
    return compare_at_depth(f, g, depth) is None


def determinism_witness(f: ProKernel, depth: int) -> LevelDifference | None:
    """The first entry outside {0, 1} at levels ``≤ depth``, or None."""
    for j in range(depth + 1):
        entry = finker.first_non_deterministic_entry(f.level(j))
        if entry is not None:
            return LevelDifference(j, entry.row, entry.column, entry.left, entry.right)
    return None


def pro_is_deterministic(f: ProKernel, depth: int) -> bool:
    """Level-wise 0/1 test up to ``depth``."""
    return determinism_witness(f, depth) is None


def pro_commutes_with_copy(f: ProKernel, depth: int) -> bool:
    """The copy equation ``f ; copy = copy ; (f ⊗ f)`` at depth."""
    return equal_at_depth(
        pro_compose(f, pro_copy(f.cod)), pro_compose(pro_copy(f.dom), pro_tensor(f, f)), depth
    )


def pro_causality_instance(
    f: ProKernel, g: ProKernel, h1: ProKernel, h2: ProKernel, depth: int
) -> CausalityInstance:
    """Causality at depth for ``f : A⇝B, g : B⇝C, h_i : C⇝D``."""
    c_sys = g.cod
    b_sys = f.cod

    def discard_b(h: ProKernel) -> ProKernel:
        return pro_compose_all(f, g, pro_copy(c_sys), pro_tensor(h, pro_id(c_sys)))

    def keep_b(h: ProKernel) -> ProKernel:
        keep_c = pro_compose_all(g, pro_copy(c_sys), pro_tensor(h, pro_id(c_sys)))
        return pro_compose_all(f, pro_copy(b_sys), pro_tensor(keep_c, pro_id(b_sys)))

    return CausalityInstance(
        hypothesis=equal_at_depth(discard_b(h1), discard_b(h2), depth),
        conclusion=equal_at_depth(keep_b(h1), keep_b(h2), depth),
    )


# Conditionals


def _require_finite(system: InverseSystem, role: str) -> None:
    if not system.is_constant:
        raise KernelValidationError(
            f"Conditionals need a finite {role}, got {system.describe()}"
        )


def fiber_masses(
    p: ProKernel, y_sys: InverseSystem, l_sys: InverseSystem, level: int
) -> tuple[Row, ...]:
    """``K(x, y) = Σ_l p(x, (y, l))`` computed at one level of ``L``."""
    require_same_system(p.cod, product([y_sys, l_sys]), "Conditional codomain")
    kernel = p.level(level)
    width = l_sys.level_size(level)
    return tuple(
        tuple(sum(row[y * width : (y + 1) * width], ZERO) for y in range(y_sys.level_size(0)))
        for row in kernel.entries
    )


def conditional(p: ProKernel, y_sys: InverseSystem, l_sys: InverseSystem) -> ProKernel:
    """The conditional ``k : X × Y ⇝ L`` of ``p : X ⇝ Y × L`` for finite ``X`` and ``Y``.

    Where ``K(x, y) > 0`` the level-``j`` row is the normalized fiber. Where it is 0 the
    row is the point mass on ``least_thread(L, 0)`` at level ``j``, a compatible choice.

    Raises:
        KernelValidationError: If ``X`` or ``Y`` is not finite
        SystemMismatchError: If ``cod(p)`` is not ``Y × L``
    """
    _require_finite(p.dom, "domain")
    _require_finite(y_sys, "Y")
    require_same_system(p.cod, product([y_sys, l_sys]), "Conditional codomain")
    fallback_thread = least_thread(l_sys, 0) if l_sys.level_size(0) else None
    x_size, y_size = p.dom.level_size(0), y_sys.level_size(0)

    def level(j: int) -> FinKernel:
        p_j = p.level(j)
        width = l_sys.level_size(j)
        rows: list[Row] = []
        for x in range(x_size):
            prow = p_j.entries[x]
            for y in range(y_size):
                fiber = prow[y * width : (y + 1) * width]
                mass = sum(fiber, ZERO)
                if mass:
                    rows.append(tuple(v / mass for v in fiber))
                else:
                    assert fallback_thread is not None
                    at = fallback_thread.at(j)
                    log.debug("conditional_fallback_used", x=x, y=y, level=j, element=at)
                    rows.append(tuple(ONE if e == at else ZERO for e in range(width)))
        return FinKernel._trusted(FinObj(x_size * y_size), FinObj(width), tuple(rows))

    return ProKernel(
        product([p.dom, y_sys]), l_sys, _constant_level, level, name=f"conditional({p.name or 'p'})"
    )


def recompose_conditional(
    p: ProKernel, k: ProKernel, y_sys: InverseSystem, l_sys: InverseSystem
) -> ProKernel:
    """``copy_X ; (id_X ⊗ p_Y) ; (id_X ⊗ copy_Y) ; (swap_{X,Y} ⊗ id_Y) ; (id_Y ⊗ k)``.

    ``p_Y`` is the Y-marginal of ``p``. The result equals ``p`` exactly whenever ``k``
    is a conditional of ``p``.
    """
    x_sys = p.dom
    p_y = pro_compose(p, pro_tensor(pro_id(y_sys), pro_discard(l_sys)))
    return pro_compose_all(
        pro_copy(x_sys),
        pro_tensor(pro_id(x_sys), p_y),
        pro_tensor(pro_id(x_sys), pro_copy(y_sys)),
        pro_tensor(pro_swap(x_sys, y_sys), pro_id(y_sys)),
        pro_tensor(pro_id(y_sys), k),
    )


# States and measures


def infinite_tensor_states(
    states: Sequence[ProKernel] | Callable[[int], ProKernel], label: str | None = None
) -> ProKernel:
    """The product state over ``product(cod(states))``.

    A finite sequence gives a finite product; a producer ``α ↦ state`` gives a countable
    product whose level ``n`` tensors the level-``n`` distributions of factors ``α ≤ n``.

    Raises:
        KernelValidationError: If a factor is not a state
    """
    if callable(states):
        if label is None:
            raise KernelValidationError("A countable family of states needs a label")
        producer = states
        cod = CountableProductSystem(lambda alpha: producer(alpha).cod, label)

        def count(n: int) -> int:
            return n + 1

        def factor(alpha: int) -> ProKernel:
            return _require_state(producer(alpha))
    else:
        finite = tuple(_require_state(s) for s in states)
        cod = product([s.cod for s in finite])

        def count(n: int) -> int:
            return len(finite)

        def factor(alpha: int) -> ProKernel:
            return finite[alpha]

    def level(n: int) -> FinKernel:
        result = finker.identity(FinObj(1))
        for alpha in range(count(n)):
            result = finker.tensor(result, factor(alpha).level(n))
        return result

    return ProKernel(UNIT_SYSTEM, cod, _constant_level, level, name="product_state")


def iid_state(state: ProKernel) -> ProKernel:
    """The countable product of copies of one state, over ``power(cod(state))``."""
    _require_state(state)
    cod = power(state.cod)

    def level(n: int) -> FinKernel:
        result = finker.identity(FinObj(1))
        factor = state.level(n)
        for _ in range(n + 1):
            result = finker.tensor(result, factor)
        return result

    return ProKernel(UNIT_SYSTEM, cod, _constant_level, level, name=f"iid({state.name or 'state'})")


def _require_state(state: ProKernel) -> ProKernel:
    if not state.is_state:
        raise KernelValidationError(f"{state} is not a state (its domain is not the unit)")
    return state


def state_from_distributions(
    cod: InverseSystem, distributions: Callable[[int], Sequence[RationalLike]], name: str = ""
) -> ProKernel:
    """A state from a producer of level distributions ``n ↦ p_n`` on ``Y_n``."""
    return ProKernel(
        UNIT_SYSTEM,
        cod,
        _constant_level,
        lambda n: FinKernel.from_rows([list(distributions(n))], cod.level_size(n)),
        name=name,
    )


def coin_state(bias: RationalLike, system: InverseSystem | None = None) -> ProKernel:
    """Independent Bernoulli(``bias``) bits, where 1 has probability ``bias``.

    Supported systems: ``constant(2)`` (one coin), ``binary_prefix`` (level ``n`` holds
    ``n`` coins) and ``power(constant(2))`` (level ``n`` holds ``n + 1`` coins).

    Examples:
        >>> print(coin_state("1/2").level(2).render())
        1/4 1/4 1/4 1/4
    """
    p = to_rational(bias)
    if not ZERO <= p <= ONE:
        raise KernelValidationError(f"Coin bias {format_rational(p)} is outside [0, 1]")
    system = system if system is not None else PrefixSystem(2)
    name = f"coin({format_rational(p)})"
    key = system.key
    if key == ("constant", 2):
        return from_finite(FinKernel.from_rows([[ONE - p, p]]), name=name)
    if key == ("prefix", 2):
        offset = 0
    elif key == power(ConstantSystem(2)).key:
        offset = 1
    else:
        raise KernelValidationError(
            f"Coin states live on constant(2), binary_prefix or power(2), not {system.describe()}"
        )
    q = ONE - p

    def level(n: int) -> FinKernel:
        width = n + offset
        row = tuple(p ** e.bit_count() * q ** (width - e.bit_count()) for e in range(2**width))
        return FinKernel._trusted(FinObj(1), FinObj(2**width), (row,))

    return ProKernel(UNIT_SYSTEM, system, _constant_level, level, name=name)


def point_state(system: InverseSystem, point: Point) -> ProKernel:
    """The deterministic state of a point: the point mass at ``point(j)`` on each level."""
    require_same_system(system, point.system, "Point state")
    return deterministic(
        UNIT_SYSTEM, system, _constant_level, lambda j: [point.at(j)], name="point"
    )


def evaluate_at_point(f: ProKernel, point: Point) -> ProKernel:
    """The state ``f(x)``: the Kolmogorov extension of the level distributions at ``x``."""
    return pro_compose(point_state(f.dom, point), f)


def clopen_measure(state: ProKernel, clopen: Clopen) -> Fraction:
    """The exact measure of a cylinder under a state.

    Raises:
        KernelValidationError: If ``state`` is not a state
        SystemMismatchError: If the clopen lives on another system

    Examples:
        >>> from stonekernels.stone import binary_prefix
        >>> clopen_measure(coin_state("1/2"), Clopen.from_literal(binary_prefix(), "3:5"))
        Fraction(1, 8)
    """
    _require_state(state)
    if state.cod != clopen.system:
        raise SystemMismatchError(
            f"Clopen on {clopen.system.describe()} cannot be measured by a state on "
            f"{state.cod.describe()}"
        )
    row = state.level(clopen.level).entries[0]
    return sum((row[e] for e in clopen.subset), ZERO)


def level_distribution(state: ProKernel, level: int) -> tuple[Fraction, ...]:
    """The distribution of a state on ``Y_level``."""
    _require_state(state)
    return state.level(level).entries[0]


def _joined(f: ProKernel, g: ProKernel, op: str) -> str:
    if f.name and g.name:
        return f"{f.name}{op}{g.name}"
    return ""


__all__ = [
    "LevelDifference",
    "ProKernel",
    "ProState",
    "clopen_measure",
    "coin_state",
    "compare_at_depth",
    "conditional",
    "deterministic",
    "determinism_witness",
    "equal_at_depth",
    "evaluate_at_point",
    "fiber_masses",
    "from_finite",
    "from_level_table",
    "iid_state",
    "infinite_tensor_states",
    "level_distribution",
    "marginal_projection",
    "point_state",
    "pro_causality_instance",
    "pro_commutes_with_copy",
    "pro_compose",
    "pro_compose_all",
    "pro_copy",
    "pro_discard",
    "pro_id",
    "pro_is_deterministic",
    "pro_swap",
    "pro_tensor",
    "recompose_conditional",
    "state_from_distributions",
]
