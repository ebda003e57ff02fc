"""Finite sets and exact stochastic kernels: the Markov category FinKer.

A kernel ``f : A ⇝ B`` between finite sets is a row-stochastic matrix of exact rationals:
row ``x`` is the distribution ``f(x, -)`` on ``B``. Composition is written in diagrammatic
order, ``compose(f, g)`` meaning "first f, then g".

Products of finite sets are flattened row-major: the pair ``(a, b)`` of ``A × B`` is the
index ``a * |B| + b``. Every tensor, copy, swap and conditional in the package uses this
single convention, which makes the associator the identity on indices.

Examples:
    >>> f = FinKernel.from_rows([["1/3", "2/3"]])
    >>> g = FinKernel.from_rows([["1/2", "1/2"], ["0", "1"]])
    >>> print(compose(f, g).render())
    1/6 5/6
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass
from fractions import Fraction

from .errors import KernelValidationError, SystemMismatchError, format_validation_error
from .logging_config import get_logger
from .rationals import ONE, ZERO, RationalLike, format_rational, is_probability, to_rational

log = get_logger(__name__)

Row = tuple[Fraction, ...]


@dataclass(frozen=True)
class FinObj:
    """
    A finite set ``{0, ..., size - 1}``.

    Attributes:
        size: Number of elements (may be 0)
    """

    size: int

    def __post_init__(self) -> None:
        if isinstance(self.size, bool) or not isinstance(self.size, int) or self.size < 0:
            raise KernelValidationError(
                f"Finite object size must be a natural number, got {self.size!r}"
            )

    @property
    def elements(self) -> range:
        """The elements ``0..size-1`` in their canonical order."""
        return range(self.size)

    def __mul__(self, other: FinObj) -> FinObj:
        return FinObj(self.size * other.size)

    def __str__(self) -> str:
        return str(self.size)


UNIT = FinObj(1)
EMPTY = FinObj(0)


def pair_index(left: int, right: int, right_size: int) -> int:
    """Index of the pair ``(left, right)`` in a row-major product."""
    return left * right_size + right


def unpair_index(index: int, right_size: int) -> tuple[int, int]:
    """Inverse of :func:`pair_index`."""
    return divmod(index, right_size)


def _as_obj(value: FinObj | int) -> FinObj:
    return value if isinstance(value, FinObj) else FinObj(value)


@dataclass(frozen=True)
class FinKernel:
    """
    An exact stochastic kernel ``dom ⇝ cod``.

    Construction validates every invariant: the matrix has ``dom.size`` rows of length
    ``cod.size``, every entry lies in [0, 1] and every row sums exactly to 1. A kernel
    into the empty set therefore only exists from the empty set.

    Attributes:
        dom: Source finite set
        cod: Target finite set
        entries: Rows of the matrix, ``entries[x][y] = f(x, y)``
    """

    dom: FinObj
    cod: FinObj
    entries: tuple[Row, ...]

    def __post_init__(self) -> None:
        dom = _as_obj(self.dom)
        cod = _as_obj(self.cod)
        if len(self.entries) != dom.size:
            raise KernelValidationError(
                f"Kernel declared with {dom.size} rows but {len(self.entries)} were given"
            )
        rows: list[Row] = []
        for x, raw_row in enumerate(self.entries):
            if len(raw_row) != cod.size:
                raise KernelValidationError(
                    f"Row {x} has {len(raw_row)} entries, expected {cod.size}"
                )
            row = tuple(to_rational(v) for v in raw_row)
            for y, value in enumerate(row):
                if not is_probability(value):
                    raise KernelValidationError(
                        format_validation_error(
                            f"Entry ({x}, {y}) = {format_rational(value)} is outside [0, 1]",
                            fix="Every entry of a kernel is a probability",
                        )
                    )
            total = sum(row, ZERO)
            if total != ONE:
                raise KernelValidationError(
                    format_validation_error(
                        f"Row {x} sums to {format_rational(total)}, not 1",
                        example='[["1/4", "3/4"], ["1", "0"]]',
                        fix="Make every row sum to exactly 1",
                    )
                )
            rows.append(row)
        object.__setattr__(self, "dom", dom)
        object.__setattr__(self, "cod", cod)
        object.__setattr__(self, "entries", tuple(rows))

    @classmethod
    def _trusted(cls, dom: FinObj, cod: FinObj, entries: tuple[Row, ...]) -> FinKernel:
        """Build a kernel whose invariants hold by construction, skipping validation."""
        kernel = object.__new__(cls)
        object.__setattr__(kernel, "dom", dom)
        object.__setattr__(kernel, "cod", cod)
        object.__setattr__(kernel, "entries", entries)
        return kernel

    @classmethod
    def from_rows(
        cls, rows: Sequence[Sequence[RationalLike]], cod: FinObj | int | None = None
    ) -> FinKernel:
        """Build a validated kernel from rows; ``cod`` is required only when there are no rows.

        Examples:
            >>> FinKernel.from_rows([["1/2", "1/2"]]).cod
            FinObj(size=2)
        """
        if cod is None:
            if not rows:
                raise KernelValidationError("A kernel with no rows needs an explicit codomain")
            cod = len(rows[0])
        return cls(FinObj(len(rows)), _as_obj(cod), tuple(tuple(r) for r in rows))

    def __getitem__(self, key: tuple[int, int]) -> Fraction:
        x, y = key
        return self.entries[x][y]

    def row(self, x: int) -> Row:
        """The distribution ``f(x, -)``."""
        return self.entries[x]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.dom.size, self.cod.size)

    def render(self) -> str:
        """Matrix text: one line per row, entries as "p/q" separated by single spaces."""
        return "\n".join(" ".join(format_rational(v) for v in row) for row in self.entries)

    def __str__(self) -> str:
        return self.render()


def kernel_from_rows(
    rows: Sequence[Sequence[RationalLike]], cod: FinObj | int | None = None
) -> FinKernel:
    """Validated kernel from rational rows (ints, Fractions or "p/q" strings)."""
    return FinKernel.from_rows(rows, cod)


@dataclass(frozen=True)
class EntryDifference:
    """First entry at which two kernels of the same shape differ."""

    row: int
    column: int
    left: Fraction
    right: Fraction


@dataclass(frozen=True)
class CausalityInstance:
    """Outcome of one causality check.

    Attributes:
        hypothesis: The two composites that discard the B-output agree
        conclusion: The two composites that keep a copy of the B-output agree
    """

    hypothesis: bool
    conclusion: bool

    @property
    def holds(self) -> bool:
        """The causality implication ``hypothesis ⇒ conclusion``."""
        return self.conclusion or not self.hypothesis


# Structural kernels


def _point_row(size: int, at: int) -> Row:
    return tuple(ONE if y == at else ZERO for y in range(size))


def identity(obj: FinObj | int) -> FinKernel:
    """The identity kernel on ``obj``."""
    obj = _as_obj(obj)
    return FinKernel._trusted(obj, obj, tuple(_point_row(obj.size, x) for x in obj.elements))


def from_function(
    mapping: Sequence[int] | Callable[[int], int],
    dom: FinObj | int | None = None,
    cod: FinObj | int | None = None,
) -> FinKernel:
    """The deterministic kernel of a function ``h : A → B`` (the inclusion Fin → FinKer).

    Args:
        mapping: Either the table ``[h(0), ..., h(|A|-1)]`` or a callable
        dom: Source set; required when ``mapping`` is a callable
        cod: Target set; defaults to ``max(h) + 1``

    Raises:
        KernelValidationError: If a value falls outside ``cod``

    Examples:
        >>> print(from_function([1, 0]).render())
        0 1
        1 0
    """
    if callable(mapping):
        if dom is None:
            raise KernelValidationError("from_function needs 'dom' when given a callable")
        dom_obj = _as_obj(dom)
        table = [mapping(x) for x in dom_obj.elements]
    else:
        table = list(mapping)
        dom_obj = _as_obj(dom) if dom is not None else FinObj(len(table))
        if len(table) != dom_obj.size:
            raise KernelValidationError(
                f"Function table has {len(table)} entries but the domain has {dom_obj.size}"
            )
    if cod is None:
        cod_obj = FinObj(max(table) + 1 if table else 0)
    else:
        cod_obj = _as_obj(cod)
    for x, y in enumerate(table):
        if isinstance(y, bool) or not isinstance(y, int) or not 0 <= y < cod_obj.size:
            raise KernelValidationError(
                format_validation_error(
                    f"Function value h({x}) = {y!r} is outside 0..{cod_obj.size - 1}",
                    fix="Every function value must be an element of the codomain",
                )
            )
    return FinKernel._trusted(dom_obj, cod_obj, tuple(_point_row(cod_obj.size, y) for y in table))


def copy(obj: FinObj | int) -> FinKernel:
    """The copy kernel ``A ⇝ A × A``, ``x ↦ (x, x)``."""
    obj = _as_obj(obj)
    n = obj.size
    return from_function([pair_index(x, x, n) for x in obj.elements], obj, obj * obj)


def discard(obj: FinObj | int) -> FinKernel:
    """The discard kernel ``A ⇝ 1``: a single column of ones."""
    obj = _as_obj(obj)
    return FinKernel._trusted(obj, UNIT, tuple((ONE,) for _ in obj.elements))


def swap(left: FinObj | int, right: FinObj | int) -> FinKernel:
    """The symmetry ``A × B ⇝ B × A``."""
    a, b = _as_obj(left), _as_obj(right)
    table = [pair_index(j, i, a.size) for i in a.elements for j in b.elements]
    return from_function(table, a * b, b * a)


def project_first(left: FinObj | int, right: FinObj | int) -> FinKernel:
    """The marginal ``A × B ⇝ A`` (equal to ``id ⊗ discard``)."""
    a, b = _as_obj(left), _as_obj(right)
    return from_function([i for i in a.elements for _ in b.elements], a * b, a)


def project_second(left: FinObj | int, right: FinObj | int) -> FinKernel:
    """The marginal ``A × B ⇝ B`` (equal to ``discard ⊗ id``)."""
    a, b = _as_obj(left), _as_obj(right)
    return from_function([j for _ in a.elements for j in b.elements], a * b, b)


# Composition and tensor


def compose(f: FinKernel, g: FinKernel) -> FinKernel:
    """Chapman–Kolmogorov composition: first ``f : A ⇝ B``, then ``g : B ⇝ C``.

    ``result(x, z) = Σ_y f(x, y) · g(y, z)``.

    Raises:
        SystemMismatchError: If ``cod(f) != dom(g)``
    """
    if f.cod != g.dom:
        raise SystemMismatchError(
            f"Cannot compose {f.dom.size}⇝{f.cod.size} with {g.dom.size}⇝{g.cod.size}: "
            f"codomain {f.cod.size} does not match domain {g.dom.size}"
        )
    width = g.cod.size
    support = [[(z, q) for z, q in enumerate(row) if q] for row in g.entries]
    rows: list[Row] = []
    for frow in f.entries:
        acc = [ZERO] * width
        for y, p in enumerate(frow):
            if p:
                for z, q in support[y]:
                    acc[z] += p * q
        rows.append(tuple(acc))
    return FinKernel._trusted(f.dom, g.cod, tuple(rows))


def compose_all(*kernels: FinKernel) -> FinKernel:
    """Compose a non-empty chain of kernels left to right."""
    if not kernels:
        raise KernelValidationError("compose_all needs at least one kernel")
    result = kernels[0]
    for k in kernels[1:]:
        result = compose(result, k)
    return result


def tensor(f: FinKernel, g: FinKernel) -> FinKernel:
    """Monoidal product ``f ⊗ g : A × C ⇝ B × D``, ``((x,c),(y,d)) ↦ f(x,y)·g(c,d)``."""
    rows = tuple(
        tuple(p * q if p and q else ZERO for p in frow for q in grow)
        for frow in f.entries
        for grow in g.entries
    )
    return FinKernel._trusted(f.dom * g.dom, f.cod * g.cod, rows)


# Determinism


def is_deterministic(f: FinKernel) -> bool:
    """True iff every entry is 0 or 1, i.e. ``f`` is a function."""
    return all(v == ZERO or v == ONE for row in f.entries for v in row)


def commutes_with_copy(f: FinKernel) -> bool:
    """The copy equation ``copy ∘ f = (f ⊗ f) ∘ copy`` (the categorical determinism test)."""
    return compose(f, copy(f.cod)) == compose(copy(f.dom), tensor(f, f))


def first_difference(f: FinKernel, g: FinKernel) -> EntryDifference | None:
    """The first differing entry in row-major order, or None if ``f == g``.

    Raises:
        SystemMismatchError: If the kernels have different shapes
    """
    if f.shape != g.shape:
        raise SystemMismatchError(f"Cannot compare a {f.shape} kernel with a {g.shape} kernel")
    for x, (frow, grow) in enumerate(zip(f.entries, g.entries, strict=True)):
        for y, (p, q) in enumerate(zip(frow, grow, strict=True)):
            if p != q:
                return EntryDifference(x, y, p, q)
    return None


def first_non_deterministic_entry(f: FinKernel) -> EntryDifference | None:
    """The first entry that is neither 0 nor 1 (reported as left=value, right=value)."""
    for x, row in enumerate(f.entries):
        for y, v in enumerate(row):
            if v != ZERO and v != ONE:
                return EntryDifference(x, y, v, v)
    return None


# Conditionals


def conditional_fin(p: FinKernel, y_obj: FinObj | int, z_obj: FinObj | int) -> FinKernel:
    """The conditional ``k : X × Y ⇝ Z`` of ``p : X ⇝ Y × Z``.

    Where ``K(x, y) = Σ_z p(x, (y, z))`` is positive, ``k((x, y), -)`` is the fiber of
    ``p`` normalized by ``K``. Where ``K(x, y) = 0`` the row is the point mass at element 0
    of ``Z``; that choice is invisible after recomposition.

    Raises:
        SystemMismatchError: If ``cod(p)`` is not ``|Y| · |Z|``

    Examples:
        >>> p = FinKernel.from_rows([["0", "1", "0", "0"]])  # point mass at (0, 1)
        >>> print(conditional_fin(p, 2, 2).render())
        0 1
        1 0
    """
    y_obj, z_obj = _as_obj(y_obj), _as_obj(z_obj)
    if p.cod.size != y_obj.size * z_obj.size:
        raise SystemMismatchError(
            f"Kernel codomain has {p.cod.size} elements, expected {y_obj.size}×{z_obj.size}"
        )
    fallback = _point_row(z_obj.size, 0)
    rows: list[Row] = []
    for x, prow in enumerate(p.entries):
        for y in y_obj.elements:
            fiber = prow[y * z_obj.size : (y + 1) * z_obj.size]
            mass = sum(fiber, ZERO)
            if mass:
                rows.append(tuple(v / mass for v in fiber))
            else:
                log.debug("conditional_fallback_used", x=x, y=y)
                rows.append(fallback)
    return FinKernel._trusted(p.dom * y_obj, z_obj, tuple(rows))


def recompose_conditional(p: FinKernel, k: FinKernel, y_obj: FinObj | int) -> FinKernel:
    """Rebuild ``X ⇝ Y × Z`` from the Y-marginal of ``p`` and a conditional ``k``.

    ``result(x, (y, z)) = p_Y(x, y) · k((x, y), z)``, computed as the composite
    ``copy_X ; (id_X ⊗ p_Y) ; (id_X ⊗ copy_Y) ; (swap_{X,Y} ⊗ id_Y) ; (id_Y ⊗ k)``.
    """
    y_obj = _as_obj(y_obj)
    x_obj = p.dom
    z_size = k.cod
    p_y = compose(p, project_first(y_obj, z_size))
    return compose_all(
        copy(x_obj),
        tensor(identity(x_obj), p_y),
        tensor(identity(x_obj), copy(y_obj)),
        tensor(swap(x_obj, y_obj), identity(y_obj)),
        tensor(identity(y_obj), k),
    )


# Causality


def causality_instance(
    f: FinKernel, g: FinKernel, h1: FinKernel, h2: FinKernel
) -> CausalityInstance:
    """Evaluate one instance of the causality axiom for ``f : A⇝B, g : B⇝C, h_i : C⇝D``.

    hypothesis: ``(h1 ⊗ id_C)∘copy_C∘g∘f = (h2 ⊗ id_C)∘copy_C∘g∘f`` as maps
    ``A ⇝ D × C``.
    conclusion: the composites that also keep a copy of B, as maps ``A ⇝ D × C × B``
    (read left-associated), agree.

    Raises:
        SystemMismatchError: If the shapes do not compose
    """
    if h1.shape != h2.shape:
        raise SystemMismatchError(f"h1 is {h1.shape} but h2 is {h2.shape}")
    c_obj = g.cod

    def keep_c(h: FinKernel) -> FinKernel:
        return compose_all(g, copy(c_obj), tensor(h, identity(c_obj)))

    gf = compose(f, g)
    hypothesis = compose(gf, compose(copy(c_obj), tensor(h1, identity(c_obj)))) == compose(
        gf, compose(copy(c_obj), tensor(h2, identity(c_obj)))
    )
    copy_b = compose(f, copy(f.cod))
    conclusion = compose(copy_b, tensor(keep_c(h1), identity(f.cod))) == compose(
        copy_b, tensor(keep_c(h2), identity(f.cod))
    )
    return CausalityInstance(hypothesis=hypothesis, conclusion=conclusion)
