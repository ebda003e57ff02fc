"""Property suites for the algebraic laws of every layer.

Each suite draws its cases from a generator seeded by ``(seed, suite name)``, checks one
family of laws with exact equality, and returns a :class:`LawReport`. The same suites
back the test-suite and the ``axioms`` command, so a failure seen by one is reproducible
with the other.
"""

from __future__ import annotations

import random
from collections.abc import Callable
from dataclasses import dataclass, field
from fractions import Fraction

import structlog

from . import bker, finker
from .dsl.evaluator import eval_term
from .dsl.grammar import parse_term
from .dsl.loader import Program
from .dsl.sampling import sample_state
from .dsl.terms import print_term
from .finker import FinKernel, FinObj
from .generators import (
    exhaustive_kernels,
    random_causality_case,
    random_clopen,
    random_kernel,
    random_prokernel,
    random_row,
    random_size,
    random_state,
    random_system,
    random_term,
    zero_mass_causality_case,
)
from .logging_config import get_logger, log_duration
from .proker import (
    ProKernel,
    clopen_measure,
    coin_state,
    compare_at_depth,
    conditional,
    evaluate_at_point,
    fiber_masses,
    from_finite,
    infinite_tensor_states,
    iid_state,
    marginal_projection,
    pro_causality_instance,
    pro_commutes_with_copy,
    pro_compose,
    pro_copy,
    pro_discard,
    pro_id,
    pro_is_deterministic,
    pro_swap,
    pro_tensor,
    recompose_conditional,
)
from .rationals import ONE, ZERO, format_rational
from .stone import (
    Clopen,
    ConstantSystem,
    PrefixSystem,
    ProductSystem,
    coordinate_cylinder,
    least_thread,
    product,
    thread_through,
)

log = get_logger(__name__)


@dataclass
class LawReport:
    """Outcome of one suite.

    Attributes:
        name: Dotted suite name, e.g. ``finker.category``
        cases: Number of law instances checked
        failures: One witness description per failing instance
    """

    name: str
    cases: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def check(self, ok: bool, witness: str) -> None:
        """Record one instance, keeping ``witness`` if it fails."""
        self.cases += 1
        if not ok:
            self.failures.append(f"case {self.cases - 1}: {witness}")

    def check_equal(self, left: FinKernel, right: FinKernel, label: str) -> None:
        """Record an exact matrix equality, with the first differing entry on failure."""
        if left == right:
            self.check(True, label)
        else:
            self.check(False, f"{label}: {_fin_witness(left, right)}")

    def check_equal_at_depth(
        self, left: ProKernel, right: ProKernel, depth: int, label: str
    ) -> None:
        """Record an equality of ProKernels at every level up to ``depth``."""
        diff = compare_at_depth(left, right, depth)
        self.check(diff is None, f"{label}: {diff.describe()}" if diff else label)


@dataclass(frozen=True)
class SuiteParameters:
    """Sizes shared by every suite."""

    seed: int = 0
    cases: int = 200
    max_size: int = 3
    depth: int = 3
    max_denominator: int = 16


def _rng(params: SuiteParameters, name: str) -> random.Random:
    return random.Random(f"{params.seed}:{name}")


def _fin_witness(left: FinKernel, right: FinKernel) -> str:
    if left.shape != right.shape:
        return f"shapes differ: {left.shape} vs {right.shape}"
    diff = finker.first_difference(left, right)
    if diff is None:
        return "equal"
    return (
        f"entry ({diff.row}, {diff.column}): "
        f"{format_rational(diff.left)} ≠ {format_rational(diff.right)}"
    )


# FinKer


def finker_category(params: SuiteParameters) -> LawReport:
    """Associativity and unitality of composition."""
    rng = _rng(params, "finker.category")
    report = LawReport("finker.category")
    for _ in range(params.cases):
        a, b, c, d = (random_size(rng, params.max_size) for _ in range(4))
        f = random_kernel(rng, a, b, params.max_denominator)
        g = random_kernel(rng, b, c, params.max_denominator)
        h = random_kernel(rng, c, d, params.max_denominator)
        report.check_equal(
            finker.compose(finker.compose(f, g), h),
            finker.compose(f, finker.compose(g, h)),
            "associativity",
        )
        report.check_equal(finker.compose(finker.identity(a), f), f, "left unit")
        report.check_equal(finker.compose(f, finker.identity(b)), f, "right unit")
    return report


def finker_comonoid(params: SuiteParameters) -> LawReport:
    """Copy is coassociative, commutative and counital at every size up to ``max_size``."""
    report = LawReport("finker.comonoid")
    for n in range(params.max_size + 1):
        cp, idn, dc = finker.copy(n), finker.identity(n), finker.discard(n)
        report.check_equal(
            finker.compose(cp, finker.tensor(cp, idn)),
            finker.compose(cp, finker.tensor(idn, cp)),
            f"coassociativity at size {n}",
        )
        report.check_equal(finker.compose(cp, finker.swap(n, n)), cp, f"commutativity at {n}")
        report.check_equal(finker.compose(cp, finker.tensor(idn, dc)), idn, f"right counit at {n}")
        report.check_equal(finker.compose(cp, finker.tensor(dc, idn)), idn, f"left counit at {n}")
    return report


def finker_semicartesian(params: SuiteParameters) -> LawReport:
    """``f ; discard = discard`` and discard is monoidal."""
    rng = _rng(params, "finker.semicartesian")
    report = LawReport("finker.semicartesian")
    for _ in range(params.cases):
        a, b = random_size(rng, params.max_size), random_size(rng, params.max_size)
        f = random_kernel(rng, a, b, params.max_denominator)
        report.check_equal(
            finker.compose(f, finker.discard(b)), finker.discard(a), f"discard naturality {a}⇝{b}"
        )
        report.check_equal(
            finker.tensor(finker.discard(a), finker.discard(b)),
            finker.discard(a * b),
            f"discard is monoidal at {a}×{b}",
        )
    return report


def finker_determinism(
    params: SuiteParameters, exhaustive_size: int = 3, exhaustive_denominator: int = 4
) -> LawReport:
    """0/1 entries ⟺ the copy equation, exhaustively and on random kernels."""
    rng = _rng(params, "finker.determinism")
    report = LawReport("finker.determinism")

    def agree(f: FinKernel) -> None:
        det, copies = finker.is_deterministic(f), finker.commutes_with_copy(f)
        witness = "" if det == copies else f"0/1 test {det}, copy equation {copies} on\n{f}"
        report.check(det == copies, witness)

    for f in exhaustive_kernels(exhaustive_size, exhaustive_denominator):
        agree(f)
    for k in range(params.cases):
        a, b = random_size(rng, params.max_size), random_size(rng, params.max_size)
        agree(random_kernel(rng, a, b, 1 if k % 2 else params.max_denominator))
    return report


def finker_causality(params: SuiteParameters) -> LawReport:
    """Hypothesis ⇒ conclusion, on random and zero-mass-branch instances."""
    rng = _rng(params, "finker.causality")
    report = LawReport("finker.causality")
    for k in range(params.cases):
        generator = zero_mass_causality_case if k % 2 else random_causality_case
        case = generator(rng, max(params.max_size, 2), params.max_denominator)
        instance = finker.causality_instance(case.f, case.g, case.h1, case.h2)
        report.check(instance.holds, "hypothesis holds but conclusion fails")
    return report


def finker_conditional(params: SuiteParameters) -> LawReport:
    """Recomposing ``p_Y`` with the conditional gives back ``p``, zero fibers included."""
    rng = _rng(params, "finker.conditional")
    report = LawReport("finker.conditional")
    for k in range(params.cases):
        x, y, z = (random_size(rng, params.max_size) for _ in range(3))
        p = random_kernel(rng, x, y * z, params.max_denominator)
        if k % 2 and y > 1:
            p = _with_empty_fiber(rng, x, y, z, params.max_denominator)
        q = finker.conditional_fin(p, y, z)
        report.check_equal(finker.recompose_conditional(p, q, y), p, "recomposition")
    return report


def _with_empty_fiber(
    rng: random.Random, x: int, y: int, z: int, max_denominator: int
) -> FinKernel:
    """A kernel ``x ⇝ y·z`` whose fiber over one ``y`` has no mass in any row."""
    empty = rng.randrange(y)
    rows = []
    for _ in range(x):
        row = list(random_row(rng, (y - 1) * z, max_denominator))
        rows.append(tuple(row[: empty * z] + [ZERO] * z + row[empty * z :]))
    return FinKernel._trusted(FinObj(x), FinObj(y * z), tuple(rows))


# Stone spaces


def stone_projections(params: SuiteParameters) -> LawReport:
    """Functoriality of projections, least threads, and the product squares."""
    rng = _rng(params, "stone.projections")
    report = LawReport("stone.projections")
    depth = params.depth
    for _ in range(params.cases):
        system = random_system(rng, params.max_size)
        for m in range(depth + 1):
            for n in range(m + 1):
                middle = system.projection_table(m, n)
                for k in range(n + 1):
                    via = tuple(system.projection_table(n, k)[e] for e in middle)
                    report.check(
                        system.projection_table(m, k) == via,
                        f"{system.describe()}: projection {m}→{k} through {n}",
                    )
        start = rng.randrange(system.level_size(0))
        report.check(least_thread(system, start).is_compatible(depth), "least thread")

        other = random_system(rng, params.max_size)
        pair = ProductSystem([system, other])
        for n in range(depth):
            for e in range(pair.level_size(n + 1)):
                upper = pair.components(n + 1, e)
                lower = pair.components(n, pair.connect(n)[e])
                expected = (system.connect(n)[upper[0]], other.connect(n)[upper[1]])
                report.check(lower == expected, f"product square at level {n}, element {e}")
    return report


def stone_clopens(params: SuiteParameters) -> LawReport:
    """Clopens equal their refinements; the Boolean operations respect refinement."""
    rng = _rng(params, "stone.clopens")
    report = LawReport("stone.clopens")
    for _ in range(params.cases):
        system = random_system(rng, params.max_size)
        a = random_clopen(rng, system, params.depth)
        b = random_clopen(rng, system, params.depth)
        finer = a.refine(a.level + rng.randint(0, 2))
        report.check(a == finer, f"{a} differs from its refinement {finer}")
        report.check(~(a | b) == (~a & ~b), f"De Morgan fails for {a}, {b}")
        report.check(a.union(Clopen.empty(system)) == a, f"union with empty changes {a}")
    return report


# ProDet(FinKer)


def _random_pro_chain(
    rng: random.Random, params: SuiteParameters, count: int, deterministic: bool = False
) -> list[ProKernel]:
    systems = [random_system(rng, params.max_size) for _ in range(count + 1)]
    return [
        random_prokernel(
            systems[k],
            systems[k + 1],
            rng.getrandbits(32),
            shift=rng.randint(0, 1),
            max_denominator=1 if deterministic else params.max_denominator,
        )
        for k in range(count)
    ]


def proker_category(params: SuiteParameters) -> LawReport:
    """Associativity and unitality at every depth up to ``depth``."""
    rng = _rng(params, "proker.category")
    report = LawReport("proker.category")
    for _ in range(params.cases):
        f, g, h = _random_pro_chain(rng, params, 3)
        d = rng.randint(0, params.depth)
        report.check_equal_at_depth(
            pro_compose(pro_compose(f, g), h), pro_compose(f, pro_compose(g, h)), d, "associativity"
        )
        report.check_equal_at_depth(pro_compose(pro_id(f.dom), f), f, d, "left unit")
        report.check_equal_at_depth(pro_compose(f, pro_id(f.cod)), f, d, "right unit")
    return report


def proker_comonoid(params: SuiteParameters) -> LawReport:
    """Commutative-comonoid laws of copy/discard and discard naturality."""
    rng = _rng(params, "proker.comonoid")
    report = LawReport("proker.comonoid")
    for _ in range(params.cases):
        (f,) = _random_pro_chain(rng, params, 1)
        x, y = f.dom, f.cod
        d = rng.randint(0, params.depth)
        cp, idx, dc = pro_copy(x), pro_id(x), pro_discard(x)
        report.check_equal_at_depth(
            pro_compose(cp, pro_tensor(cp, idx)),
            pro_compose(cp, pro_tensor(idx, cp)),
            d,
            "coassociativity",
        )
        report.check_equal_at_depth(pro_compose(cp, pro_swap(x, x)), cp, d, "commutativity")
        report.check_equal_at_depth(pro_compose(cp, pro_tensor(idx, dc)), idx, d, "right counit")
        report.check_equal_at_depth(pro_compose(cp, pro_tensor(dc, idx)), idx, d, "left counit")
        report.check_equal_at_depth(pro_compose(f, pro_discard(y)), dc, d, "discard naturality")
    return report


def proker_compatibility(params: SuiteParameters) -> LawReport:
    """Generated kernels and their composites pass the square check."""
    rng = _rng(params, "proker.compatibility")
    report = LawReport("proker.compatibility")
    for _ in range(params.cases):
        f, g = _random_pro_chain(rng, params, 2)
        copied = pro_compose(pro_copy(f.dom), pro_tensor(f, f))
        for kernel in (f, g, pro_compose(f, g), pro_tensor(f, g), copied):
            j = kernel.first_incompatibility(params.depth)
            report.check(j is None, f"{kernel} fails the square above level {j}")
    return report


def proker_determinism(params: SuiteParameters) -> LawReport:
    """Level-wise 0/1 test ⟺ the copy equation at depth."""
    rng = _rng(params, "proker.determinism")
    report = LawReport("proker.determinism")
    for k in range(params.cases):
        (f,) = _random_pro_chain(rng, params, 1, deterministic=bool(k % 2))
        d = rng.randint(0, params.depth)
        det, copies = pro_is_deterministic(f, d), pro_commutes_with_copy(f, d)
        report.check(det == copies, f"depth {d}: 0/1 test {det}, copy equation {copies}")
    return report


def proker_conditional(params: SuiteParameters) -> LawReport:
    """Conditionals of ``p : X ⇝ Y × L`` with ``L`` the bit streams.

    Fiber masses must not depend on the level, the conditional must be compatible, and
    recomposition must give back ``p``.
    """
    rng = _rng(params, "proker.conditional")
    report = LawReport("proker.conditional")
    l_sys = PrefixSystem(2)
    depth = params.depth
    for k in range(params.cases):
        x_sys = ConstantSystem(rng.randint(1, 2))
        y_sys = ConstantSystem(random_size(rng, params.max_size))
        if k % 2 and y_sys.size > 1:
            marginal = _with_empty_fiber(rng, x_sys.size, y_sys.size, 1, params.max_denominator)
            p = pro_tensor(from_finite(marginal), random_state(l_sys, rng.getrandbits(32)))
        else:
            p = random_prokernel(x_sys, product([y_sys, l_sys]), rng.getrandbits(32))
        masses = [fiber_masses(p, y_sys, l_sys, j) for j in range(depth + 1)]
        report.check(all(m == masses[0] for m in masses), "fiber masses depend on the level")
        q = conditional(p, y_sys, l_sys)
        j = q.first_incompatibility(depth)
        report.check(j is None, f"conditional is incompatible above level {j}")
        report.check_equal_at_depth(
            recompose_conditional(p, q, y_sys, l_sys), p, depth, "recomposition"
        )
    return report


def proker_kolmogorov(params: SuiteParameters) -> LawReport:
    """Product states: deterministic marginals, factor marginals and exact cylinder masses."""
    rng = _rng(params, "proker.kolmogorov")
    report = LawReport("proker.kolmogorov")
    depth = params.depth
    for _ in range(params.cases):
        factors = [
            random_state(random_system(rng, params.max_size), rng.getrandbits(32))
            for _ in range(rng.randint(1, 3))
        ]
        joint = infinite_tensor_states(factors)
        for alpha, factor in enumerate(factors):
            marginal = marginal_projection(joint.cod, alpha)
            report.check(pro_is_deterministic(marginal, depth), f"marginal {alpha} is random")
            report.check_equal_at_depth(
                pro_compose(joint, marginal), factor, depth, f"marginal {alpha}"
            )

    coins = iid_state(coin_state("1/2", ConstantSystem(2)))
    stream = coins.cod
    for alpha in range(depth + 1):
        marginal = marginal_projection(stream, alpha)
        report.check(pro_is_deterministic(marginal, depth), f"stream marginal {alpha} is random")
    for k in range(1, depth + 2):
        for bits in range(1 << k):
            values = [(bits >> (k - 1 - i)) & 1 for i in range(k)]
            mass = clopen_measure(coins, coordinate_cylinder(stream, values))
            report.check(mass == Fraction(1, 1 << k), f"cylinder {values} has mass {mass}")

    biased = infinite_tensor_states([coin_state("2/3", ConstantSystem(2))] * 2)
    cylinder = Clopen(biased.cod, 0, frozenset({finker.pair_index(0, 1, 2)}))
    mass = clopen_measure(biased, cylinder)
    report.check(mass == Fraction(2, 9), f"(0, 1) cylinder of biased coins has mass {mass}")
    return report


def proker_measures(params: SuiteParameters) -> LawReport:
    """Finite additivity of clopen measures, and measures of kernel images of points."""
    rng = _rng(params, "proker.measures")
    report = LawReport("proker.measures")
    for _ in range(params.cases):
        system = random_system(rng, params.max_size)
        state = random_state(system, rng.getrandbits(32))
        a = random_clopen(rng, system, params.depth)
        b = random_clopen(rng, system, params.depth)
        left = clopen_measure(state, a | b) + clopen_measure(state, a & b)
        right = clopen_measure(state, a) + clopen_measure(state, b)
        report.check(left == right, f"additivity fails for {a}, {b}: {left} ≠ {right}")
        report.check(clopen_measure(state, Clopen.whole(system)) == ONE, "whole space mass")

        (f,) = _random_pro_chain(rng, params, 1)
        level = rng.randint(0, params.depth)
        point = thread_through(f.dom, level, rng.randrange(f.dom.level_size(level)))
        c = random_clopen(rng, f.cod, params.depth)
        row = f.level(c.level).entries[point.at(f.source_level(c.level))]
        expected = sum((row[e] for e in c.subset), ZERO)
        got = clopen_measure(evaluate_at_point(f, point), c)
        report.check(got == expected, f"measure of {c} under f(x) is {got}, not {expected}")
    return report


def proker_causality(params: SuiteParameters) -> LawReport:
    """Causality at depth on generated kernels and on lifted zero-mass instances."""
    rng = _rng(params, "proker.causality")
    report = LawReport("proker.causality")
    for k in range(params.cases):
        if k % 2:
            case = zero_mass_causality_case(rng, max(params.max_size, 2), params.max_denominator)
            f, g, h1, h2 = (from_finite(m) for m in (case.f, case.g, case.h1, case.h2))
        else:
            f, g, h1 = _random_pro_chain(rng, params, 3)
            h2 = h1
            if rng.random() < 0.5:
                h2 = random_prokernel(h1.dom, h1.cod, rng.getrandbits(32))
        d = rng.randint(0, params.depth)
        report.check(pro_causality_instance(f, g, h1, h2, d).holds, f"depth {d}")
    return report


# BKer


def bker_interval_monoid(params: SuiteParameters) -> LawReport:
    """Functoriality of the interval action; associativity and unit of its multiplication."""
    rng = _rng(params, "bker.interval_monoid")
    report = LawReport("bker.interval_monoid")

    def dist(n: int) -> bker.Distribution:
        return bker.Distribution(random_row(rng, n, params.max_denominator))

    for _ in range(params.cases):
        m, n, p = (random_size(rng, params.max_size) for _ in range(3))
        f = [rng.randrange(n) for _ in range(m)]
        g = [rng.randrange(p) for _ in range(n)]
        phi = dist(m)
        composite = bker.i_action([g[v] for v in f], phi, p)
        stepwise = bker.i_action(g, bker.i_action(f, phi, n), p)
        report.check(composite == stepwise, f"functoriality fails for f={f}, g={g}")

        a, b, c = dist(m), dist(n), dist(p)
        triples = list(range(m * n * p))
        left = bker.i_mult(triples, bker.i_mult(list(range(m * n)), a, b), c)
        right = bker.i_mult(triples, a, bker.i_mult(list(range(n * p)), b, c))
        report.check(left == right, "multiplication is not associative")
        unit = bker.UNIT_DISTRIBUTION
        report.check(bker.i_mult(list(range(m)), unit, a) == a, "left unit")
        report.check(bker.i_mult(list(range(m)), a, unit) == a, "right unit")
    return report


def bker_duality(params: SuiteParameters) -> LawReport:
    """Round trips with FinKer; transport of copy, discard, swap, composition and tensor."""
    rng = _rng(params, "bker.duality")
    report = LawReport("bker.duality")
    dual = bker.bker_from_finkernel
    for _ in range(params.cases):
        a, b, c = (random_size(rng, params.max_size) for _ in range(3))
        f = random_kernel(rng, a, b, params.max_denominator)
        g = random_kernel(rng, b, c, params.max_denominator)
        m = dual(f)
        report.check_equal(bker.to_finkernel(m), f, "to_finkernel after bker_from_finkernel")
        report.check(dual(bker.to_finkernel(m)) == m, "bker_from_finkernel after to_finkernel")
        report.check(
            dual(finker.compose(f, g)) == bker.compose_bker(m, dual(g)), "composition transport"
        )
        report.check(dual(finker.tensor(f, g)) == bker.tensor_bker(m, dual(g)), "tensor transport")
        phi = bker.Distribution(random_row(rng, a, params.max_denominator))
        as_state = FinKernel._trusted(FinObj(1), FinObj(a), (phi.weights,))
        direct = finker.compose(as_state, f).entries[0]
        report.check(bker.pushforward_measure(m, phi).weights == direct, "pushforward")
        report.check(
            bker.measure_check(bker.FinBoolAlg(a), bker.measure_from_distribution(phi)),
            "measure of a distribution",
        )
    for n in range(params.max_size + 1):
        alg = bker.FinBoolAlg(n)
        report.check(dual(finker.copy(n)) == bker.cocopy(alg), f"copy at size {n}")
        report.check(dual(finker.discard(n)) == bker.codiscard(alg), f"discard at size {n}")
        for k in range(params.max_size + 1):
            report.check(
                dual(finker.swap(n, k)) == bker.coswap(alg, bker.FinBoolAlg(k)),
                f"swap at sizes {n}, {k}",
            )
    return report


def bker_determinism(
    params: SuiteParameters, exhaustive_size: int = 3, exhaustive_denominator: int = 4
) -> LawReport:
    """Sharp atom values ⟺ 0/1 matrix, exhaustively."""
    report = LawReport("bker.determinism")
    for f in exhaustive_kernels(exhaustive_size, exhaustive_denominator):
        sharp = bker.is_deterministic_bker(bker.bker_from_finkernel(f))
        agree = sharp == finker.is_deterministic(f)
        report.check(agree, "" if agree else f"disagreement on\n{f}")
    return report


def bker_causality(params: SuiteParameters) -> LawReport:
    """Causality computed on the Boolean side agrees with FinKer and holds."""
    rng = _rng(params, "bker.causality")
    report = LawReport("bker.causality")
    for k in range(params.cases):
        generator = zero_mass_causality_case if k % 2 else random_causality_case
        case = generator(rng, max(params.max_size, 2), params.max_denominator)
        fin = finker.causality_instance(case.f, case.g, case.h1, case.h2)
        duals = [bker.bker_from_finkernel(m) for m in (case.f, case.g, case.h1, case.h2)]
        boolean = bker.causality_instance_bker(*duals)
        report.check(boolean == fin, f"finite {fin} vs boolean {boolean}")
        report.check(boolean.holds, "hypothesis holds but conclusion fails")
    return report


def bker_bernoulli(params: SuiteParameters, max_depth: int = 12) -> LawReport:
    """No finite level determines the Bernoulli bias: witnesses at every depth."""
    report = LawReport("bker.bernoulli")
    for d in range(2, max_depth + 1):
        table = bker.bernoulli_bias_table(d)
        report.check(bker.depends_on_coordinate(table, d - 1), f"depth {d} ignores its last bit")
        for n in range(d):
            pair = bker.bernoulli_witness(d, n)
            ok = (
                pair is not None
                and table[pair[0]] != table[pair[1]]
                and all(bker.bit(pair[0], i, d) == bker.bit(pair[1], i, d) for i in range(n))
            )
            report.check(ok, f"no witness at depth {d} agreeing on {n} bits")
    return report


# Terms


def dsl_round_trip(params: SuiteParameters) -> LawReport:
    """Printing then parsing gives back the same tree."""
    rng = _rng(params, "dsl.round_trip")
    report = LawReport("dsl.round_trip")
    kernels = ["f", "g", "coin", "k_2"]
    objects = ["X", "Y", "B", "unit"]
    for _ in range(params.cases):
        term = random_term(rng, kernels, objects, depth=rng.randint(0, 5))
        text = print_term(term)
        report.check(parse_term(text) == term, f"'{text}' reparses differently")
    return report


def dsl_evaluation(params: SuiteParameters) -> LawReport:
    """Term evaluation agrees with direct calls into the kernel modules."""
    rng = _rng(params, "dsl.evaluation")
    report = LawReport("dsl.evaluation")
    bits = PrefixSystem(2)
    for _ in range(params.cases):
        x, y, z = (random_size(rng, params.max_size) for _ in range(3))
        f = random_kernel(rng, x, y, params.max_denominator)
        g = random_kernel(rng, y, z, params.max_denominator)
        coin = random_state(bits, rng.getrandbits(32))
        program = Program(
            objects={
                "X": ConstantSystem(x),
                "Y": ConstantSystem(y),
                "Z": ConstantSystem(z),
                "B": bits,
            },
            kernels={"f": from_finite(f, "f"), "g": from_finite(g, "g"), "coin": coin},
        )
        d = rng.randint(0, params.depth)
        expectations = {
            "f ; g": finker.compose(f, g),
            "f (x) g": finker.tensor(f, g),
            "copy[X] ; f (x) f": finker.compose(finker.copy(x), finker.tensor(f, f)),
            "copy[X] ; (id[X] (x) discard[X])": finker.identity(x),
            "f (x) g ; swap[Y, Z]": finker.compose(finker.tensor(f, g), finker.swap(y, z)),
            "coin ; copy[B]": pro_compose(coin, pro_copy(bits)).level(d),
            "coin (x) coin ; discard[B] (x) id[B]": coin.level(d),
        }
        for text, expected in expectations.items():
            report.check_equal(eval_term(program, text, d), expected, f"'{text}' at depth {d}")
    return report


def dsl_sampling(
    params: SuiteParameters, count: int = 10_000, tolerance: float = 0.01
) -> LawReport:
    """Seeded sampling is reproducible and the fair-coin cylinder ``3:5`` has frequency 1/8."""
    report = LawReport("dsl.sampling")
    state = coin_state("1/2")
    first = sample_state(state, 3, params.seed, count)
    second = sample_state(state, 3, params.seed, count)
    report.check(first == second, "the same seed produced different samples")
    frequency = first.count(5) / count
    report.check(
        abs(frequency - 0.125) <= tolerance,
        f"frequency {frequency} is not within {tolerance} of 1/8",
    )
    return report


SUITES: dict[str, Callable[[SuiteParameters], LawReport]] = {
    "finker.category": finker_category,
    "finker.comonoid": finker_comonoid,
    "finker.semicartesian": finker_semicartesian,
    "finker.determinism": finker_determinism,
    "finker.causality": finker_causality,
    "finker.conditional": finker_conditional,
    "stone.projections": stone_projections,
    "stone.clopens": stone_clopens,
    "proker.category": proker_category,
    "proker.comonoid": proker_comonoid,
    "proker.compatibility": proker_compatibility,
    "proker.determinism": proker_determinism,
    "proker.conditional": proker_conditional,
    "proker.kolmogorov": proker_kolmogorov,
    "proker.measures": proker_measures,
    "proker.causality": proker_causality,
    "bker.interval_monoid": bker_interval_monoid,
    "bker.duality": bker_duality,
    "bker.determinism": bker_determinism,
    "bker.causality": bker_causality,
    "bker.bernoulli": bker_bernoulli,
    "dsl.round_trip": dsl_round_trip,
    "dsl.evaluation": dsl_evaluation,
    "dsl.sampling": dsl_sampling,
}


def run_suite(name: str, params: SuiteParameters) -> LawReport:
    """Run one suite by name, logging its duration and outcome.

    Raises:
        KeyError: If no suite has that name
    """
    suite = SUITES[name]
    with (
        structlog.contextvars.bound_contextvars(suite=name, seed=params.seed),
        log_duration(log, "law_suite_finished") as extra,
    ):
        report = suite(params)
        extra["cases"] = report.cases
        extra["failures"] = len(report.failures)
    return report


def run_all_suites(params: SuiteParameters, only: str | None = None) -> list[LawReport]:
    """Run every suite, or those whose name starts with ``only``, in a fixed order."""
    names = [n for n in SUITES if only is None or n.startswith(only)]
    return [run_suite(name, params) for name in names]
