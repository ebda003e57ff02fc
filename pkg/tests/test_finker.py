"""Tests for finite kernels: construction, composition, tensor, determinism, conditionals."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stonekernels import finker
from stonekernels.errors import KernelValidationError, SystemMismatchError
from stonekernels.finker import FinKernel, FinObj
from stonekernels.generators import random_causality_case, zero_mass_causality_case

HALF = Fraction(1, 2)


@st.composite
def kernel_strategy(draw, dom=None, cod=None, max_size=3, max_denominator=6):
    """Generate a random exact kernel with small denominators."""
    dom = draw(st.integers(1, max_size)) if dom is None else dom
    cod = draw(st.integers(1, max_size)) if cod is None else cod
    rows = []
    for _ in range(dom):
        d = draw(st.integers(1, max_denominator))
        cuts = sorted(draw(st.lists(st.integers(0, d), min_size=cod - 1, max_size=cod - 1)))
        edges = [0, *cuts, d]
        rows.append([Fraction(edges[k + 1] - edges[k], d) for k in range(cod)])
    return FinKernel.from_rows(rows, cod)


class TestFinKernelValidation:
    """Test the invariants checked on construction."""

    def test_valid_kernel(self):
        f = FinKernel.from_rows([["1/4", "3/4"], [1, 0]])
        assert f.shape == (2, 2)
        assert f[0, 1] == Fraction(3, 4)
        assert f.row(1) == (Fraction(1), Fraction(0))

    def test_row_must_sum_to_one(self):
        with pytest.raises(KernelValidationError, match="sums to 3/4"):
            FinKernel.from_rows([["1/4", "1/2"]])

    def test_entries_must_be_probabilities(self):
        with pytest.raises(KernelValidationError, match="outside"):
            FinKernel.from_rows([["3/2", "-1/2"]])

    def test_row_length_must_match_codomain(self):
        with pytest.raises(KernelValidationError, match="Row 1 has 1 entries"):
            FinKernel(FinObj(2), FinObj(2), ((HALF, HALF), (Fraction(1),)))

    def test_no_kernel_from_nonempty_set_into_empty_set(self):
        with pytest.raises(KernelValidationError):
            FinKernel(FinObj(1), FinObj(0), ((),))

    def test_empty_kernel_needs_codomain(self):
        with pytest.raises(KernelValidationError, match="explicit codomain"):
            FinKernel.from_rows([])
        assert FinKernel.from_rows([], 3).shape == (0, 3)

    def test_floats_are_rejected(self):
        with pytest.raises(KernelValidationError, match="floating-point"):
            FinKernel.from_rows([[0.5, 0.5]])

    def test_negative_size(self):
        with pytest.raises(KernelValidationError, match="natural number"):
            FinObj(-1)

    def test_render(self):
        f = FinKernel.from_rows([["1/2", "1/2"], ["0", "1"]])
        assert f.render() == "1/2 1/2\n0 1"
        assert str(f) == f.render()

    def test_kernel_from_rows(self):
        assert finker.kernel_from_rows([["1/3", "2/3"]]) == FinKernel.from_rows([["1/3", "2/3"]])
        assert finker.kernel_from_rows([], 2).shape == (0, 2)


class TestStructuralKernels:
    """Test identity, copy, discard, swap, projections and functions."""

    def test_identity(self):
        assert finker.identity(2).render() == "1 0\n0 1"

    def test_copy_is_row_major(self):
        assert finker.copy(2).render() == "1 0 0 0\n0 0 0 1"

    def test_discard(self):
        assert finker.discard(3).render() == "1\n1\n1"

    def test_swap(self):
        s = finker.swap(2, 3)
        assert s.shape == (6, 6)
        for i in range(2):
            for j in range(3):
                assert s[finker.pair_index(i, j, 3), finker.pair_index(j, i, 2)] == 1

    def test_projections(self):
        assert finker.project_first(2, 2) == finker.tensor(finker.identity(2), finker.discard(2))
        assert finker.project_second(2, 3) == finker.tensor(finker.discard(2), finker.identity(3))

    def test_from_function(self):
        assert finker.from_function([1, 0]).render() == "0 1\n1 0"
        assert finker.from_function(lambda x: x % 2, 3, 2).render() == "1 0\n0 1\n1 0"

    def test_from_function_rejects_values_outside_codomain(self):
        with pytest.raises(KernelValidationError, match="outside"):
            finker.from_function([2], cod=2)

    def test_from_function_callable_needs_domain(self):
        with pytest.raises(KernelValidationError, match="needs 'dom'"):
            finker.from_function(lambda x: x)

    def test_pairing(self):
        assert finker.pair_index(1, 2, 3) == 5
        assert finker.unpair_index(5, 3) == (1, 2)


class TestComposition:
    """Test diagrammatic composition and the tensor product."""

    def test_compose(self):
        f = FinKernel.from_rows([["1/3", "2/3"]])
        g = FinKernel.from_rows([["1/2", "1/2"], ["0", "1"]])
        assert finker.compose(f, g).render() == "1/6 5/6"

    def test_compose_is_first_then_second(self):
        f = FinKernel.from_rows([[1, 0, 0]])
        g = FinKernel.from_rows([[0, 1], [1, 0], [1, 0]])
        assert finker.compose(f, g).render() == "0 1"

    def test_compose_mismatch(self):
        with pytest.raises(SystemMismatchError, match="does not match"):
            finker.compose(finker.identity(2), finker.identity(3))

    def test_compose_all(self):
        f = finker.from_function([1, 0])
        assert finker.compose_all(f, f, f) == f
        with pytest.raises(KernelValidationError):
            finker.compose_all()

    def test_tensor_entries(self):
        f = FinKernel.from_rows([["1/2", "1/2"]])
        g = FinKernel.from_rows([["1/3", "2/3"]])
        assert finker.tensor(f, g).render() == "1/6 1/3 1/6 1/3"

    @settings(max_examples=50, deadline=None)
    @given(
        st.integers(1, 3).flatmap(
            lambda a: st.integers(1, 3).flatmap(
                lambda b: st.tuples(kernel_strategy(dom=a, cod=b), kernel_strategy(dom=b))
            )
        )
    )
    def test_unit_and_discard_laws(self, pair):
        f, g = pair
        assert finker.compose(finker.identity(f.dom.size), f) == f
        assert finker.compose(f, finker.identity(f.cod.size)) == f
        assert finker.compose(finker.compose(f, g), finker.discard(g.cod.size)) == finker.discard(
            f.dom.size
        )

    @settings(max_examples=50, deadline=None)
    @given(kernel_strategy(), kernel_strategy(), kernel_strategy())
    def test_tensor_is_associative_on_indices(self, f, g, h):
        assert finker.tensor(finker.tensor(f, g), h) == finker.tensor(f, finker.tensor(g, h))


class TestDeterminism:
    """Test the 0/1 test against the copy equation."""

    def test_function_is_deterministic(self):
        f = finker.from_function([1, 1, 0])
        assert finker.is_deterministic(f)
        assert finker.commutes_with_copy(f)
        assert finker.first_non_deterministic_entry(f) is None

    def test_coin_is_not_deterministic(self):
        coin = FinKernel.from_rows([["1/2", "1/2"]])
        assert not finker.is_deterministic(coin)
        assert not finker.commutes_with_copy(coin)
        entry = finker.first_non_deterministic_entry(coin)
        assert (entry.row, entry.column, entry.left) == (0, 0, HALF)

    @settings(max_examples=80, deadline=None)
    @given(kernel_strategy(max_denominator=3))
    def test_zero_one_iff_copy_equation(self, f):
        assert finker.is_deterministic(f) == finker.commutes_with_copy(f)

    def test_first_difference(self):
        f = FinKernel.from_rows([[1, 0], ["1/2", "1/2"]])
        g = FinKernel.from_rows([[1, 0], ["1/3", "2/3"]])
        diff = finker.first_difference(f, g)
        assert (diff.row, diff.column, diff.left, diff.right) == (1, 0, HALF, Fraction(1, 3))
        assert finker.first_difference(f, f) is None

    def test_first_difference_needs_same_shape(self):
        with pytest.raises(SystemMismatchError):
            finker.first_difference(finker.identity(2), finker.identity(3))


class TestConditional:
    """Test conditionals and their recomposition."""

    def test_point_mass(self):
        p = FinKernel.from_rows([["0", "1", "0", "0"]])
        assert finker.conditional_fin(p, 2, 2).render() == "0 1\n1 0"

    def test_normalized_fibers(self):
        p = FinKernel.from_rows([["1/4", "1/4", "0", "1/2"]])
        assert finker.conditional_fin(p, 2, 2).render() == "1/2 1/2\n0 1"

    def test_zero_fiber_recomposes(self):
        p = FinKernel.from_rows([["1/4", "3/4", "0", "0"], ["0", "1", "0", "0"]])
        k = finker.conditional_fin(p, 2, 2)
        assert k.shape == (4, 2)
        assert k.row(1) == (Fraction(1), Fraction(0))
        assert finker.recompose_conditional(p, k, 2) == p

    def test_codomain_must_factor(self):
        with pytest.raises(SystemMismatchError):
            finker.conditional_fin(FinKernel.from_rows([[1, 0, 0]]), 2, 2)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(1, 3), st.integers(1, 3), st.data())
    def test_recomposition(self, y, z, data):
        p = data.draw(kernel_strategy(cod=y * z))
        k = finker.conditional_fin(p, y, z)
        assert finker.recompose_conditional(p, k, y) == p


class TestCausality:
    """Test the causality implication on generated instances."""

    def test_random_instances(self, rng):
        for _ in range(40):
            case = random_causality_case(rng, 3, 6)
            assert finker.causality_instance(case.f, case.g, case.h1, case.h2).holds

    def test_zero_mass_instances_have_true_hypothesis(self, rng):
        for _ in range(20):
            case = zero_mass_causality_case(rng, 3, 6)
            instance = finker.causality_instance(case.f, case.g, case.h1, case.h2)
            assert instance.hypothesis
            assert instance.conclusion

    def test_shape_mismatch(self):
        f = finker.identity(2)
        with pytest.raises(SystemMismatchError):
            finker.causality_instance(f, f, finker.identity(2), finker.discard(2))

    def test_holds_is_an_implication(self):
        assert finker.CausalityInstance(hypothesis=False, conclusion=False).holds
        assert not finker.CausalityInstance(hypothesis=True, conclusion=False).holds
