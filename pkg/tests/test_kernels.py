import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from affinehardy import kernels as ks
from affinehardy.errors import InvalidInput, NumericalFailure
from affinehardy.kernels import (KernelElement, apply, apply_adjoint, evaluate,
                                 expansivity_lower_bound, inner, kernel, norm,
                                 orbit_norm_kernel_closed, orbit_norms, pointwise_bound_check)
from affinehardy.symbol import IDENTITY, AffineSymbol, adjoint_symbol, compose, iterate

poles = st.builds(complex, st.floats(0.05, 5), st.floats(-5, 5))
coefs = st.builds(complex, st.floats(-3, 3), st.floats(-3, 3))
elements = st.lists(st.tuples(coefs, poles), min_size=1, max_size=8).map(KernelElement.from_terms)
symbols = st.builds(lambda a, br, bi: AffineSymbol(a, complex(br, bi)),
                    st.floats(0.1, 10), st.floats(0, 3), st.floats(-3, 3))


def two_pole_distance(alpha, beta):
    # stable closed form of ||k_alpha - k_beta||
    x, y = alpha.real, beta.real
    return math.sqrt((x + y) * abs(alpha - beta) ** 2
                     / (2 * x * y * abs(alpha + beta.conjugate()) ** 2))


class TestElement:
    def test_merges_equal_poles_and_drops_zeros(self):
        f = KernelElement([1, 2, -1], [1 + 1j, 2, 1 + 1j])
        assert f.terms == [(2 + 0j, 2 + 0j)]
        assert (kernel(3) - kernel(3)).is_zero()

    def test_rejects_poles_outside_half_plane(self):
        with pytest.raises(InvalidInput):
            kernel(-1)
        with pytest.raises(InvalidInput):
            kernel(1j)
        with pytest.raises(InvalidInput):
            KernelElement([1, 1], [1, -2])

    def test_term_cap(self):
        with pytest.raises(InvalidInput):
            KernelElement(np.ones(ks.MAX_TERMS + 1), 1 + np.arange(ks.MAX_TERMS + 1))

    def test_arithmetic(self):
        f = kernel(1) * 2 + kernel(2 + 1j)
        assert evaluate(f - kernel(1), 1) == pytest.approx(0.5 + 1 / (3 - 1j))
        assert (f / 2).terms[0][0] == 1


class TestKernel:
    def test_half_is_unit_norm(self):
        assert norm(kernel(0.5)) == 1.0
        assert inner(kernel(0.5), kernel(0.5)) == 1.0

    def test_norm_of_kernel_at_one(self):
        assert norm(kernel(1)) == pytest.approx(1 / math.sqrt(2), rel=1e-15)

    def test_norm_of_kernel_at_inverse_power(self):
        a, n = 0.5, 2
        assert norm(kernel(a ** -n)) == pytest.approx(math.sqrt(2) / 2 * a ** (n / 2), rel=1e-15)

    def test_diagonal_inner_is_self_evaluation(self):
        assert inner(kernel(3), kernel(3)) == pytest.approx(evaluate(kernel(3), 3), rel=1e-15)
        assert inner(kernel(3), kernel(3)) == pytest.approx(1 / 6, rel=1e-15)


class TestEvaluate:
    def test_examples(self):
        assert evaluate(kernel(1), 1) == 0.5
        assert evaluate(kernel(1 + 1j), 2) == pytest.approx(1 / (3 - 1j), rel=1e-15)
        assert evaluate(kernel(1 + 1j), 2) == pytest.approx(inner(kernel(1 + 1j), kernel(2)), rel=1e-15)
        assert evaluate(ks.ZERO, 2 + 5j) == 0

    def test_rejects_points_outside(self):
        with pytest.raises(InvalidInput):
            evaluate(kernel(1), -0.1)


@settings(max_examples=200)
@given(elements, poles)
def test_reproducing_identity(f, w):
    assert abs(inner(f, kernel(w)) - evaluate(f, w)) <= 1e-12 * (1 + norm(f))


@settings(max_examples=200)
@given(elements, elements)
def test_inner_conjugate_symmetric(f, g):
    assert abs(inner(f, g) - inner(g, f).conjugate()) <= 1e-13 * (1 + norm(f) * norm(g))
    assert inner(f, f).real >= 0


@settings(max_examples=200)
@given(symbols, elements, poles)
def test_apply_is_composition(phi, f, w):
    lhs = evaluate(apply(phi, f), w)
    rhs = evaluate(f, phi(w))
    assert abs(lhs - rhs) <= 1e-12 * (1 + abs(rhs))


@settings(max_examples=200)
@given(symbols, elements, elements)
def test_adjointness(phi, f, g):
    lhs = inner(apply(phi, f), g)
    rhs = inner(f, apply_adjoint(phi, g))
    assert abs(lhs - rhs) <= 1e-12 * (1 + norm(f) * norm(g))


def test_apply_examples():
    phi = AffineSymbol(2, 1)
    image = apply(phi, kernel(0.5))
    assert image == KernelElement([0.5], [0.75])
    assert norm(image) == pytest.approx(1 / math.sqrt(6), rel=1e-15)
    f = KernelElement([1, 2j], [1, 2 + 1j])
    assert apply(IDENTITY, f) == f
    assert apply_adjoint(IDENTITY, f) == f


def test_apply_adjoint_maps_kernel_to_kernel():
    assert apply_adjoint(AffineSymbol(2, 1j), kernel(1)) == kernel(2 + 1j)


CLOSED_GRID = [(a, b) for a in (1, 0.5, 2) for b in (0, 1, 1j, 1 + 1j)]


@pytest.mark.parametrize("a, b", CLOSED_GRID)
@pytest.mark.parametrize("w", [0.5, 1, 1 + 3j])
def test_closed_form_matches_gram(a, b, w):
    phi = AffineSymbol(a, b)
    gram = orbit_norms(phi, kernel(w), 50)
    for n, g in enumerate(gram):
        closed = orbit_norm_kernel_closed(phi, w, n)
        assert abs(g - closed) <= 1e-10 * closed


@pytest.mark.parametrize("a, b", [(2, 1), (3, 1 + 2j), (1.5, 0.25j)])
def test_closed_form_matches_printed_expanding_formula(a, b):
    # for a > 1: 1 / sqrt(2 a^n Re w + 2 (1-a)^-1 a^n (1 - a^n) Re b)
    phi = AffineSymbol(a, b)
    w = 0.7 + 2j
    for n in range(30):
        printed = 1 / math.sqrt(2 * a ** n * w.real
                                + 2 / (1 - a) * a ** n * (1 - a ** n) * b.real)
        assert orbit_norm_kernel_closed(phi, w, n) == pytest.approx(printed, rel=1e-12)


def test_orbit_norm_examples():
    assert orbit_norms(AffineSymbol(1, 1), kernel(0.5), 4)[4] == pytest.approx(1 / 3, rel=1e-15)
    assert orbit_norms(IDENTITY, kernel(2 + 1j), 5) == [norm(kernel(2 + 1j))] * 6
    assert orbit_norms(AffineSymbol(2, 1), kernel(0.5), 1)[1] == pytest.approx(1 / math.sqrt(6), rel=1e-15)
    assert orbit_norm_kernel_closed(AffineSymbol(1, 1 + 1j), 1, 0) == pytest.approx(1 / math.sqrt(2))
    assert orbit_norm_kernel_closed(AffineSymbol(1, 1), 0.5, 4) == pytest.approx(1 / 3, rel=1e-15)
    assert orbit_norm_kernel_closed(AffineSymbol(2, 1), 0.5, 1) == pytest.approx(1 / math.sqrt(6), rel=1e-15)


def test_orbit_cap():
    with pytest.raises(InvalidInput):
        orbit_norms(IDENTITY, kernel(1), ks.ORBIT_CAP + 1)
    with pytest.raises(InvalidInput):
        orbit_norms(IDENTITY, kernel(1), 20, cap=10)


@pytest.mark.parametrize("a, bi", [(2, 1), (0.5, 3), (1, -2), (7.3, 0.1), (0.13, 4.4)])
@pytest.mark.parametrize("w", [0.5, 1 + 3j, 0.01 + 0.2j])
def test_eigenrelation_for_automorphisms(a, bi, w):
    phi = AffineSymbol(a, complex(0, bi))
    residual = apply_adjoint(phi, apply(phi, kernel(w))) - kernel(w) / a
    assert norm(residual) <= 1e-13 * norm(kernel(w)) / a


@pytest.mark.parametrize("a, b", [(1, 1), (1, 2 + 1j), (0.5, 1 + 1j), (3, 0.5)])
@pytest.mark.parametrize("n", [0, 1, 4, 11])
def test_forward_backward_composition_is_real_translation(a, b, n):
    phi = AffineSymbol(a, b)
    _, psi = adjoint_symbol(phi)
    chi = compose(iterate(phi, n), iterate(psi, n))
    if a == 1:
        shift = 2 * n * phi.b.real
    else:
        shift = 2 / (1 - a) * (1 - a ** n) * phi.b.real
    assert chi.a == pytest.approx(1, rel=1e-14)
    assert chi.b == pytest.approx(shift, rel=1e-12, abs=1e-12)
    w = 0.8 - 1j
    assert evaluate(apply(chi, kernel(w)), 1.3) == pytest.approx(
        evaluate(kernel(w + shift), 1.3), rel=1e-12)


@settings(max_examples=100)
@given(st.floats(1.01, 10), st.floats(0, 3), st.floats(-3, 3), elements)
def test_type_two_orbits_contract(a, br, bi, f):
    phi = AffineSymbol(a, complex(br, bi))
    base = norm(f)
    g = f
    if f.is_zero():
        return
    for n, value in enumerate(orbit_norms(phi, f, 20)):
        # poles shrink toward the imaginary axis, so rounding their imaginary
        # parts perturbs the norm by roughly eps * |pole| / Re(pole)
        ps = g.poles
        conditioning = 64 * np.finfo(float).eps * np.max(np.abs(ps) / ps.real)
        assert value <= a ** (-n / 2) * base * (1 + 1e-12 + conditioning)
        g = apply(phi, g)


class TestLowerBound:
    def test_example_value(self):
        bound = expansivity_lower_bound(AffineSymbol(0.5, 0), kernel(0.5), 0)
        assert bound == pytest.approx(2 * math.sqrt(2) / 3, rel=1e-15)

    def test_diverges_monotonically(self):
        phi = AffineSymbol(0.5, 1)
        f = kernel(1)
        values = [expansivity_lower_bound(phi, f, n) for n in range(10, 51)]
        assert all(x < y for x, y in zip(values, values[1:]))

    def test_rejects_non_contracting(self):
        with pytest.raises(InvalidInput):
            expansivity_lower_bound(AffineSymbol(1, 1), kernel(1), 3)

    @settings(max_examples=200)
    @given(st.floats(0.05, 0.95), st.floats(0, 3), st.floats(-3, 3), elements,
           st.integers(0, 30), st.floats(0.25, 4))
    def test_bound_below_orbit_norm(self, a, br, bi, f, n, anchor):
        phi = AffineSymbol(a, complex(br, bi))
        bound = expansivity_lower_bound(phi, f, n, anchor)
        actual = orbit_norms(phi, f, n)[n]
        assert bound <= actual * (1 + 1e-12) + 1e-12


class TestPointwiseBound:
    def test_equality_case(self):
        beta = 1.5 - 2j
        f = kernel(beta)
        assert abs(evaluate(f, beta)) == pytest.approx(norm(f) ** 2)
        assert pointwise_bound_check(f, beta)

    def test_random_trials(self):
        rng = np.random.default_rng(11)
        for _ in range(1000):
            f = ks.random_element(rng, 5)
            w = complex(rng.uniform(0.01, 4), rng.uniform(-4, 4))
            assert pointwise_bound_check(f, w)
            assert pointwise_bound_check(f * 10, w)


class TestNormNumerics:
    @pytest.mark.parametrize("gap", [1e-2, 1e-5, 1e-8, 1e-12, 2 ** -52])
    def test_nearly_coincident_poles(self, gap):
        alpha = 1 + 1j
        beta = alpha + gap
        expected = two_pole_distance(alpha, beta)
        got = norm(kernel(alpha) - kernel(beta))
        assert abs(got - expected) <= 1e-8 * expected + 1e-15

    def test_negative_gram_is_a_failure(self, monkeypatch):
        monkeypatch.setattr(ks, "_quadratic_form", lambda c, p: -1.0)
        with pytest.raises(NumericalFailure):
            norm(kernel(1))
