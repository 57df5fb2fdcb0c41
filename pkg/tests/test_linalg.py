import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from specconc.errors import BoundViolation, DimensionMismatch, DomainViolation, NonConvergence
from specconc.functionals import builtin, make_custom, make_indicator, make_sqrt_abs
from specconc.linalg import (
    DataMatrix,
    Spectrum,
    SymMatrix,
    dilation,
    eigvalsh_batch,
    format_float,
    kolmogorov_count,
    kolmogorov_distance,
    operator_norm,
    read_matrix_csv,
    read_spectrum,
    singular_values,
    spectral_cdf,
    spectral_functional,
    symmetric_eigenvalues,
    wishart,
    write_matrix_csv,
    write_spectrum,
)

finite = st.floats(-100.0, 100.0, allow_nan=False, allow_infinity=False)


def sym_matrices(max_n=12):
    return st.integers(1, max_n).flatmap(
        lambda n: arrays(np.float64, (n, n), elements=finite).map(lambda a: (a + a.T) / 2.0)
    )


# -- eigenvalues -------------------------------------------------------------


def test_eigen_examples():
    assert np.array_equal(symmetric_eigenvalues(np.eye(3)).values, [1.0, 1.0, 1.0])
    assert np.array_equal(symmetric_eigenvalues(np.diag([4.0, -2.0, 0.0])).values, [-2.0, 0.0, 4.0])
    vals = symmetric_eigenvalues(np.array([[0.0, 3.0], [3.0, 0.0]])).values
    assert np.allclose(vals, [-3.0, 3.0], atol=1e-14)


def test_only_upper_triangle_is_read():
    a = np.array([[1.0, 2.0], [99.0, 1.0]])
    assert np.allclose(symmetric_eigenvalues(a).values, [-1.0, 3.0])
    assert np.array_equal(SymMatrix(a).values, [[1.0, 2.0], [2.0, 1.0]])


def test_nonconvergence_raised():
    a = np.random.default_rng(0).standard_normal((10, 10))
    with pytest.raises(NonConvergence):
        symmetric_eigenvalues(a + a.T, max_sweeps=1)


@settings(max_examples=200, deadline=None)
@given(sym_matrices())
def test_matches_lapack_and_trace(a):
    vals = symmetric_eigenvalues(a).values
    ref = np.linalg.eigvalsh(a)
    scale = max(1.0, float(np.linalg.norm(a)))
    assert np.all(np.abs(vals - ref) <= 1e-10 * scale)
    assert math.isclose(vals.sum(), np.trace(a), abs_tol=1e-10 * scale * len(a))
    assert np.all(np.diff(vals) >= 0)


@settings(max_examples=100, deadline=None)
@given(sym_matrices(8), st.floats(-5, 5))
def test_shift_equivariance(a, c):
    n = a.shape[0]
    base = symmetric_eigenvalues(a).values
    shifted = symmetric_eigenvalues(a + c * np.eye(n)).values
    scale = max(1.0, float(np.linalg.norm(a)), abs(c))
    assert np.allclose(shifted, base + c, atol=1e-10 * scale)


def test_sym_matrix_from_upper_and_validation():
    s = SymMatrix.from_upper([1.0, 2.0, 3.0], 2)
    assert np.array_equal(s.values, [[1.0, 2.0], [2.0, 3.0]])
    assert np.array_equal(s.upper(), [1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        SymMatrix(np.zeros((2, 3)))
    with pytest.raises(ValueError):
        SymMatrix(np.array([[np.nan]]))
    with pytest.raises(ValueError):
        s.values[0, 0] = 5.0


def test_data_matrix_bound():
    DataMatrix(np.ones((2, 2)), bounded=True)
    with pytest.raises(BoundViolation):
        DataMatrix(np.array([[1.5]]), bounded=True)
    DataMatrix(np.array([[1.5]]), bounded=False)


# -- spectral measure -----------------------------------------------------------


def test_cdf_examples():
    assert spectral_cdf(Spectrum([0.0, 1.0]), 0.0) == 0.5
    assert spectral_cdf(Spectrum([0.0, 1.0]), 1.0) == 1.0
    assert spectral_cdf(Spectrum([-3.0, 3.0]), 0.0) == 0.5


def test_functional_examples():
    assert spectral_functional(Spectrum([1.0, 1.0, 1.0]), builtin("identity")) == 1.0
    assert spectral_functional(Spectrum([0.0, 1.0]), make_indicator(0.5)) == 0.5
    assert spectral_functional(Spectrum([0.0, 0.0, 1.0, 1.0]), make_sqrt_abs()) == 0.5


def test_functional_domain_violation():
    g = make_custom(np.sqrt, (0.0, math.inf), name="sqrt", lip_sq=1.0, convex_sq=True)
    with pytest.raises(DomainViolation):
        spectral_functional(Spectrum([0.0, 1.0]), g)
    assert spectral_functional(Spectrum([1.0, 4.0]), g) == 1.5


def test_kolmogorov_examples():
    assert kolmogorov_distance(Spectrum([1.0, 2.0]), Spectrum([1.0, 2.0])) == 0.0
    assert kolmogorov_distance(Spectrum([1.0, 0, 0, 0]), Spectrum([0.0] * 4)) == 0.25
    assert kolmogorov_distance(Spectrum([0.0, 1.0]), Spectrum([0.0, 0.0])) == 0.5
    with pytest.raises(DimensionMismatch):
        kolmogorov_distance(Spectrum([0.0]), Spectrum([0.0, 1.0]))


def _brute_count(a, b):
    pts = np.concatenate([a, b])
    probe = np.concatenate([pts, pts - 1e-300, np.nextafter(pts, -np.inf)])
    return max(abs(int(np.sum(a <= x)) - int(np.sum(b <= x))) for x in probe)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 10).flatmap(lambda n: st.tuples(
    st.lists(st.integers(-3, 3), min_size=n, max_size=n),
    st.lists(st.integers(-3, 3), min_size=n, max_size=n),
)))
def test_kolmogorov_count_brute_force(pair):
    a = np.sort(np.array(pair[0], dtype=float))
    b = np.sort(np.array(pair[1], dtype=float))
    exact = kolmogorov_count(a, b)
    assert exact == _brute_count(a, b)
    # a tolerance smaller than the lattice spacing changes nothing
    assert kolmogorov_count(a, b, 0.5) == exact
    # clusters split at rounding level are matched
    assert kolmogorov_count(a, np.sort(a + 1e-13 * np.arange(a.size)), 1e-9) == 0


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 10).flatmap(lambda n: st.tuples(
    arrays(np.float64, n, elements=finite), arrays(np.float64, n, elements=finite), st.floats(0, 10)
)))
def test_tolerant_count_never_exceeds_exact(t):
    a, b, tol = np.sort(t[0]), np.sort(t[1]), t[2]
    assert kolmogorov_count(a, b, tol) <= kolmogorov_count(a, b)


# -- Wishart, dilation, singular values -----------------------------------------


def test_wishart_examples():
    assert np.array_equal(wishart(np.eye(2)).values, np.diag([0.5, 0.5]))
    h = np.array([[1.0, 1.0], [1.0, -1.0]])
    assert np.array_equal(wishart(h).values, np.eye(2))
    assert np.array_equal(wishart(np.array([[1.0, 1.0]])).values, np.ones((2, 2)))


def test_dilation_examples():
    c = 2.5
    d = dilation(np.array([[c]]))
    assert np.array_equal(d.values, [[0.0, c], [c, 0.0]])
    assert np.allclose(symmetric_eigenvalues(d).values, [-c, c])
    z = dilation(np.zeros((2, 2)))
    assert np.array_equal(symmetric_eigenvalues(z).values, np.zeros(4))
    vals = symmetric_eigenvalues(dilation(np.diag([3.0, 4.0]), m=1)).values
    assert np.allclose(vals, [-4.0, -3.0, 3.0, 4.0], atol=1e-13)


def test_singular_value_examples():
    assert np.allclose(singular_values(np.eye(2)).values, [1 / math.sqrt(2)] * 2)
    assert np.allclose(singular_values(np.diag([3.0, 4.0]), m=1).values, [3.0, 4.0])
    h = np.array([[1, 1, 1, 1], [1, -1, 1, -1], [1, 1, -1, -1], [1, -1, -1, 1]], dtype=float)
    assert np.allclose(singular_values(h).values, [1.0] * 4)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 7), st.integers(1, 7), st.integers(0, 2**32 - 1))
def test_dilation_spectrum_is_signed_singular_values(m, n, seed):
    x = np.random.default_rng(seed).uniform(-1, 1, (m, n))
    vals = symmetric_eigenvalues(dilation(x)).values
    sv = np.linalg.svd(x / math.sqrt(m), compute_uv=False)
    expected = np.sort(np.concatenate([sv, -sv, np.zeros(abs(m - n))]))
    assert np.allclose(vals, expected, atol=1e-12)
    ours = singular_values(x).values
    ref = np.sort(np.concatenate([sv, np.zeros(max(0, n - m))]))
    assert np.allclose(ours, ref, atol=1e-7)


def test_operator_norm_examples():
    assert math.isclose(operator_norm(np.eye(5)), 1.0, rel_tol=1e-12)
    assert math.isclose(operator_norm(np.array([[0.0, 2.0], [0.0, 0.0]])), 2.0, rel_tol=1e-12)
    assert operator_norm(np.zeros((3, 3))) == 0.0
    b = 0.3 * np.eye(64, k=-1)
    assert math.isclose(operator_norm(b), 0.3, rel_tol=1e-9)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 10), st.integers(0, 2**32 - 1))
def test_operator_norm_vs_svd(n, seed):
    a = np.random.default_rng(seed).standard_normal((n, n))
    assert math.isclose(operator_norm(a), np.linalg.norm(a, 2), rel_tol=1e-6)


def test_operator_norm_deterministic():
    a = np.random.default_rng(9).standard_normal((6, 6))
    assert operator_norm(a) == operator_norm(a)


def test_batch_and_csv_round_trip(tmp_path):
    rng = np.random.default_rng(4)
    x = rng.standard_normal((3, 4))
    write_matrix_csv(tmp_path / "x.csv", x)
    assert np.array_equal(read_matrix_csv(tmp_path / "x.csv"), x)
    s = Spectrum([-1.0, 0.0, 2.5])
    write_spectrum(tmp_path / "s.txt", s)
    assert (tmp_path / "s.txt").read_text() == "-1\n0\n2.5\n"
    assert np.array_equal(read_spectrum(tmp_path / "s.txt").values, s.values)
    g = rng.standard_normal((5, 6, 6))
    stack = g + np.swapaxes(g, 1, 2)
    assert np.allclose(eigvalsh_batch(stack), np.linalg.eigvalsh(stack), atol=1e-12)


def test_format_float():
    assert format_float(1.0) == "1"
    assert format_float(-0.0) == "0"
    assert format_float(0.1) == "0.1"
    assert format_float(2.0 * math.exp(-2.0)) == "0.2706705664732254"
