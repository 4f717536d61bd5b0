"""The numba and numpy kernel paths must agree exactly."""

import numpy as np

from spdcsim import _kernels
from spdcsim.elements import build_comb


def test_bessel_row_loops_match_selected_kernel():
    for x, n_max in [(0.3, 12), (1.2, 20), (7.7, 40), (20.0, 96), (50.0, 128)]:
        start = max(n_max, int(np.ceil(x))) + 36
        plain = _kernels._bessel_row_loops(x, n_max, start)
        selected = _kernels.bessel_row_kernel(x, n_max, start)
        assert np.array_equal(plain, selected)


def _random_case(seed, n=128, m_ratio=3):
    rng = np.random.default_rng(seed)
    c1 = build_comb(1.0, rng.uniform(0.2, 2.0))
    c2 = build_comb(1.0, rng.uniform(0.2, 2.0))
    field = rng.normal(size=n) + 1j * rng.normal(size=n)
    return c1, c2, field, m_ratio


def test_inter_accumulators_agree():
    for seed in (0, 1, 2):
        c1, c2, field, m_ratio = _random_case(seed)
        a = np.zeros((128, 128), dtype=complex)
        b = np.zeros((128, 128), dtype=complex)
        _kernels._accumulate_inter_loops(
            a, field, c1.orders, c1.weights, c2.orders, c2.weights, m_ratio
        )
        _kernels._accumulate_inter_numpy(
            b, field, c1.orders, c1.weights, c2.orders, c2.weights, m_ratio
        )
        assert np.allclose(a, b, rtol=1e-15, atol=1e-300)


def test_intra_accumulators_agree():
    for seed in (3, 4, 5):
        c1, c2, field, m_ratio = _random_case(seed)
        real_field = np.abs(field)
        a = np.zeros((128, 128))
        b = np.zeros((128, 128))
        _kernels._accumulate_intra_loops(
            a, real_field, c1.orders, c1.weights, c2.orders, c2.weights, m_ratio
        )
        _kernels._accumulate_intra_numpy(
            b, real_field, c1.orders, c1.weights, c2.orders, c2.weights, m_ratio
        )
        assert np.allclose(a, b, rtol=1e-15, atol=1e-300)


def test_kernel_selection_flag_is_consistent():
    # the selected callables exist and run whichever path the env picked
    row = _kernels.bessel_row_kernel(1.0, 4, 40)
    assert row.shape == (5,)
    assert np.isfinite(row).all()
    assert isinstance(_kernels.USING_NUMBA, bool)
