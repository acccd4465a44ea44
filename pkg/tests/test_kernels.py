"""The numba kernels and the numpy fallback must agree exactly."""

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from roql._kernels import numba_impl as nb
from roql._kernels import numpy_impl as npk


@st.composite
def table_and_masks(draw, max_n=7):
    n = draw(st.integers(1, max_n))
    bits = np.array(draw(st.lists(st.integers(0, 1), min_size=1 << n, max_size=1 << n)), dtype=np.uint8)
    mask = draw(st.integers(0, (1 << n) - 1))
    vals = draw(st.integers(0, (1 << n) - 1)) & mask
    return n, bits, mask, vals


@given(table_and_masks())
def test_projection_kernels_agree(args):
    n, bits, mask, vals = args
    assert np.array_equal(nb.project(bits, n, mask, vals), npk.project(bits, n, mask, vals))
    assert nb.constant_value(bits, n, mask, vals) == npk.constant_value(bits, n, mask, vals)
    assert nb.parity(bits, n, mask, vals) == npk.parity(bits, n, mask, vals)
    assert nb.essential_mask(bits, n) == npk.essential_mask(bits, n)


@given(table_and_masks())
def test_hypercube_kernels_agree(args):
    n, bits, star_mask, _ = args
    assert nb.first_hypercube_base(bits, n, star_mask) == npk.first_hypercube_base(bits, n, star_mask)
    assert np.array_equal(nb.all_hypercube_bases(bits, n, star_mask), npk.all_hypercube_bases(bits, n, star_mask))
    assert nb.discriminatory_subset(bits, n, star_mask) == npk.discriminatory_subset(bits, n, star_mask)


@given(
    st.lists(st.integers(0, 2**64 - 1), min_size=1, max_size=40),
    st.lists(st.tuples(st.integers(0, 63), st.integers(0, 1)), max_size=10),
)
def test_consistency_kernels_agree(tables, pairs):
    t = np.array(tables, dtype=np.uint64)
    idx = np.array([p for p, _ in pairs], dtype=np.uint64)
    vals = np.array([b for _, b in pairs], dtype=np.uint8)
    assert np.array_equal(nb.consistent(t, idx, vals), npk.consistent(t, idx, vals))


def test_backend_flag_selects_numpy(tmp_path):
    import os
    import subprocess
    import sys

    env = dict(os.environ, ROQL_DISABLE_NUMBA="1")
    out = subprocess.run(
        [sys.executable, "-c", "from roql import _kernels; print(_kernels.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "numpy"
    env["ROQL_DISABLE_NUMBA"] = "0"
    out = subprocess.run(
        [sys.executable, "-c", "from roql import _kernels; print(_kernels.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "numba"
