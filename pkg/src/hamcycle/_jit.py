"""Shared numba settings for the search kernels."""

from __future__ import annotations

from numba import njit

# The kernels never allocate. Compiling them without the numba runtime skips
# the atomic reference counting otherwise paid on every array of every bundle
# passed between kernels, which roughly halves the cost of a recursion.
kernel = njit(cache=True, _nrt=False)
