"""Hot per-chunk moment kernels with a compiled and a pure-numpy backend.

Both backends consume the same generator stream in the same order: for
each symbol, n per-sample draws (modulation noise, then channel noise
when sigma_w > 0, interleaved per sample).  Each symbol's deviation
stream d = sigma*z (+ sigma_w*w) is reduced to its block mean and 1/N
variance via var = sum(d^2)/N - (sum(d)/N)^2, exact algebra for the 1/N
two-pass variance and cancellation-free because d is zero-centered.

The compiled backend draws inside the jit kernel (numba reproduces the
numpy Generator streams bit for bit), so no sample array is ever
materialized; the numpy backend materializes the identical draws and
reduces them with array ops.  Set NOISEMOD_NO_NUMBA=1 (before import)
to force the numpy path; it is also used when numba is not installed.
"""

import os

import numpy as np

__all__ = ["BACKEND", "compute_moments", "moments_numpy", "moments_numba"]


def _numba_disabled() -> bool:
    return os.environ.get("NOISEMOD_NO_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}


def moments_numpy(gen, sigmas, n, sigma_w):
    """Block mean deviation and 1/N variance for one chunk of symbols."""
    n_sym = sigmas.size
    if sigma_w > 0.0:
        draws = gen.standard_normal((n_sym, n, 2))
        d = sigmas[:, None] * draws[:, :, 0]
        d += sigma_w * draws[:, :, 1]
    else:
        d = sigmas[:, None] * gen.standard_normal((n_sym, n))
    mu = d.sum(axis=1) / n
    ex2 = np.einsum("ij,ij->i", d, d) / n
    return mu, ex2 - mu * mu


moments_numba = None
_njit = None
if not _numba_disabled():
    try:
        from numba import njit as _njit
    except ImportError:
        _njit = None

if _njit is not None:

    @_njit(cache=True, nogil=True)
    def _fused_moments(gen, sigmas, n):
        n_sym = sigmas.size
        mu = np.empty(n_sym)
        var = np.empty(n_sym)
        for i in range(n_sym):
            s = sigmas[i]
            acc = 0.0
            acc2 = 0.0
            for _ in range(n):
                d = s * gen.standard_normal()
                acc += d
                acc2 += d * d
            m = acc / n
            mu[i] = m
            var[i] = acc2 / n - m * m
        return mu, var

    @_njit(cache=True, nogil=True)
    def _fused_moments_noise(gen, sigmas, n, sigma_w):
        n_sym = sigmas.size
        mu = np.empty(n_sym)
        var = np.empty(n_sym)
        for i in range(n_sym):
            s = sigmas[i]
            acc = 0.0
            acc2 = 0.0
            for _ in range(n):
                d = s * gen.standard_normal() + sigma_w * gen.standard_normal()
                acc += d
                acc2 += d * d
            m = acc / n
            mu[i] = m
            var[i] = acc2 / n - m * m
        return mu, var

    def moments_numba(gen, sigmas, n, sigma_w):
        """Compiled counterpart of moments_numpy (identical contract)."""
        if sigma_w > 0.0:
            return _fused_moments_noise(gen, sigmas, n, sigma_w)
        return _fused_moments(gen, sigmas, n)


if moments_numba is not None:
    BACKEND = "numba"
    compute_moments = moments_numba
else:
    BACKEND = "numpy"
    compute_moments = moments_numpy
