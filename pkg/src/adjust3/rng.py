"""Deterministic, counter-based source of standard normal deviates.

Deviate ``k`` of stream ``s`` is a pure function of ``(s, k)``: the k-th
output of a splitmix64 sequence seeded at ``s`` (Steele, Lea & Flood 2014),
mapped to (0, 1), then pushed through Wichura's AS 241 rational
approximation of the inverse normal CDF (PPND16, ~16 significant digits).

Because there is no sequential generator state, any slice of a stream can
be produced independently, which is what makes parallel replication sweeps
deterministic. Within one backend the output is bit-reproducible; the
numba and numpy backends may disagree by 1 ulp in the tail branch (libm
vs SIMD log).
"""

from __future__ import annotations

import math

import numpy as np

from .backend import NUMBA, active_backend

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_INV53 = 2.0 ** -53

# AS 241 PPND16 coefficients (Wichura 1988, Applied Statistics 37).
_A = (
    3.3871328727963666080e0,
    1.3314166789178437745e2,
    1.9715909503065514427e3,
    1.3731693765509461125e4,
    4.5921953931549871457e4,
    6.7265770927008700853e4,
    3.3430575583588128105e4,
    2.5090809287301226727e3,
)
_B = (
    1.0,
    4.2313330701600911252e1,
    6.8718700749205790830e2,
    5.3941960214247511077e3,
    2.1213794301586595867e4,
    3.9307895800092710610e4,
    2.8729085735721942674e4,
    5.2264952788528545610e3,
)
_C = (
    1.42343711074968357734e0,
    4.63033784615654529590e0,
    5.76949722146069140550e0,
    3.64784832476320460504e0,
    1.27045825245236838258e0,
    2.41780725177450611770e-1,
    2.27238449892691845833e-2,
    7.74545014278341407640e-4,
)
_D = (
    1.0,
    2.05319162663775882187e0,
    1.67638483018380384940e0,
    6.89767334985100004550e-1,
    1.48103976427480074590e-1,
    1.51986665636164571966e-2,
    5.47593808499534494600e-4,
    1.05075007164441684324e-9,
)
_E = (
    6.65790464350110377720e0,
    5.46378491116411436990e0,
    1.78482653991729133580e0,
    2.96560571828504891230e-1,
    2.65321895265761230930e-2,
    1.24266094738807843860e-3,
    2.71155556874348757815e-5,
    2.01033439929228813265e-7,
)
_F = (
    1.0,
    5.99832206555887937690e-1,
    1.36929880922735805310e-1,
    1.48753612908506148525e-2,
    7.86869131145613259100e-4,
    1.84631831751005468180e-5,
    1.42151175831644588870e-7,
    2.04426310338993978564e-15,
)

_CENTRAL_Q = 0.425
_CENTRAL_R = 0.180625  # 0.425**2
_TAIL_SPLIT = 5.0


def mix64(value: int) -> int:
    """splitmix64 finalizer; a bijection on 64-bit integers."""
    z = value & _MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
    return z ^ (z >> 31)


def _poly(coeffs, r):
    """Evaluate sum(coeffs[i] * r**i) Horner-style, highest order first."""
    acc = coeffs[-1]
    for c in coeffs[-2::-1]:
        acc = acc * r + c
    return acc


def inverse_normal_cdf(u: float) -> float:
    """PPND16 for a scalar u in (0, 1)."""
    q = u - 0.5
    if abs(q) <= _CENTRAL_Q:
        r = _CENTRAL_R - q * q
        return q * _poly(_A, r) / _poly(_B, r)
    r = u if q < 0.0 else 1.0 - u
    r = math.sqrt(-math.log(r))
    if r <= _TAIL_SPLIT:
        r = r - 1.6
        z = _poly(_C, r) / _poly(_D, r)
    else:
        r = r - _TAIL_SPLIT
        z = _poly(_E, r) / _poly(_F, r)
    return -z if q < 0.0 else z


def _uniforms_np(seeds: np.ndarray, count: int) -> np.ndarray:
    """Open-interval (0,1) uniforms, shape seeds.shape + (count,)."""
    k = np.arange(1, count + 1, dtype=np.uint64)
    z = np.asarray(seeds, dtype=np.uint64)[..., None] + k * np.uint64(_GAMMA)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    z = z ^ (z >> np.uint64(31))
    return ((z >> np.uint64(11)).astype(np.float64) + 0.5) * _INV53


def _ppnd16_np(u: np.ndarray) -> np.ndarray:
    q = u - 0.5
    central = np.abs(q) <= _CENTRAL_Q
    r = _CENTRAL_R - q * q
    out = q * _poly(_A, r) / _poly(_B, r)

    # Tail branch; dummy value 0.25 keeps log() clean where `central` wins.
    rt = np.where(q < 0.0, u, 1.0 - u)
    rt = np.sqrt(-np.log(np.where(central, 0.25, rt)))
    near = rt <= _TAIL_SPLIT
    rn = rt - 1.6
    rf = rt - _TAIL_SPLIT
    zt = np.where(near, _poly(_C, rn) / _poly(_D, rn), _poly(_E, rf) / _poly(_F, rf))
    zt = np.where(q < 0.0, -zt, zt)
    return np.where(central, out, zt)


def _normals_np(seeds: np.ndarray, count: int) -> np.ndarray:
    return _ppnd16_np(_uniforms_np(seeds, count))


_numba_normals = None


def _build_numba():
    global _numba_normals
    if _numba_normals is not None:
        return _numba_normals
    import numba as nb

    a, b, c, d, e, f = _A, _B, _C, _D, _E, _F

    @nb.njit(nb.float64(nb.uint64, nb.uint64), cache=True, inline="always")
    def deviate(seed, k):
        z = seed + (k + nb.uint64(1)) * nb.uint64(_GAMMA)
        z = (z ^ (z >> nb.uint64(30))) * nb.uint64(_MIX1)
        z = (z ^ (z >> nb.uint64(27))) * nb.uint64(_MIX2)
        z = z ^ (z >> nb.uint64(31))
        u = (np.float64(z >> nb.uint64(11)) + 0.5) * _INV53
        q = u - 0.5
        if abs(q) <= _CENTRAL_Q:
            r = _CENTRAL_R - q * q
            num = ((((((a[7] * r + a[6]) * r + a[5]) * r + a[4]) * r + a[3]) * r + a[2]) * r + a[1]) * r + a[0]
            den = ((((((b[7] * r + b[6]) * r + b[5]) * r + b[4]) * r + b[3]) * r + b[2]) * r + b[1]) * r + b[0]
            return q * num / den
        r = u if q < 0.0 else 1.0 - u
        r = np.sqrt(-np.log(r))
        if r <= _TAIL_SPLIT:
            r = r - 1.6
            num = ((((((c[7] * r + c[6]) * r + c[5]) * r + c[4]) * r + c[3]) * r + c[2]) * r + c[1]) * r + c[0]
            den = ((((((d[7] * r + d[6]) * r + d[5]) * r + d[4]) * r + d[3]) * r + d[2]) * r + d[1]) * r + d[0]
        else:
            r = r - _TAIL_SPLIT
            num = ((((((e[7] * r + e[6]) * r + e[5]) * r + e[4]) * r + e[3]) * r + e[2]) * r + e[1]) * r + e[0]
            den = ((((((f[7] * r + f[6]) * r + f[5]) * r + f[4]) * r + f[3]) * r + f[2]) * r + f[1]) * r + f[0]
        z = num / den
        return -z if q < 0.0 else z

    @nb.njit(nb.float64[::1](nb.uint64, nb.int64), cache=True)
    def normals(seed, count):
        out = np.empty(count, dtype=np.float64)
        for k in range(count):
            out[k] = deviate(seed, nb.uint64(k))
        return out

    _numba_normals = (deviate, normals)
    return _numba_normals


def numba_deviate_fn():
    """The scalar njit deviate function, for use inside other njit kernels."""
    return _build_numba()[0]


def standard_normals(seed: int, count: int, backend: str | None = None) -> np.ndarray:
    """`count` standard normal deviates of stream `seed`, as float64."""
    if count < 0:
        raise ValueError("count must be nonnegative")
    if active_backend(backend) == NUMBA:
        return _build_numba()[1](np.uint64(seed & _MASK64), count)
    return _normals_np(np.uint64(seed & _MASK64), count).reshape(count)


def normals_matrix(seeds: np.ndarray, count: int) -> np.ndarray:
    """Vectorized (len(seeds), count) deviate block, numpy path only."""
    return _normals_np(np.asarray(seeds, dtype=np.uint64), count)
