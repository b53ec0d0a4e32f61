"""Spectral calculus on the half-period grid t_k = k*pi/N.

A ``PeriodicFn`` stores N real samples on [0, pi) together with a parity
flag.  Parity "periodic" means f(t+pi) = f(t), expanded in even modes
e^{2ikt}; parity "antiperiodic" means f(t+pi) = -f(t), expanded in odd
modes e^{i(2k+1)t} on the same grid (handled by demodulating the samples
with e^{-it}).  All operations act on the trigonometric interpolant and
are exact for band-limited data up to roundoff.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import Resonant

__all__ = [
    "PeriodicFn",
    "grid",
    "from_callable",
    "constant",
    "differentiate",
    "integrate_period",
    "evaluate",
    "upsample",
    "shift",
    "solve_linear_periodic",
    "random_band_limited",
]

MIN_SAMPLES = 16

_PARITIES = ("periodic", "antiperiodic")


def grid(n: int) -> np.ndarray:
    """Sample points t_k = k*pi/n, k = 0..n-1."""
    return np.arange(n) * (np.pi / n)


@dataclass(frozen=True)
class PeriodicFn:
    """Real function on [0, pi) represented by uniform samples and a parity."""

    samples: np.ndarray
    parity: str = "periodic"

    def __post_init__(self):
        arr = np.asarray(self.samples, dtype=float)
        if arr.ndim != 1:
            raise ValueError("samples must be a one-dimensional array")
        n = arr.shape[0]
        if n < MIN_SAMPLES or n % 2:
            raise ValueError(f"need an even sample count >= {MIN_SAMPLES}, got {n}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("samples must be finite")
        if self.parity not in _PARITIES:
            raise ValueError(f"unknown parity {self.parity!r}")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "samples", arr)

    @property
    def n(self) -> int:
        return self.samples.shape[0]

    @property
    def grid(self) -> np.ndarray:
        return grid(self.n)

    def __call__(self, t):
        return evaluate(self, t)

    # pointwise algebra; products multiply samples (collocation), parity
    # composes as even/odd: anti * anti = periodic, anti * periodic = anti
    def _binary(self, other, op):
        if isinstance(other, PeriodicFn):
            if other.n != self.n:
                raise ValueError("sample counts differ")
            return op(self.samples, other.samples), other.parity
        if np.isscalar(other):
            return op(self.samples, float(other)), None
        return NotImplemented, None

    def __add__(self, other):
        vals, parity = self._binary(other, np.add)
        if vals is NotImplemented:
            return NotImplemented
        if parity is None:
            # adding a constant only preserves parity in the periodic case
            if self.parity != "periodic" and float(other) != 0.0:
                raise ValueError("cannot add a nonzero constant to an antiperiodic function")
            return PeriodicFn(vals, self.parity)
        if parity != self.parity:
            raise ValueError("cannot add functions of different parity")
        return PeriodicFn(vals, self.parity)

    def __radd__(self, other):
        return self.__add__(other)

    def __sub__(self, other):
        if isinstance(other, PeriodicFn) or np.isscalar(other):
            return self.__add__(-other if np.isscalar(other) else -1.0 * other)
        return NotImplemented

    def __rsub__(self, other):
        return (-1.0 * self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, PeriodicFn):
            if other.n != self.n:
                raise ValueError("sample counts differ")
            parity = "periodic" if self.parity == other.parity else "antiperiodic"
            return PeriodicFn(self.samples * other.samples, parity)
        if np.isscalar(other):
            return PeriodicFn(self.samples * float(other), self.parity)
        return NotImplemented

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        if isinstance(other, PeriodicFn):
            if other.parity != "periodic":
                # 1/f of an antiperiodic f always has poles (f must vanish)
                raise ValueError("can only divide by a periodic function")
            if other.n != self.n:
                raise ValueError("sample counts differ")
            return PeriodicFn(self.samples / other.samples, self.parity)
        if np.isscalar(other):
            return PeriodicFn(self.samples / float(other), self.parity)
        return NotImplemented

    def __neg__(self):
        return PeriodicFn(-self.samples, self.parity)


def from_callable(fn, n: int, parity: str = "periodic") -> PeriodicFn:
    """Sample a callable on the n-point grid."""
    return PeriodicFn(np.asarray(fn(grid(n)), dtype=float), parity)


def constant(value: float, n: int) -> PeriodicFn:
    return PeriodicFn(np.full(n, float(value)), "periodic")


def _freq(n: int, parity: str) -> np.ndarray:
    """Integer mode frequencies in FFT order."""
    m = np.fft.fftfreq(n, d=1.0 / n).astype(int)
    return 2 * m if parity == "periodic" else 2 * m + 1


def spectrum(f: PeriodicFn) -> np.ndarray:
    """Complex mode coefficients c_m in FFT order, f(t) = sum c_m e^{i nu_m t}."""
    if f.parity == "periodic":
        return np.fft.fft(f.samples) / f.n
    return np.fft.fft(f.samples * np.exp(-1j * f.grid)) / f.n


def _synthesize(coeffs: np.ndarray, parity: str) -> np.ndarray:
    n = coeffs.shape[0]
    vals = np.fft.ifft(coeffs * n)
    if parity == "antiperiodic":
        vals = vals * np.exp(1j * grid(n))
    return vals.real


def differentiate(f: PeriodicFn, order: int = 1) -> PeriodicFn:
    """Spectral derivative of the interpolant; order 1, 2 or 3."""
    if order not in (1, 2, 3):
        raise ValueError("derivative order must be 1, 2 or 3")
    c = spectrum(f)
    nu = _freq(f.n, f.parity)
    mult = (1j * nu) ** order
    if f.parity == "periodic" and order % 2:
        # the unpaired Nyquist mode represents cos(n t); its odd derivatives
        # vanish on the grid
        mult[f.n // 2] = 0.0
    return PeriodicFn(_synthesize(c * mult, f.parity), f.parity)


def integrate_period(f: PeriodicFn) -> float:
    """Integral of the interpolant over [0, pi); exact for the stored modes."""
    if f.parity == "periodic":
        return float(f.samples.mean() * np.pi)
    c = spectrum(f)
    nu = _freq(f.n, f.parity)
    # int_0^pi e^{i nu t} dt = 2i/nu for odd nu
    return float(np.sum(c * (2j / nu)).real)


def evaluate(f: PeriodicFn, t):
    """Trigonometric interpolation at arbitrary points."""
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    c = spectrum(f)
    nu = _freq(f.n, f.parity)
    phases = np.exp(1j * np.outer(t_arr, nu))
    if f.parity == "periodic":
        # real-signal convention: the Nyquist coefficient stands for cos(n t)
        phases[:, f.n // 2] = np.cos(f.n * t_arr)
    vals = (phases @ c).real
    return vals[0] if np.isscalar(t) or np.asarray(t).ndim == 0 else vals


def upsample(f: PeriodicFn, m: int) -> PeriodicFn:
    """Exact resampling onto an m-point grid, m even and >= n."""
    n = f.n
    if m == n:
        return f
    if m < n or m % 2:
        raise ValueError("target sample count must be even and >= current")
    c = spectrum(f)
    padded = np.zeros(m, dtype=complex)
    padded[: n // 2] = c[: n // 2]
    padded[m - n // 2 + 1 :] = c[n // 2 + 1 :]
    if f.parity == "periodic":
        # split the self-conjugate Nyquist coefficient symmetrically
        padded[n // 2] = 0.5 * c[n // 2]
        padded[m - n // 2] = 0.5 * c[n // 2]
    else:
        # lowest odd mode, frequency 1 - n; no conjugate pairing issue
        padded[m - n // 2] = c[n // 2]
    return PeriodicFn(_synthesize(padded, f.parity), f.parity)


def values_with_wrap(f: PeriodicFn, m: int) -> np.ndarray:
    """m+1 values on [0, pi] inclusive; the endpoint uses the parity wrap."""
    vals = upsample(f, m).samples
    endpoint = vals[0] if f.parity == "periodic" else -vals[0]
    return np.concatenate([vals, [endpoint]])


def shift(f: PeriodicFn, s: float) -> PeriodicFn:
    """Samples of f(t + s) on the same grid."""
    c = spectrum(f) * np.exp(1j * _freq(f.n, f.parity) * s)
    return PeriodicFn(_synthesize(c, f.parity), f.parity)


_DIFF_MATRIX_CACHE: dict[int, np.ndarray] = {}


def _diff_matrix(n: int) -> np.ndarray:
    d = _DIFF_MATRIX_CACHE.get(n)
    if d is None:
        mult = 1j * _freq(n, "periodic").astype(float)
        mult[n // 2] = 0.0
        d = np.fft.ifft(mult[:, None] * np.fft.fft(np.eye(n), axis=0), axis=0).real
        _DIFF_MATRIX_CACHE[n] = d
    return d


def solve_linear_periodic(kappa: PeriodicFn, rhs: PeriodicFn, res_tol: float = 1e-8) -> PeriodicFn:
    """Solve g' - kappa*g = rhs for the unique periodic g.

    Uses spectral collocation: (D - diag(kappa)) g = rhs on the grid.
    Uniqueness requires the homogeneous monodromy multiplier
    exp(int_0^pi kappa dt) to stay away from 1; otherwise ``Resonant``.
    """
    if kappa.parity != "periodic" or rhs.parity != "periodic":
        raise ValueError("kappa and rhs must both be periodic")
    if kappa.n != rhs.n:
        raise ValueError("sample counts differ")
    multiplier = np.exp(integrate_period(kappa))
    if abs(multiplier - 1.0) <= res_tol * max(1.0, abs(multiplier)):
        raise Resonant(
            f"homogeneous multiplier {multiplier!r} within tolerance {res_tol!r} of 1"
        )
    n = kappa.n
    a = _diff_matrix(n) - np.diag(kappa.samples)
    g = np.linalg.solve(a, rhs.samples)
    return PeriodicFn(g, "periodic")


def random_band_limited(rng, n: int, max_mode: int = 6, parity: str = "periodic") -> PeriodicFn:
    """Random band-limited function, normalized to unit sup norm.

    For "periodic" the modes are sin/cos(2kt), k = 1..max_mode; for
    "antiperiodic" they are sin/cos((2k+1)t), k = 0..max_mode-1.
    Coefficients fall off like 1/k so the samples look like mild test data.
    """
    coeffs = [rng.normal(size=2) / k for k in range(1, max_mode + 1)]

    def synth(t):
        vals = np.zeros_like(t)
        for k, (a, b) in enumerate(coeffs, start=1):
            nu = 2 * k if parity == "periodic" else 2 * k - 1
            vals += a * np.cos(nu * t) + b * np.sin(nu * t)
        return vals

    # normalize on a fixed fine grid so the function does not depend on n
    peak = np.max(np.abs(synth(grid(2048))))
    return PeriodicFn(synth(grid(n)) / peak, parity)
