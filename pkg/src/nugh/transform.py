"""The random-summation transform of characteristic functions:
g(t) = phi(-log f(t)) for a summation family with fixed-point function
phi and an infinitely divisible base CF f, specialized to GH bases, plus
the explicit geometric-GH and Chebyshev-GH closed forms and the
phi(a t^2) family of fixed-point CFs."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .families import NuFamily
from .gh import GHParams, gh_cf, gh_log_cf, moments_from_cf, nig_log_cf
from .special import LogTrack, distinguished_log, sqrt_right

_CHUNK = 64  # grid points added per track extension


class NuTransform:
    """g(t) = phi(-log f(t)) for an arbitrary non-vanishing base CF f.

    Maintains a lazily extended distinguished-log track of f; the track
    is rebuilt (never mutated) when a larger |t| is requested.
    """

    def __init__(self, family: NuFamily, base_cf, t_max=16.0):
        self.family = family
        self.base_cf = base_cf
        self._track = self._build(t_max)

    def _build(self, t_max):
        return distinguished_log(self.base_cf, t_max)

    def _ensure(self, t_abs):
        if t_abs > self._track.t_max:
            step = self._track.t_max / max(len(self._track.grid) - 1, 1)
            self._track = self._build(t_abs + _CHUNK * step)

    def log_base(self, t):
        t = np.asarray(t, dtype=float)
        self._ensure(float(np.max(np.abs(t))) if t.size else 0.0)
        return self._track.values(t)

    def __call__(self, t):
        scalar = np.ndim(t) == 0
        t = np.atleast_1d(np.asarray(t, dtype=float))
        w = -self.log_base(t)
        # |f| <= 1 keeps re(w) >= 0 up to rounding
        w = np.where(w.real < 0, w - w.real, w)
        g = np.asarray(self.family.phi(w))
        return complex(g[0]) if scalar else g


class NuGHChar(NuTransform):
    """Characteristic function of a nu-GH law: family + GH base parameters.

    NIG bases (index -1/2) use the elementary log CF and are fully
    vectorized; other indices go through Bessel evaluation with branch
    tracking.
    """

    def __init__(self, family: NuFamily, gh: GHParams, t_max=16.0):
        self.gh = gh
        super().__init__(family, lambda t: gh_cf(gh, t), t_max)

    def _build(self, t_max):
        return gh_log_cf(self.gh, t_max)

    def log_base(self, t):
        if self.gh.is_nig:
            return nig_log_cf(self.gh, np.asarray(t, dtype=float))
        return super().log_base(t)

    def mean(self):
        """Mean of the nu-GH law (equals the base GH mean)."""
        return moments_from_cf(self, 1)[0]


@dataclass(frozen=True)
class NuGaussianChar:
    """CF phi(a t^2) of the family's fixed-point (nu-strictly Gaussian) law."""

    family: NuFamily
    a: float

    def __post_init__(self):
        if not self.a > 0:
            raise DomainError("NuGaussianChar: a must be positive")

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.asarray(self.family.phi(self.a * t**2))
        return out if out.ndim else complex(out)


class _ClosedForm:
    """Shared plumbing for the explicit geo-GH / Chebyshev-GH formulas:
    a distinguished-log track of the Bessel-form GH CF, applied pointwise."""

    def __init__(self, gh: GHParams, t_max=16.0):
        self.gh = gh
        self._track = distinguished_log(lambda t: gh_cf(gh, t), t_max)

    def _log_f(self, t):
        t = np.asarray(t, dtype=float)
        top = float(np.max(np.abs(t))) if t.size else 0.0
        if top > self._track.t_max:
            self._track = distinguished_log(lambda u: gh_cf(self.gh, u), top * 1.25)
        return self._track.values(t)

    def __call__(self, t):
        scalar = np.ndim(t) == 0
        t = np.atleast_1d(np.asarray(t, dtype=float))
        g = self._formula(self._log_f(t))
        return complex(g[0]) if scalar else g


class GeoGHClosedForm(_ClosedForm):
    """g(t) = 1 / (1 - log f(t)) with the continuous branch of log f."""

    def _formula(self, log_f):
        return 1.0 / (1.0 - log_f)


class ChebGHClosedForm(_ClosedForm):
    """g(t) = 1 / cosh(sqrt(-2 log f(t))) with right-half-plane roots;
    equivalently sec(sqrt(2) * sqrt(log f)) resolved to keep |g| <= 1."""

    def _formula(self, log_f):
        from .families import _sech

        return np.asarray(_sech(sqrt_right(-2.0 * log_f)))


def geo_gh_closed_form(gh: GHParams, t):
    """Explicit geometric-GH CF at t (scalar or array)."""
    top = float(np.max(np.abs(np.atleast_1d(t)))) if np.size(t) else 1.0
    return GeoGHClosedForm(gh, max(top, 1.0))(t)


def cheb_gh_closed_form(gh: GHParams, t):
    """Explicit Chebyshev-GH CF at t (scalar or array)."""
    top = float(np.max(np.abs(np.atleast_1d(t)))) if np.size(t) else 1.0
    return ChebGHClosedForm(gh, max(top, 1.0))(t)


def example2_bessel_argument(gh: GHParams, t):
    """The rearranged Bessel argument delta * sqrt(alpha^2 + (t - i beta)^2);
    algebraically identical to the Example-1 arrangement."""
    t = np.asarray(t, dtype=float)
    return gh.delta * sqrt_right(gh.alpha**2 + (t - 1j * gh.beta) ** 2)
