"""Classical generalized hyperbolic distribution: parameters, characteristic
function, its continuous logarithm, and numerical moments.

The normal inverse Gaussian (NIG) subfamily (index -1/2) gets dedicated
closed-form routines: its log characteristic function is elementary and
the family is closed under convolution, which the exact samplers rely on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError
from .special import LogTrack, _eval_cf, bessel_k, distinguished_log, sqrt_right

MAX_INDEX = 25.0


@dataclass(frozen=True)
class GHParams:
    """Parameters (index, shape, skew, scale, location) of a GH law.

    Constraints: alpha > 0, |beta| < alpha, delta > 0, |lam| <= 25,
    all finite.  Violations raise :class:`DomainError` listing every
    failed constraint.
    """

    lam: float
    alpha: float
    beta: float
    delta: float
    mu: float

    def __post_init__(self):
        problems = []
        vals = (self.lam, self.alpha, self.beta, self.delta, self.mu)
        if not all(math.isfinite(v) for v in vals):
            problems.append("all parameters must be finite")
        else:
            if abs(self.lam) > MAX_INDEX:
                problems.append(f"|lam| <= {MAX_INDEX} required (boundary limits unsupported)")
            if self.alpha <= 0:
                problems.append("alpha > 0 required")
            if abs(self.beta) >= self.alpha:
                problems.append("|beta| < alpha required")
            if self.delta <= 0:
                problems.append("delta > 0 required")
        if problems:
            raise DomainError("invalid GH parameters: " + "; ".join(problems))

    @property
    def gamma(self):
        return math.sqrt(self.alpha**2 - self.beta**2)

    @property
    def is_nig(self):
        return self.lam == -0.5


@dataclass(frozen=True)
class CFEvaluation:
    """A characteristic-function value together with its distinguished log."""

    t: float
    value: complex
    log_value: complex


def _bessel_argument(params, t):
    """delta * sqrt(alpha^2 - (beta + i t)^2); re > 0 for |beta| < alpha."""
    t = np.asarray(t, dtype=float)
    return params.delta * sqrt_right(params.alpha**2 - (params.beta + 1j * t) ** 2)


def gh_cf(params, t):
    """GH characteristic function at real t (scalar or array)."""
    scalar = np.ndim(t) == 0
    t = np.atleast_1d(np.asarray(t, dtype=float))
    z = np.atleast_1d(_bessel_argument(params, t))
    z0 = params.delta * params.gamma
    k0 = bessel_k(params.lam, complex(z0))
    # z stays in the right half-plane, so principal log powers are safe
    val = (
        np.exp(1j * t * params.mu)
        * np.exp(params.lam * (np.log(z0) - np.log(z)))
        * np.asarray(bessel_k(params.lam, z))
        / k0
    )
    return complex(val[0]) if scalar else val


def nig_log_cf(params, t):
    """Closed-form distinguished log CF of an NIG law (lam = -1/2):
    i t mu + delta * (gamma - sqrt(alpha^2 - (beta + i t)^2))."""
    if not params.is_nig:
        raise DomainError("nig_log_cf: requires lam = -1/2")
    t = np.asarray(t, dtype=float)
    out = 1j * t * params.mu + params.delta * (
        params.gamma - sqrt_right(params.alpha**2 - (params.beta + 1j * t) ** 2)
    )
    return out if out.ndim else complex(out)


class GHLogTrack:
    """Distinguished log of a general-index GH CF, computed in log space.

    Writing log f = i t mu + lam*(log z0 - log z) + (z0 - z) + log h with
    h(t) = kve(lam, z(t)) / kve(lam, z0), only the slowly varying scaled
    Bessel ratio h needs branch tracking; every other term is elementary
    and continuous.  This stays evaluable far beyond the point where the
    CF itself underflows.
    """

    def __init__(self, params, track_h):
        self.params = params
        self._track_h = track_h
        self._z0 = params.delta * params.gamma

    @property
    def grid(self):
        return self._track_h.grid

    @property
    def t_max(self):
        return self._track_h.t_max

    def _assemble(self, t, log_h):
        p = self.params
        z = _bessel_argument(p, t)
        return (
            1j * np.asarray(t, dtype=float) * p.mu
            + p.lam * (np.log(self._z0) - np.log(z))
            + (self._z0 - z)
            + log_h
        )

    def log_at(self, t):
        t = float(t)
        if t < 0:
            return np.conj(self.log_at(-t))
        return complex(self._assemble(t, self._track_h.log_at(t)))

    def values(self, t):
        """Vectorized distinguished log; unwraps the scaled-Bessel phase
        over the union of the query points and the tracked grid."""
        t = np.asarray(t, dtype=float)
        at = np.abs(t.ravel())
        union = np.unique(np.concatenate([[0.0], at, self._track_h.grid]))
        hv = _eval_cf(self._track_h.cf, union)
        dphi = np.angle(hv[1:] / hv[:-1])
        if np.max(np.abs(dphi), initial=0.0) >= np.pi / 2:
            return np.array([self.log_at(x) for x in t.ravel()]).reshape(t.shape)
        phases = np.concatenate([[0.0], np.cumsum(dphi)])
        log_h_union = np.log(np.abs(hv)) + 1j * phases
        log_h = log_h_union[np.searchsorted(union, at)]
        out = self._assemble(at, log_h)
        out = np.where(t.ravel() < 0, np.conj(out), out)
        return out.reshape(t.shape)

    def cf_at(self, t):
        return np.exp(self.log_at(t))


def _scaled_bessel_ratio(params):
    from scipy.special import kve

    z0 = params.delta * params.gamma
    k0 = complex(kve(params.lam, complex(z0)))

    def h(t):
        return np.asarray(kve(params.lam, _bessel_argument(params, np.asarray(t))), dtype=complex) / k0

    return h


def gh_log_cf(params, t_max):
    """Distinguished logarithm of the GH CF on [0, t_max].

    NIG parameters short-circuit to the elementary closed form; the
    general index tracks the scaled Bessel ratio adaptively.
    """
    if params.is_nig:
        grid = np.linspace(0.0, t_max, 513)
        return LogTrack(lambda t: np.exp(nig_log_cf(params, t)), grid, nig_log_cf(params, grid))
    track_h = distinguished_log(_scaled_bessel_ratio(params), t_max)
    return GHLogTrack(params, track_h)


def cf_evaluation(params, t, track=None):
    """CF value plus distinguished log at a single t."""
    if track is None:
        track = gh_log_cf(params, max(abs(t), 1.0))
    log_value = track.log_at(t)
    return CFEvaluation(float(t), np.exp(log_value), log_value)


def nig_convolution_power(params, x):
    """Parameters of the x-fold convolution power of an NIG law
    (delta -> x delta, mu -> x mu); exact only for lam = -1/2."""
    if not params.is_nig:
        raise DomainError("nig_convolution_power: requires lam = -1/2")
    if x <= 0:
        raise DomainError("nig_convolution_power: power must be positive")
    return GHParams(params.lam, params.alpha, params.beta, x * params.delta, x * params.mu)


_STENCILS = {
    1: (np.array([-1.0, 1.0]) / 2.0, np.array([-1, 1])),
    2: (np.array([1.0, -2.0, 1.0]), np.array([-1, 0, 1])),
    3: (np.array([-0.5, 1.0, -1.0, 0.5]), np.array([-2, -1, 1, 2])),
    4: (np.array([1.0, -4.0, 6.0, -4.0, 1.0]), np.array([-2, -1, 0, 1, 2])),
}


def _derivative(cf, order, h):
    w, off = _STENCILS[order]
    return sum(c * cf(float(o * h)) for c, o in zip(w, off)) / h**order


def moments_from_cf(cf, max_order=4, base_step=None):
    """Raw moments m_1..m_max_order via Richardson-extrapolated central
    differences of the CF at the origin."""
    if not 1 <= max_order <= 4:
        raise DomainError("moments_from_cf: max_order must be in 1..4")
    moments = []
    for k in range(1, max_order + 1):
        h = base_step if base_step is not None else (1e-3 if k <= 2 else 2e-2)
        # three-level Richardson on the O(h^2) stencil error
        d = [_derivative(cf, k, h / 2**j) for j in range(3)]
        r1 = [(4 * d[j + 1] - d[j]) / 3 for j in range(2)]
        r2 = (16 * r1[1] - r1[0]) / 15
        mk = r2 / 1j**k
        scale = max(abs(mk), 1.0)
        if abs(r2 - r1[1]) > 1e-5 * scale:
            raise ConvergenceError(f"moments_from_cf: extrapolation unstable at order {k}")
        if abs(mk.imag) > 1e-5 * scale:
            raise ConvergenceError(f"moments_from_cf: non-real moment at order {k}")
        moments.append(float(mk.real))
    return moments
