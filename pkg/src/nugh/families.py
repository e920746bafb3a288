"""The two random-summation families: geometric and Chebyshev.

Each family bundles its admissible parameter set, probability generating
function, normalized fixed-point function phi (the Laplace transform of
its mixing law), and samplers for the counting variable and the mixing
law.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import erfc

import numpy as np
from numpy.polynomial import chebyshev as npcheb

from .errors import ConvergenceError, DomainError, RangeError
from .special import chebyshev_t, sqrt_right

CHEBYSHEV_MAX_N = 64


def _sech(s):
    """1 / cosh(s) without overflow for large re(s); complex-safe."""
    s = np.asarray(s, dtype=complex)
    s = np.where(s.real < 0, -s, s)  # cosh is even
    e = np.exp(-s)
    out = 2.0 * e / (1.0 + e * e)
    return out if out.ndim else complex(out)


class NuFamily:
    """Common interface of the two summation families."""

    kind = None

    def contains_p(self, p):
        raise NotImplementedError

    def require_p(self, p):
        if not self.contains_p(p):
            raise DomainError(f"{self.kind}: p={p} outside the admissible set {self.delta_set}")

    def pgf(self, p, z):
        raise NotImplementedError

    def phi(self, w):
        """Fixed-point function at complex w with re(w) >= 0."""
        raise NotImplementedError

    def nu_probabilities(self, p, cutoff, tail_tol=1e-12):
        raise NotImplementedError

    def sample_nu(self, p, size, rng):
        raise NotImplementedError

    def sample_mixing(self, size, rng):
        raise NotImplementedError

    def _check_phi_arg(self, w):
        w = np.asarray(w, dtype=complex)
        if np.any(w.real < -1e-12):
            raise DomainError(f"{self.kind}: phi requires re(argument) >= 0")
        return w

    def _check_pgf_arg(self, p, z):
        self.require_p(p)
        z = np.asarray(z, dtype=complex)
        if np.any(np.abs(z) > 1 + 1e-9):
            raise DomainError(f"{self.kind}: pgf requires |z| <= 1")
        return z


class GeometricFamily(NuFamily):
    """Counting variable geometric on {1, 2, ...} with success probability p;
    phi(w) = 1/(1+w); mixing law standard exponential."""

    kind = "geometric"
    delta_set = "p in (0, 1)"

    def contains_p(self, p):
        return 0.0 < p < 1.0

    def pgf(self, p, z):
        z = self._check_pgf_arg(p, z)
        out = p * z / (1.0 - (1.0 - p) * z)
        return out if out.ndim else complex(out)

    def phi(self, w):
        w = self._check_phi_arg(w)
        out = 1.0 / (1.0 + w)
        return out if out.ndim else complex(out)

    def nu_probabilities(self, p, cutoff, tail_tol=1e-12):
        self.require_p(p)
        k = np.arange(1, cutoff + 1)
        probs = p * (1.0 - p) ** (k - 1)
        if 1.0 - probs.sum() > tail_tol:
            raise RangeError(f"geometric: cutoff {cutoff} leaves tail mass > {tail_tol}")
        return list(zip(k.tolist(), probs.tolist()))

    def sample_nu(self, p, size, rng):
        self.require_p(p)
        return rng.geometric(p, size=size)

    def sample_mixing(self, size, rng):
        return rng.exponential(1.0, size=size)


# Brownian exit-time sampler constants: small-t / large-t series switch.
_T_SPLIT = 0.64


def _exit_time_density(t):
    """Density of the exit time of standard Brownian motion from (-1, 1),
    whose Laplace transform is 1/cosh(sqrt(2*lambda)).

    Uses the small-t theta series below _T_SPLIT and the large-t series
    above it; both are alternating with decreasing terms there.
    """
    t = np.asarray(t, dtype=float)
    out = np.empty_like(t)
    small = t < _T_SPLIT
    ts = t[small]
    if ts.size:
        k = np.arange(0, 30)[:, None]
        terms = (2 * k + 1) * np.exp(-((2 * k + 1) ** 2) / (2.0 * ts))
        alt = ((-1.0) ** k) * terms
        s = alt.sum(axis=0)
        if np.any(terms[-1] > 1e-13 * np.maximum(s, 1e-300)):
            raise ConvergenceError("exit-time density: small-t series truncation not certified")
        out[small] = np.sqrt(2.0 / (np.pi * ts**3)) * s
    tl = t[~small]
    if tl.size:
        k = np.arange(0, 30)[:, None]
        terms = (2 * k + 1) * np.exp(-((2 * k + 1) ** 2) * np.pi**2 * tl / 8.0)
        alt = ((-1.0) ** k) * terms
        s = alt.sum(axis=0)
        if np.any(terms[-1] > 1e-13 * np.maximum(s, 1e-300)):
            raise ConvergenceError("exit-time density: large-t series truncation not certified")
        out[~small] = (np.pi / 2.0) * s
    return out


class ChebyshevFamily(NuFamily):
    """Family with p.g.f. 1/T_n(1/z) at p = 1/n^2; phi(w) = 1/cosh(sqrt(2w));
    mixing law the Brownian exit time from (-1, 1)."""

    kind = "chebyshev"
    delta_set = f"p = 1/n^2, n = 1..{CHEBYSHEV_MAX_N}"

    @staticmethod
    def order_of(p):
        if not 0 < p <= 1:
            return None
        n = int(round(1.0 / np.sqrt(p)))
        if n < 1 or n > CHEBYSHEV_MAX_N or abs(p - 1.0 / n**2) > 1e-12:
            return None
        return n

    def contains_p(self, p):
        return self.order_of(p) is not None

    def pgf(self, p, z):
        z = self._check_pgf_arg(p, z)
        n = self.order_of(p)
        if np.any(z == 0):
            raise DomainError("chebyshev: pgf undefined at z = 0")
        out = 1.0 / chebyshev_t(n, 1.0 / z)
        out = np.asarray(out)
        return out if out.ndim else complex(out)

    def phi(self, w):
        w = self._check_phi_arg(w)
        out = np.asarray(_sech(sqrt_right(2.0 * w)))
        return out if out.ndim else complex(out)

    def nu_probabilities(self, p, cutoff, tail_tol=1e-12):
        """Power-series coefficients of z^n / (z^n T_n(1/z)) up to cutoff."""
        self.require_p(p)
        n = self.order_of(p)
        # q[m] = coefficient of z^m in z^n T_n(1/z)  (reversed T_n)
        e = np.zeros(n + 1)
        e[n] = 1.0
        q = npcheb.cheb2poly(e)[::-1]
        # reciprocal power series b of q, so that pgf = z^n * sum b_k z^k
        K = max(cutoff - n, 0) + 1
        b = np.zeros(K)
        b[0] = 1.0 / q[0]
        for k in range(1, K):
            m = min(k, n)
            b[k] = -np.dot(q[1 : m + 1], b[k - 1 :: -1][:m]) / q[0]
        ks = np.arange(n, n + K)
        keep = ks <= cutoff
        ks, probs = ks[keep], b[keep]
        if np.any(probs < -1e-13):
            raise ConvergenceError("chebyshev: negative series coefficient (unstable division)")
        probs = np.maximum(probs, 0.0)
        if 1.0 - probs.sum() > tail_tol:
            raise RangeError(f"chebyshev: cutoff {cutoff} leaves tail mass > {tail_tol}")
        return [(int(k), float(pr)) for k, pr in zip(ks, probs) if pr > 0 or k == n]

    def sample_nu(self, p, size, rng):
        self.require_p(p)
        n = self.order_of(p)
        if n == 1:
            return np.ones(size, dtype=np.int64)
        # tabulated inverse cdf; decay rate of coefficients sets the cutoff
        rate = -np.log(np.cos(np.pi / (2 * n)))
        cutoff = int(n + 2 * (40 / rate + 10 * n))
        pairs = self.nu_probabilities(p, cutoff)
        ks = np.array([k for k, _ in pairs])
        cum = np.cumsum([pr for _, pr in pairs])
        u = rng.random(size) * cum[-1]
        return ks[np.searchsorted(cum, u)]

    def sample_mixing(self, size, rng):
        """Rejection sampler for the Brownian exit-time law via its
        alternating-series density."""
        w_small = 2.0 * erfc(1.0 / np.sqrt(2 * _T_SPLIT))
        w_large = (4.0 / np.pi) * np.exp(-np.pi**2 * _T_SPLIT / 8.0)
        out = np.empty(size)
        filled = 0
        while filled < size:
            m = max(2 * (size - filled), 64)
            pick_small = rng.random(m) < w_small / (w_small + w_large)
            cand = np.empty(m)
            ns = int(pick_small.sum())
            if ns:
                # restricted Levy proposal: T = 1/Z^2 conditioned on T < split
                got = 0
                buf = np.empty(ns)
                while got < ns:
                    z = rng.standard_normal(2 * (ns - got) + 16)
                    tt = 1.0 / z**2
                    tt = tt[tt < _T_SPLIT][: ns - got]
                    buf[got : got + tt.size] = tt
                    got += tt.size
                cand[pick_small] = buf
            nl = m - ns
            if nl:
                cand[~pick_small] = _T_SPLIT + rng.exponential(8.0 / np.pi**2, size=nl)
            env = np.where(
                pick_small,
                2.0 / np.sqrt(2 * np.pi * cand**3) * np.exp(-1.0 / (2 * cand)),
                (np.pi / 2.0) * np.exp(-np.pi**2 * cand / 8.0),
            )
            dens = _exit_time_density(cand)
            if np.any(dens > env * (1 + 1e-9)):
                raise ConvergenceError("exit-time sampler: envelope violated")
            acc = rng.random(m) * env < dens
            take = cand[acc][: size - filled]
            out[filled : filled + take.size] = take
            filled += take.size
        return out


GEOMETRIC = GeometricFamily()
CHEBYSHEV = ChebyshevFamily()

_FAMILIES = {"geometric": GEOMETRIC, "geo": GEOMETRIC, "chebyshev": CHEBYSHEV, "cheb": CHEBYSHEV}


def get_family(name):
    try:
        return _FAMILIES[name.lower()]
    except KeyError:
        raise DomainError(f"unknown family {name!r}; expected geo or cheb") from None


@dataclass(frozen=True)
class PoincareReport:
    family: str
    p_values: tuple
    t_grid: tuple = field(repr=False)
    max_residual: float = 0.0


def verify_poincare(family, p_values, t_grid):
    """Max residual of phi(t) = P_p(phi(p t)) over the given grid."""
    t = np.asarray(t_grid, dtype=float)
    if np.any(t < 0):
        raise DomainError("verify_poincare: t grid must be nonnegative")
    worst = 0.0
    for p in p_values:
        family.require_p(p)
        lhs = np.asarray(family.phi(t))
        rhs = np.asarray(family.pgf(p, np.asarray(family.phi(p * t))))
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return PoincareReport(family.kind, tuple(p_values), tuple(t), worst)
