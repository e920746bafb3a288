import numpy as np
import pytest

from nugh.errors import AliasError, BracketError, DomainError, RangeError, TruncationError
from nugh.families import GEOMETRIC
from nugh.gh import GHParams
from nugh.inversion import (
    adaptive_cutoff,
    cdf_at,
    default_x_range,
    pdf_grid,
    quantile,
    tail_diagnostic,
)
from nugh.montecarlo import laplace_cdf
from nugh.transform import NuGHChar

GAUSS = lambda t: np.exp(-np.asarray(t, dtype=float) ** 2 / 2)
LAPLACE = lambda t: 1.0 / (1.0 + np.asarray(t, dtype=float) ** 2)


class TestPdfGrid:
    def test_normal_peak(self):
        grid = pdf_grid(GAUSS, (-12, 12), 4096)
        i0 = int(np.argmin(np.abs(grid.x)))
        assert grid.pdf[i0] == pytest.approx(1.0 / np.sqrt(2 * np.pi), abs=1e-9)
        assert grid.total_mass == pytest.approx(1.0, abs=1e-8)

    def test_normal_matches_density_everywhere(self):
        grid = pdf_grid(GAUSS, (-12, 12), 4096)
        ref = np.exp(-grid.x**2 / 2) / np.sqrt(2 * np.pi)
        assert np.max(np.abs(grid.pdf - ref)) <= 1e-9

    def test_laplace_peak_tapered(self):
        # slow 1/t^2 decay: tapered inversion with a generous band
        grid = pdf_grid(LAPLACE, (-20, 20), 2**20, t_cutoff=5e4)
        assert grid.interp_pdf(0.0) == pytest.approx(0.5, abs=1e-4)
        assert grid.interp_pdf(1.3) == pytest.approx(0.5 * np.exp(-1.3), abs=1e-4)

    def test_round_trip_reproduces_cf(self):
        grid = pdf_grid(GAUSS, (-12, 12), 4096)
        for t in (0.0, 0.7, 2.0):
            back = np.trapezoid(grid.pdf * np.exp(1j * t * grid.x), grid.x)
            assert abs(back - complex(GAUSS(t))) <= 1e-6

    def test_geo_nig_round_trip(self):
        cf = NuGHChar(GEOMETRIC, GHParams(-0.5, 1.0, 0.0, 1.0, 0.0))
        grid = pdf_grid(cf, (-60, 60), 2**16)
        for t in (0.0, 0.5, 1.0, 2.0):
            back = np.trapezoid(grid.pdf * np.exp(1j * t * grid.x), grid.x)
            assert abs(back - complex(cf(t))) <= 1e-6

    def test_narrow_range_raises_alias(self):
        with pytest.raises(AliasError):
            pdf_grid(GAUSS, (-0.5, 0.5), 1024)

    def test_untapered_requires_decay(self):
        with pytest.raises(TruncationError):
            pdf_grid(LAPLACE, (-20, 20), 4096, taper=False)

    def test_insufficient_band_raises(self):
        with pytest.raises(TruncationError):
            pdf_grid(GAUSS, (-200, 200), 1024)  # dt too small for the cutoff

    def test_bad_arguments(self):
        with pytest.raises(DomainError):
            pdf_grid(GAUSS, (1, 1), 4096)
        with pytest.raises(DomainError):
            pdf_grid(GAUSS, (-10, 10), 1000)

    def test_adaptive_cutoff(self):
        cut, decayed = adaptive_cutoff(GAUSS)
        assert decayed and abs(complex(GAUSS(cut))) < 1e-12
        cut2, decayed2 = adaptive_cutoff(LAPLACE)
        assert not decayed2 and cut2 == 2**16

    def test_default_x_range(self):
        lo, hi = default_x_range(GAUSS, 10.0)
        assert lo == pytest.approx(-10.0, abs=1e-4)
        assert hi == pytest.approx(10.0, abs=1e-4)


class TestCdf:
    def test_gaussian_values(self):
        from scipy.special import ndtr

        for x in (-1.5, 0.0, 0.5, 1.96):
            assert cdf_at(GAUSS, x) == pytest.approx(float(ndtr(x)), abs=1e-8)

    def test_laplace_values(self):
        for x in (-2.0, 0.0, 1.0, 3.0):
            assert cdf_at(LAPLACE, x) == pytest.approx(float(laplace_cdf(x)), abs=1e-8)

    def test_far_tail(self):
        assert cdf_at(LAPLACE, 30.0) == pytest.approx(float(laplace_cdf(30.0)), abs=1e-8)

    def test_monotone(self):
        xs = np.linspace(-4, 4, 17)
        vals = [cdf_at(GAUSS, x) for x in xs]
        assert np.all(np.diff(vals) >= -1e-10)

    def test_consistent_with_pdf_grid(self):
        grid = pdf_grid(GAUSS, (-12, 12), 4096)
        cum = grid.cdf_values()
        for a, b in [(-1.0, 1.0), (0.3, 2.2)]:
            window = float(np.interp(b, grid.x, cum) - np.interp(a, grid.x, cum))
            assert window == pytest.approx(cdf_at(GAUSS, b) - cdf_at(GAUSS, a), abs=1e-5)


class TestQuantile:
    def test_gaussian(self):
        assert quantile(GAUSS, 0.5) == pytest.approx(0.0, abs=1e-6)
        assert quantile(GAUSS, 0.975) == pytest.approx(1.959964, abs=1e-4)

    def test_laplace(self):
        assert quantile(LAPLACE, 0.9) == pytest.approx(np.log(5.0), abs=1e-5)

    def test_round_trip(self):
        q = 0.77
        assert cdf_at(GAUSS, quantile(GAUSS, q)) == pytest.approx(q, abs=1e-6)

    def test_bad_q(self):
        with pytest.raises(DomainError):
            quantile(GAUSS, 0.0)

    def test_bracket_failure(self):
        # a defective transform (total mass 1/2) plateaus at F = 0.75,
        # so the upper bracket for q = 0.9 can never be found
        with pytest.raises(BracketError):
            quantile(lambda t: 0.5 * np.exp(-np.asarray(t, dtype=float) ** 2 / 2), 0.9)


class TestTails:
    def test_laplace_exponential(self):
        grid = pdf_grid(LAPLACE, (-24, 24), 2**20, t_cutoff=5e4)
        rep = tail_diagnostic(grid, "right")
        assert rep.r2 > 0.999
        assert rep.slope == pytest.approx(-1.0, rel=1e-3)
        left = tail_diagnostic(grid, "left")
        assert left.slope == pytest.approx(1.0, rel=1e-3)

    def test_gaussian_not_exponential(self):
        grid = pdf_grid(GAUSS, (-12, 12), 2**14)
        rep = tail_diagnostic(grid, "right", (0.9, 0.9999))
        # log-density is quadratic, so a line fits poorly over a wide window
        assert rep.r2 < 0.999

    def test_window_needs_resolution(self):
        grid = pdf_grid(GAUSS, (-12, 12), 1024)
        with pytest.raises(RangeError):
            tail_diagnostic(grid, "right", (0.9995, 0.9999))

    def test_bad_arguments(self):
        grid = pdf_grid(GAUSS, (-12, 12), 1024)
        with pytest.raises(DomainError):
            tail_diagnostic(grid, "up")
        with pytest.raises(DomainError):
            tail_diagnostic(grid, "right", (0.4, 0.9))
