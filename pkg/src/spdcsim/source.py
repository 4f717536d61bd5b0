"""Closed-form Heisenberg solution of CW-pumped degenerate SPDC.

The parametric interaction over a crystal of dimensionless gain sigma*L and
phase mismatch Delta(Omega)*L mixes each signal mode at detuning +Omega with
the idler mode at -Omega through the Bogoliubov transfer functions

    U(Omega) = e^{i DL/2} [cosh(GL) - i (DL / 2GL) sinh(GL)]
    V(Omega) = -i (sigma L / GL) e^{i DL/2} sinh(GL)

with DL = Delta(Omega)*L and GL = sqrt((sigma L)^2 - DL^2/4) taken on the
principal complex branch, so the oscillatory phase-mismatched regime needs no
case split.  Derived spectra: R(Omega) = U(Omega) V(-Omega) drives interbeam
(signal-idler) correlations, S(Omega) = |V(Omega)|^2 is the photon spectrum
of one beam, and the per-beam flux is N = (1/2pi) * integral of S.

Units: detunings in rad/ps, delays in ps, gain dimensionless.  The absolute
carrier frequency is metadata only; all physics depends on detuning.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import SpdcSimError
from .grid import FrequencyGrid

_SERIES_CUTOFF = 1e-6
_UNITARITY_TOL = 1e-10

PHYSICAL = "physical"
ANALYTIC = "analytic"


@dataclass(frozen=True)
class PhaseMismatch:
    """Taylor expansion of the phase mismatch, Delta(Omega)*L = sum d_k Omega^k.

    Coefficients start at the linear term (d_1, in ps; d_k in ps^k); the
    constant term is identically zero, fixing perfect phase matching at
    degeneracy.  At most six orders are supported.
    """

    taylor_coeffs: tuple = ()

    def __post_init__(self) -> None:
        coeffs = tuple(float(c) for c in self.taylor_coeffs)
        if len(coeffs) > 6:
            raise ValueError("phase mismatch supports at most 6 Taylor orders")
        if not all(np.isfinite(coeffs)):
            raise ValueError("phase mismatch coefficients must be finite")
        object.__setattr__(self, "taylor_coeffs", coeffs)

    def phase(self, omegas: np.ndarray) -> np.ndarray:
        """Dimensionless mismatch phase Delta(Omega)*L on the given detunings."""
        out = np.zeros_like(omegas, dtype=float)
        for d in reversed(self.taylor_coeffs):
            out = (out + d) * omegas
        return out


@dataclass(frozen=True)
class SourceSpec:
    """Physical (gain + mismatch) or analytic-envelope source description."""

    mode: str
    gain: float = 0.0
    mismatch: PhaseMismatch = field(default_factory=PhaseMismatch)
    envelope_bandwidth: float = 0.0
    envelope_shape: str = "gaussian"
    center_frequency: float | None = None  # rad/ps, metadata only

    def __post_init__(self) -> None:
        if self.mode not in (PHYSICAL, ANALYTIC):
            raise ValueError(f"unknown source mode {self.mode!r}")
        if self.gain < 0:
            raise ValueError("gain must be nonnegative")
        if self.mode == ANALYTIC:
            if self.envelope_shape != "gaussian":
                raise ValueError(f"unknown envelope shape {self.envelope_shape!r}")
            if not self.envelope_bandwidth > 0:
                raise ValueError("analytic mode requires a positive bandwidth")

    @classmethod
    def physical(cls, gain, mismatch_coeffs=(), center_frequency=None) -> "SourceSpec":
        return cls(
            mode=PHYSICAL,
            gain=float(gain),
            mismatch=PhaseMismatch(tuple(mismatch_coeffs)),
            center_frequency=center_frequency,
        )

    @classmethod
    def analytic(cls, bandwidth, center_frequency=None) -> "SourceSpec":
        return cls(
            mode=ANALYTIC,
            envelope_bandwidth=float(bandwidth),
            center_frequency=center_frequency,
        )


@dataclass(frozen=True)
class SourceFields:
    """Sampled source spectra on a frequency grid.

    ``R`` and ``S`` are always populated; ``U`` and ``V`` only for physical
    sources.  ``flux_n`` is the per-beam photon flux in photons/ps.
    """

    grid: FrequencyGrid
    R: np.ndarray
    S: np.ndarray
    flux_n: float
    mode: str
    U: np.ndarray | None = None
    V: np.ndarray | None = None

    def require_physical(self, what: str) -> None:
        if self.mode != PHYSICAL:
            raise ValueError(f"{what} requires a physical source, got {self.mode!r}")


def gamma_of(gain, mismatch_phase):
    """Complex nonlinear coefficient GL = sqrt(gain^2 - (DL)^2 / 4).

    Principal-branch complex square root: GL is real for |DL| < 2*gain and
    moves continuously onto the positive imaginary axis beyond the branch
    point.  Accepts scalars or arrays.
    """
    radicand = np.asarray(gain, dtype=complex) ** 2 - np.asarray(mismatch_phase, dtype=complex) ** 2 / 4.0
    return np.sqrt(radicand)


def _cosh_and_sinhc(z: np.ndarray):
    """cosh(z) and sinh(z)/z with a 4th-order series below |z| = 1e-6."""
    z = np.asarray(z, dtype=complex)
    small = np.abs(z) < _SERIES_CUTOFF
    safe = np.where(small, 1.0, z)
    cosh = np.cosh(safe)
    sinhc = np.sinh(safe) / safe
    z2 = z * z
    cosh_series = 1.0 + z2 / 2.0 + z2 * z2 / 24.0
    sinhc_series = 1.0 + z2 / 6.0 + z2 * z2 / 120.0
    return np.where(small, cosh_series, cosh), np.where(small, sinhc_series, sinhc)


def evaluate_uv(spec: SourceSpec, grid: FrequencyGrid) -> SourceFields:
    """Sample U, V and the derived spectra of a physical source on a grid."""
    if spec.mode != PHYSICAL:
        raise ValueError("evaluate_uv requires a physical-mode source")
    dl = spec.mismatch.phase(grid.omegas)
    gl = gamma_of(spec.gain, dl)
    cosh_gl, sinhc_gl = _cosh_and_sinhc(gl)
    half_phase = np.exp(0.5j * dl)
    u = half_phase * (cosh_gl - 0.5j * dl * sinhc_gl)
    v = -1j * spec.gain * half_phase * sinhc_gl

    unitarity = np.abs(u) ** 2 - np.abs(v) ** 2 - 1.0
    worst = float(np.max(np.abs(unitarity)))
    if worst > _UNITARITY_TOL:
        raise SpdcSimError(f"Bogoliubov unitarity violated by {worst:.3e}")

    s = np.abs(v) ** 2
    r = u * grid.reflect(v)
    flux = float(np.sum(s)) * grid.delta_omega / (2.0 * np.pi)
    return SourceFields(grid=grid, R=r, S=s, flux_n=flux, mode=PHYSICAL, U=u, V=v)


def evaluate_analytic(spec: SourceSpec, grid: FrequencyGrid) -> SourceFields:
    """Sample a Gaussian-envelope source: R = exp(-Omega^2/(4B^2)), S = R^2.

    |R|^2 then has RMS bandwidth B.  Useful for clean broadening-law checks;
    U and V are left unset.
    """
    if spec.mode != ANALYTIC:
        raise ValueError("evaluate_analytic requires an analytic-mode source")
    b = spec.envelope_bandwidth
    r = np.exp(-grid.omegas**2 / (4.0 * b * b))
    s = r * r
    flux = float(np.sum(s)) * grid.delta_omega / (2.0 * np.pi)
    return SourceFields(grid=grid, R=r.astype(complex), S=s, flux_n=flux, mode=ANALYTIC)


def evaluate_source(spec: SourceSpec, grid: FrequencyGrid) -> SourceFields:
    """Dispatch to the physical or analytic evaluator."""
    if spec.mode == PHYSICAL:
        return evaluate_uv(spec, grid)
    return evaluate_analytic(spec, grid)
