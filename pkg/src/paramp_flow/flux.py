"""Entropy, particle-number and energy fluxes carried by the output line."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Literal, Sequence

import numpy as np

from .errors import ContractViolation
from .gaussian import entropy_from_spectrum, symplectic_spectrum, SymplecticSpectrum
from .output import (
    DEFAULT_K_MAX_CAP,
    ModeGrid,
    diag_occupations,
    diagonal_block,
    equal_time_occupation,
    output_covariance,
    structured_spectrum,
)
from .paramp import DerivedParams, asymptotic_covariance

#: gamma - 1 below this is judged to be zero
TOL_TRIV = 1e-9
CAUCHY_TOL = 1e-3
K_MAX_START = 64

Method = Literal["structured", "dense"]


@dataclass(frozen=True)
class FluxReport:
    delta_t: float
    k_max: int
    delta_S_out: float
    n_trivial_modes: int
    nontrivial_gammas: tuple[float, ...]
    delta_N_out: float
    number_flux: float
    output_power: float
    drive_power: float
    entropy_flux_estimate: float

    def to_dict(self) -> dict:
        out = asdict(self)
        out["nontrivial_gammas"] = list(self.nontrivial_gammas)
        return out


@dataclass(frozen=True)
class ConvergedEntropy:
    """``delta_S_out`` along a doubling schedule of ``k_max``."""

    delta_t: float
    k_max_values: tuple[int, ...]
    delta_S_values: tuple[float, ...]
    converged: bool

    @property
    def value(self) -> float:
        return self.delta_S_values[-1]

    @property
    def k_max(self) -> int:
        return self.k_max_values[-1]

    @property
    def flux(self) -> float:
        return self.value / self.delta_t


@dataclass(frozen=True)
class FluxScan:
    rows: tuple[ConvergedEntropy, ...]
    exponent: float = field(default=float("nan"))

    @property
    def delta_ts(self) -> np.ndarray:
        return np.array([r.delta_t for r in self.rows])

    @property
    def fluxes(self) -> np.ndarray:
        return np.array([r.flux for r in self.rows])

    @property
    def flagged(self) -> list[float]:
        """Window widths whose ``k_max`` schedule ran out before converging."""
        return [r.delta_t for r in self.rows if not r.converged]


def output_spectrum(d: DerivedParams, g: ModeGrid, method: Method = "structured",
                    k_max_cap: int | None = None) -> SymplecticSpectrum:
    if method == "structured":
        return structured_spectrum(d, g, k_max_cap=k_max_cap)
    if method == "dense":
        return symplectic_spectrum(output_covariance(d, g, k_max_cap=k_max_cap))
    raise ContractViolation(f"unknown method {method!r}")


def number_flux(d: DerivedParams) -> float:
    """Late-time photon number flux ``gamma f^2 / (2 lambda1 lambda2)``."""
    return d.gamma * d.f ** 2 / (2.0 * d.lambda1 * d.lambda2)


def delta_N(d: DerivedParams, g: ModeGrid) -> float:
    """Quanta in one window, summed over the harmonics of ``g``."""
    return float(np.sum(diag_occupations(d, g)))


def output_power(d: DerivedParams, omega_p: float | None = None) -> float:
    omega_p = d.params.omega_p if omega_p is None else omega_p
    return 0.5 * omega_p * number_flux(d)


def drive_power(d: DerivedParams, omega_p: float | None = None) -> float:
    """Power delivered by the pump, ``omega_p f Re<a~^2>`` in the steady state.

    ``<a~^2>`` is rebuilt from the asymptotic quadrature covariance through
    ``a~ = sqrt(N)/2 (X1 e^{-i phi} + i X2 e^{i phi})``.
    """
    omega_p = d.params.omega_p if omega_p is None else omega_p
    C = asymptotic_covariance(d)
    e = np.exp(2j * d.phi)
    a2 = 0.25 * d.norm_N * (C.c11 / e - C.c22 * e + 2j * C.c12)
    return float(omega_p * d.f * a2.real)


def output_entropy(d: DerivedParams, g: ModeGrid, method: Method = "structured",
                   tol_triv: float = TOL_TRIV, k_max_cap: int | None = None) -> FluxReport:
    """Entropy of one output window plus the number and energy bookkeeping."""
    spec = output_spectrum(d, g, method, k_max_cap)
    dS = entropy_from_spectrum(spec)
    nontriv = spec.nontrivial(tol_triv)
    nf = number_flux(d)
    return FluxReport(
        delta_t=g.delta_t,
        k_max=g.k_max,
        delta_S_out=dS,
        n_trivial_modes=spec.n_modes - len(nontriv),
        nontrivial_gammas=tuple(float(x) for x in nontriv),
        delta_N_out=delta_N(d, g),
        number_flux=nf,
        output_power=output_power(d),
        drive_power=drive_power(d),
        entropy_flux_estimate=dS / g.delta_t,
    )


def k_max_schedule(start: int = K_MAX_START, cap: int = DEFAULT_K_MAX_CAP) -> list[int]:
    ks = []
    k = start
    while k <= cap:
        ks.append(k)
        k *= 2
    if not ks or ks[-1] < cap:
        ks.append(cap)
    return ks


def converged_output_entropy(d: DerivedParams, delta_t: float, schedule: Sequence[int] | None = None,
                             cauchy_tol: float = CAUCHY_TOL, method: Method = "structured",
                             k_max_cap: int | None = None) -> ConvergedEntropy:
    """Increase ``k_max`` along ``schedule`` until successive values agree.

    Stops at the first ``k_max`` whose entropy is within ``cauchy_tol`` of
    the previous one.  A schedule that runs out first is reported with
    ``converged=False`` rather than raising.
    """
    schedule = list(schedule) if schedule is not None else k_max_schedule(
        cap=DEFAULT_K_MAX_CAP if k_max_cap is None else k_max_cap)
    if not schedule:
        raise ContractViolation("empty k_max schedule")
    ks, vals = [], []
    converged = False
    for k in schedule:
        s = output_entropy(d, ModeGrid(delta_t, k), method=method, k_max_cap=k_max_cap).delta_S_out
        if vals and abs(s - vals[-1]) < cauchy_tol:
            converged = True
        ks.append(k)
        vals.append(s)
        if converged:
            break
    return ConvergedEntropy(delta_t, tuple(ks), tuple(vals), converged)


def flux_exponent(delta_ts, fluxes) -> float:
    """Least-squares slope of ``log(flux)`` against ``log(delta_t)``.

    A constant window entropy gives ``-1``; a finite flux gives ``0``.
    """
    x = np.log(np.asarray(delta_ts, dtype=float))
    y = np.log(np.asarray(fluxes, dtype=float))
    return float(np.polyfit(x, y, 1)[0])


def entropy_flux_scan(d: DerivedParams, delta_t_list: Sequence[float], schedule: Sequence[int] | None = None,
                      cauchy_tol: float = CAUCHY_TOL, method: Method = "structured") -> FluxScan:
    """Converged window entropy and ``delta_S / delta_t`` for several window widths."""
    rows = tuple(
        converged_output_entropy(d, dt, schedule, cauchy_tol, method) for dt in delta_t_list
    )
    exponent = flux_exponent([r.delta_t for r in rows], [r.flux for r in rows]) if len(rows) > 1 else float("nan")
    return FluxScan(rows, exponent)


def naive_blockwise_entropy(d: DerivedParams, g: ModeGrid) -> float:
    """Window entropy with the boundary term of the kernel dropped.

    Each harmonic is then an independent pure squeezed mode, so this is
    zero up to rounding.
    """
    return float(sum(diagonal_block(w, d).entropy() for w in g.omegas))


def continuum_number_flux(d: DerivedParams) -> float:
    """Number flux from the equal-time output correlator, no windowing."""
    return equal_time_occupation(d)
