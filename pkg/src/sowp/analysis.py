"""Experiment drivers: coherence build-up, duration sweep, Gaussian law.

The sweep computes the degree of coherence g for a family of pulses with
increasing cycle count and expresses it against the ratio of the FWHM pulse
duration to the spin-orbit beat period.  Across species the points collapse
onto one curve well described by

    g(r) = g0 exp(-zeta r^2),      r = tau_fwhm / tau_beat,

fitted by unweighted least squares (log-linear seed, Gauss-Newton refine).
"""

import concurrent.futures
from dataclasses import dataclass

import numpy as np

from sowp import units
from sowp.amplitude import amplitude_profiles, STATES
from sowp.densmat import (DensityMatrix, MomentumGrid, _assemble, _flat_nodes,
                          build_density_matrix, coherence_degree)
from sowp.errors import FitError
from sowp.pulse import Pulse
from sowp.saddle import find_saddles
from sowp.species import Species

DEFAULT_SWEEP_CYCLES = {"f": range(2, 19), "cl": range(2, 19), "br": range(2, 9)}
BUILDUP_PROBE_P = 0.05


@dataclass(frozen=True)
class SweepPoint:
    species: str
    n_cycles: int
    tau_fwhm_fs: float
    ratio: float          # tau_fwhm / tau_beat
    g: float
    w: float


@dataclass(frozen=True)
class FitResult:
    g0: float
    zeta: float
    rms: float
    residuals: tuple = ()


@dataclass(frozen=True)
class BuildupTrace:
    """Cumulative saddle-sum density-matrix elements.

    Entry k uses the first k+1 saddle contributions (ordered by Re t) in
    both channels; t_fs[k] is Re t of saddle k+1 for the ground channel at
    emission along the polarization axis with momentum BUILDUP_PROBE_P.
    """

    t_fs: np.ndarray            # (2N+2,)
    pop_j32_m32: np.ndarray     # rho^(3/2,3/2)
    pop_j32_m12: np.ndarray     # rho^(3/2,1/2)
    pop_j12_m12: np.ndarray     # rho^(1/2,1/2)
    coherence: np.ndarray       # complex rho_{3/2 1/2 1/2 1/2}
    field: np.ndarray           # F(Re t'_mu), a.u.
    final: DensityMatrix        # full-sum matrix on the same grid

    def write_csv(self, fh) -> None:
        fh.write("t_fs,element,re,im,abs,field\n")
        rows = (("pop_j32_m32", self.pop_j32_m32),
                ("pop_j32_m12", self.pop_j32_m12),
                ("pop_j12_m12", self.pop_j12_m12),
                ("coh_j32_j12_m12", self.coherence))
        for tag, arr in rows:
            for k in range(self.t_fs.size):
                z = complex(arr[k])
                fh.write(f"{self.t_fs[k]:.17g},{tag},{z.real:.17g},"
                         f"{z.imag:.17g},{abs(z):.17g},{self.field[k]:.17g}\n")


def buildup(pulse: Pulse, species: Species,
            grid: MomentumGrid = None) -> BuildupTrace:
    """Recompute the density matrix from cumulative saddle subsets."""
    if grid is None:
        grid = MomentumGrid.build(pulse.omega)
    pz, pperp, weights = _flat_nodes(grid)
    profiles = amplitude_profiles(pulse, species, pz, pperp, cumulative=True)
    nsad = next(iter(profiles.values())).shape[1]

    probe = find_saddles(pulse, species.e_bound(3),
                         (0.0, 0.0, BUILDUP_PROBE_P))
    t_ref = np.array([sp.t.real for sp in probe])
    field = np.array([pulse.electric_field(t).real for t in t_ref])

    idx = {s: i for i, s in enumerate(STATES)}
    a32, a12, a33 = idx[(3, 1)], idx[(1, 1)], idx[(3, 3)]
    p3232 = np.empty(nsad)
    p3212 = np.empty(nsad)
    p1212 = np.empty(nsad)
    coh = np.empty(nsad, dtype=complex)
    rho = None
    for k in range(nsad):
        rho = _assemble(profiles, weights, grid, k=k)
        p3232[k] = rho[a33, a33].real
        p3212[k] = rho[a32, a32].real
        p1212[k] = rho[a12, a12].real
        coh[k] = rho[a32, a12]
    return BuildupTrace(
        t_fs=units.au_to_fs(t_ref), pop_j32_m32=p3232, pop_j32_m12=p3212,
        pop_j12_m12=p1212, coherence=coh, field=field,
        final=DensityMatrix(rho))


def _sweep_one(species: Species, wavelength_nm: float, intensity_wcm2: float,
               n_cycles: int, grid_kw: dict) -> SweepPoint:
    pulse = Pulse.from_lab(wavelength_nm, n_cycles, intensity_wcm2)
    grid = MomentumGrid.build(pulse.omega, **grid_kw)
    rho = build_density_matrix(pulse, species, grid)
    tau_fwhm = pulse.fwhm_fs()
    return SweepPoint(
        species=species.name, n_cycles=n_cycles, tau_fwhm_fs=tau_fwhm,
        ratio=tau_fwhm / species.beat_period_fs,
        g=coherence_degree(rho), w=rho.w)


def coherence_sweep(species_list, wavelength_nm: float, intensity_wcm2: float,
                    cycles=None, threads: int = 1, **grid_kw):
    """One point per (species, N); failures are collected, not raised.

    ``cycles``: iterable of N applied to every species, or a mapping from
    lower-case species name to an iterable (default: 2..18 for F and Cl,
    2..8 for Br).  Returns (points, failures) with deterministic ordering
    by (species position, N) regardless of ``threads``.
    """
    jobs = []
    for sp in species_list:
        if cycles is None:
            ns = DEFAULT_SWEEP_CYCLES.get(sp.name.lower())
            if ns is None:
                raise ValueError(f"no default cycle range for species {sp.name!r}")
        elif hasattr(cycles, "get"):
            ns = cycles.get(sp.name.lower())
            if ns is None:
                raise ValueError(f"no cycle range given for species {sp.name!r}")
        else:
            ns = cycles
        jobs.extend((sp, int(n)) for n in ns)

    results = {}
    failures = []
    if threads <= 1:
        for sp, n in jobs:
            try:
                results[(sp.name, n)] = _sweep_one(
                    sp, wavelength_nm, intensity_wcm2, n, grid_kw)
            except Exception as exc:   # aggregate per-point failures
                failures.append((sp.name, n, exc))
    else:
        with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
            futs = {pool.submit(_sweep_one, sp, wavelength_nm, intensity_wcm2,
                                n, grid_kw): (sp.name, n)
                    for sp, n in jobs}
            for fut in concurrent.futures.as_completed(futs):
                key = futs[fut]
                try:
                    results[key] = fut.result()
                except Exception as exc:
                    failures.append((key[0], key[1], exc))
    points = [results[(sp.name, n)] for sp, n in jobs if (sp.name, n) in results]
    failures.sort(key=lambda f: (f[0], f[1]))
    return points, failures


def _ratios_g(points):
    if points and isinstance(points[0], SweepPoint):
        pairs = [(p.ratio, p.g) for p in points]
    else:
        pairs = [(float(r), float(g)) for r, g in points]
    return (np.array([p[0] for p in pairs]), np.array([p[1] for p in pairs]))


def gaussian_fit(points, max_iterations: int = 200,
                 step_tol: float = 1e-10) -> FitResult:
    """Least-squares (g0, zeta) for g = g0 exp(-zeta r^2)."""
    r, g = _ratios_g(points)
    if r.size < 3:
        raise ValueError(f"need at least 3 points, got {r.size}")
    if np.unique(r).size != r.size:
        raise ValueError("ratios must be distinct")

    pos = g > 0
    if pos.sum() < 2:
        raise FitError("need at least 2 points with g > 0 to seed the fit")
    design = np.column_stack([np.ones(int(pos.sum())), -r[pos] ** 2])
    sol, *_ = np.linalg.lstsq(design, np.log(g[pos]), rcond=None)
    g0, zeta = float(np.exp(sol[0])), float(sol[1])

    trace = [(g0, zeta)]
    for _ in range(max_iterations):
        model = np.exp(-zeta * r * r)
        resid = g - g0 * model
        jac = np.column_stack([-model, g0 * r * r * model])
        step, *_ = np.linalg.lstsq(jac, -resid, rcond=None)
        # halve the step while it increases the residual norm
        scale = 1.0
        base = float(resid @ resid)
        for _ in range(30):
            cand = (g0 + scale * step[0], zeta + scale * step[1])
            res_c = g - cand[0] * np.exp(-cand[1] * r * r)
            if float(res_c @ res_c) <= base or scale < 1e-8:
                break
            scale *= 0.5
        g0, zeta = g0 + scale * step[0], zeta + scale * step[1]
        trace.append((g0, zeta))
        if max(abs(scale * step[0]), abs(scale * step[1])) < step_tol:
            break
    else:
        raise FitError(f"Gauss-Newton did not converge in {max_iterations} "
                       f"iterations", trace=trace)
    if not (0.0 < g0 <= 1.0) or zeta <= 0.0:
        raise FitError(f"fit outside the physical domain: g0 = {g0}, "
                       f"zeta = {zeta}", trace=trace)
    residuals = g - g0 * np.exp(-zeta * r * r)
    return FitResult(g0=g0, zeta=zeta,
                     rms=float(np.sqrt(np.mean(residuals ** 2))),
                     residuals=tuple(float(x) for x in residuals))


def predict_g(ratio: float, fit: FitResult) -> float:
    """g0 exp(-zeta ratio^2)."""
    if ratio < 0:
        raise ValueError(f"ratio must be >= 0, got {ratio}")
    return fit.g0 * float(np.exp(-fit.zeta * ratio * ratio))


def invert_g(g: float, fit: FitResult) -> float:
    """Duration ratio at which the Gaussian law gives coherence g."""
    if not 0.0 < g < fit.g0:
        raise ValueError(f"g must lie in (0, g0 = {fit.g0}), got {g}")
    return float(np.sqrt(np.log(fit.g0 / g) / fit.zeta))


def write_sweep_csv(points, fh) -> None:
    fh.write("species,n_cycles,tau_fwhm_fs,ratio,g,w\n")
    for p in points:
        fh.write(f"{p.species},{p.n_cycles},{p.tau_fwhm_fs:.17g},"
                 f"{p.ratio:.17g},{p.g:.17g},{p.w:.17g}\n")


def read_sweep_csv(fh):
    header = fh.readline().strip().split(",")
    expected = ["species", "n_cycles", "tau_fwhm_fs", "ratio", "g", "w"]
    if header != expected:
        raise ValueError(f"unexpected sweep CSV header {header}")
    points = []
    for line in fh:
        if not line.strip():
            continue
        sp, n, tau, ratio, g, w = line.strip().split(",")
        points.append(SweepPoint(species=sp, n_cycles=int(n),
                                 tau_fwhm_fs=float(tau), ratio=float(ratio),
                                 g=float(g), w=float(w)))
    return points


def write_fit_csv(fit: FitResult, fh) -> None:
    fh.write("g0,zeta,rms\n")
    fh.write(f"{fit.g0:.17g},{fit.zeta:.17g},{fit.rms:.17g}\n")
