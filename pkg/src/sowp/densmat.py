"""Residual-atom density matrix from momentum-space quadrature.

    rho_{j'm' jm} = sum_{m_s} int conj(A^{j'm'}_{m_s}) A^{jm}_{m_s} d3p/(2pi)^3

integrated in spherical coordinates up to the photoelectron energy 15 omega.
The electron spin is traced incoherently (final spin states are
orthonormal).  Every amplitude carries the azimuthal factor exp(i m_l phi),
so the phi integral of a product is 2 pi delta_{m_l' m_l}; the 'analytic'
phi mode uses this identity, while the 'numeric' mode evaluates the phi sum
with the uniform trapezoid rule, letting one verify that m' != m elements
vanish within quadrature accuracy rather than by construction.

The radial quadrature is Gauss-Legendre in p on [0, sqrt(2 E_max)] with the
p^2 volume factor folded into the weights, which integrates the momentum
volume exactly; energy nodes p^2/2 are exposed for reporting.  Quadrature
sums run over a fixed flat node ordering, so results are reproducible to
the bit regardless of how callers parallelize over grid chunks.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from sowp.amplitude import CHANNELS, STATES, amplitude_profiles
from sowp.errors import (CoherenceUndefinedError, GridConvergenceWarning,
                         NumericalError, ProbabilityError, SaturationWarning)
from sowp.pulse import Pulse
from sowp.species import Species

E_MAX_PHOTONS = 15.0
SATURATION_W = 0.5

_STATE_INDEX = {s: i for i, s in enumerate(STATES)}


@dataclass(frozen=True)
class MomentumGrid:
    """Spherical momentum quadrature: radial (energy) x polar x azimuthal."""

    e_max: float              # radial cutoff, a.u. of energy
    p_nodes: np.ndarray       # (nE,) radial momentum nodes
    radial_weights: np.ndarray  # (nE,) Gauss-Legendre weights times p^2
    u_nodes: np.ndarray       # (nT,) cos(theta) nodes
    u_weights: np.ndarray
    phi_nodes: np.ndarray     # (nP,) uniform azimuthal nodes on [0, 2pi)
    phi_weights: np.ndarray
    phi_mode: str = "analytic"

    @classmethod
    def build(cls, omega: float, n_energy: int = 200, n_theta: int = 64,
              n_phi: int = 32, phi_mode: str = "analytic",
              e_max: float = None) -> "MomentumGrid":
        if phi_mode not in ("analytic", "numeric"):
            raise ValueError(f"phi_mode must be 'analytic' or 'numeric', got {phi_mode!r}")
        if min(n_energy, n_theta, n_phi) < 2:
            raise ValueError("grid needs at least 2 nodes per dimension")
        e_max = E_MAX_PHOTONS * omega if e_max is None else e_max
        p_max = np.sqrt(2.0 * e_max)
        x, wx = np.polynomial.legendre.leggauss(n_energy)
        p = 0.5 * (x + 1.0) * p_max
        wp = 0.5 * p_max * wx * p * p
        u, wu = np.polynomial.legendre.leggauss(n_theta)
        phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
        wphi = np.full(n_phi, 2.0 * np.pi / n_phi)
        return cls(e_max=e_max, p_nodes=p, radial_weights=wp, u_nodes=u,
                   u_weights=wu, phi_nodes=phi, phi_weights=wphi,
                   phi_mode=phi_mode)

    @property
    def energy_nodes(self) -> np.ndarray:
        return 0.5 * self.p_nodes ** 2

    @property
    def p_max(self) -> float:
        return float(np.sqrt(2.0 * self.e_max))

    def volume(self) -> float:
        """Quadrature of the unit function over the momentum ball."""
        return (float(self.radial_weights.sum()) * float(self.u_weights.sum())
                * float(self.phi_weights.sum()))

    def doubled(self) -> "MomentumGrid":
        """Same extent with every dimension at twice the node count."""
        return MomentumGrid.build(
            omega=self.e_max / E_MAX_PHOTONS, n_energy=2 * self.p_nodes.size,
            n_theta=2 * self.u_nodes.size, n_phi=2 * self.phi_nodes.size,
            phi_mode=self.phi_mode, e_max=self.e_max)


@dataclass(frozen=True)
class DensityMatrix:
    """6x6 Hermitian matrix over STATES = ((3,-3),(3,-1),(3,1),(3,3),(1,-1),(1,1))
    in doubled (j, m) labels."""

    matrix: np.ndarray = field(repr=False)

    def element(self, jp, mp, j, m) -> complex:
        """rho_{j'm' jm}; arguments are half-integers (e.g. 1.5, 0.5)."""
        a = _STATE_INDEX[(int(round(2 * jp)), int(round(2 * mp)))]
        b = _STATE_INDEX[(int(round(2 * j)), int(round(2 * m)))]
        return complex(self.matrix[a, b])

    def population(self, j, m) -> float:
        return self.element(j, m, j, m).real

    @property
    def w(self) -> float:
        """Total detachment probability (trace)."""
        return float(np.trace(self.matrix).real)

    @property
    def coherence(self) -> complex:
        """The j = 3/2 <-> 1/2 off-diagonal element at m = 1/2."""
        return self.element(1.5, 0.5, 0.5, 0.5)

    def normalized(self) -> "DensityMatrix":
        """rho / w."""
        w = self.w
        if w <= 0:
            raise ProbabilityError(f"cannot normalize: w = {w}")
        return DensityMatrix(self.matrix / w)

    def write_csv(self, fh) -> None:
        """Header rows with w and g, then (j', m', j, m, re, im) rows."""
        try:
            g = coherence_degree(self)
            gtext = f"{g:.17g}"
        except CoherenceUndefinedError:
            gtext = "nan"
        fh.write(f"# w = {self.w:.17g}\n")
        fh.write(f"# g = {gtext}\n")
        fh.write("jp,mp,j,m,re,im\n")
        for a, (j2p, m2p) in enumerate(STATES):
            for b, (j2, m2) in enumerate(STATES):
                z = self.matrix[a, b]
                fh.write(f"{j2p/2:g},{m2p/2:g},{j2/2:g},{m2/2:g},"
                         f"{z.real:.17g},{z.imag:.17g}\n")


def total_probability(rho: DensityMatrix) -> float:
    """w = sum of diagonal populations; must be positive."""
    w = rho.w
    if w <= 0:
        raise ProbabilityError(f"total detachment probability w = {w} is not positive")
    return w


def coherence_degree(rho: DensityMatrix) -> float:
    """Degree of coherence g = |rho_off| / sqrt(rho^(3/2,1/2) rho^(1/2,1/2))."""
    d32 = rho.population(1.5, 0.5)
    d12 = rho.population(0.5, 0.5)
    if d32 <= 0 or d12 <= 0:
        raise CoherenceUndefinedError(
            f"coherence undefined: diagonals {d32:.3e}, {d12:.3e}")
    g = abs(rho.coherence) / np.sqrt(d32 * d12)
    if g > 1.0 + 1e-12:
        raise NumericalError(f"g = {g} exceeds 1 beyond the roundoff guard")
    return min(float(g), 1.0)


def _assemble(profiles: dict, weights: np.ndarray, grid: MomentumGrid,
              k: int = None) -> np.ndarray:
    """Contract channel profiles into the 6x6 matrix.

    ``k``: cumulative saddle cutoff index for build-up partial sums (the
    profiles then have a trailing saddle axis).
    """
    nstates = len(STATES)
    rho = np.zeros((nstates, nstates), dtype=complex)
    if grid.phi_mode == "analytic":
        phi_factor = {dml: (2.0 * np.pi if dml == 0 else 0.0)
                      for dml in range(-2, 3)}
    else:
        phi_factor = {dml: complex(np.sum(grid.phi_weights
                                          * np.exp(1j * dml * grid.phi_nodes)))
                      for dml in range(-2, 3)}
    inv_cube = 1.0 / (2.0 * np.pi) ** 3
    for a, (j2a, m2a) in enumerate(STATES):
        for b, (j2b, m2b) in enumerate(STATES):
            acc = 0.0 + 0.0j
            for ms2 in (-1, 1):
                key_a = (j2a, m2a, ms2)
                key_b = (j2b, m2b, ms2)
                if key_a not in profiles or key_b not in profiles:
                    continue
                prof_a = profiles[key_a] if k is None else profiles[key_a][:, k]
                prof_b = profiles[key_b] if k is None else profiles[key_b][:, k]
                dml = (m2b - ms2) // 2 - (m2a - ms2) // 2
                fac = phi_factor[dml]
                if fac == 0.0:
                    continue
                acc += fac * np.sum(weights * np.conj(prof_a) * prof_b)
            rho[a, b] = acc * inv_cube
    return rho


def _flat_nodes(grid: MomentumGrid):
    p2d, u2d = np.meshgrid(grid.p_nodes, grid.u_nodes, indexing="ij")
    pz = (p2d * u2d).ravel()
    pperp = (p2d * np.sqrt(1.0 - u2d * u2d)).ravel()
    weights = (grid.radial_weights[:, None] * grid.u_weights[None, :]).ravel()
    return pz, pperp, weights


def build_density_matrix(pulse: Pulse, species: Species,
                         grid: MomentumGrid = None,
                         check_convergence: bool = False) -> DensityMatrix:
    """Integrate amplitude products over the momentum grid.

    ``check_convergence`` recomputes on a doubled grid and warns when g or w
    move by more than 1e-3 relative.
    """
    if grid is None:
        grid = MomentumGrid.build(pulse.omega)
    if pulse.a0 == 0.0:
        rho = DensityMatrix(np.zeros((len(STATES), len(STATES)), dtype=complex))
        return rho
    pz, pperp, weights = _flat_nodes(grid)
    profiles = amplitude_profiles(pulse, species, pz, pperp)
    rho = DensityMatrix(_assemble(profiles, weights, grid))
    if rho.w > SATURATION_W:
        warnings.warn(
            f"w = {rho.w:.3f} > {SATURATION_W}: detachment saturates and "
            f"depletion of the anion is not modelled", SaturationWarning,
            stacklevel=2)
    if check_convergence:
        fine = build_density_matrix(pulse, species, grid.doubled())
        for label, coarse_val, fine_val in (
                ("g", coherence_degree(rho), coherence_degree(fine)),
                ("w", rho.w, fine.w)):
            rel = abs(fine_val - coarse_val) / max(abs(fine_val), 1e-300)
            if rel > 1e-3:
                warnings.warn(
                    f"grid doubling moved {label} from {coarse_val:.6e} to "
                    f"{fine_val:.6e} ({rel:.2e} relative): grid underresolved",
                    GridConvergenceWarning, stacklevel=2)
    return rho
