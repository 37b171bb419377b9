"""Post-pulse evolution of the residual atom and the pump-probe beat signal.

After the pulse the density operator evolves freely; element (j'm, jm)
acquires exp(i (E_j - E_j') t) with atomic fine-structure energies
referenced to E_{3/2} = 0, so only the beat frequency
omega_b = E_{1/2} - E_{3/2} enters.  A probe that preferentially detaches
m_l = 0 electrons measures

    S(t) = S_bar + Delta_S cos(omega_b t + beta)
    S_bar   = (3 x^(3/2,3/2) + 5 x^(1/2,1/2) + 7 x^(3/2,1/2)) / 15
    Delta_S = sqrt(32)/15 |x_off|

where x are density-matrix entries normalized per m-sign family
(x = rho / (w/2); the two m-sign families are equal for linear
polarization).  With that bookkeeping the very-short-pulse limit has
populations (0, 2/3, 1/3), coherence sqrt(2)/3, and beat contrast
Delta_S / S_bar = 8/19.  The contrast is independent of the normalization
convention.
"""

from dataclasses import dataclass

import numpy as np

from sowp import units
from sowp.amplitude import STATES
from sowp.densmat import DensityMatrix, total_probability
from sowp.species import Species

CONTRAST_PURE = 8.0 / 19.0


def evolve_density(rho: DensityMatrix, species: Species, t_fs: float) -> DensityMatrix:
    """Free evolution by t_fs: off-diagonal (j'=3/2, j=1/2) elements rotate
    by exp(i omega_b t); diagonals are unchanged."""
    t_au = units.fs_to_au(t_fs)
    # atomic energies: E(j=3/2) = 0, E(j=1/2) = omega_b
    energy = {3: 0.0, 1: species.omega_b}
    phase = np.empty((len(STATES), len(STATES)), dtype=complex)
    for a, (j2p, _) in enumerate(STATES):
        for b, (j2, _) in enumerate(STATES):
            phase[a, b] = np.exp(1j * (energy[j2] - energy[j2p]) * t_au)
    return DensityMatrix(rho.matrix * phase)


def _family_normalized(rho: DensityMatrix):
    """Entries at m = +1/2 (+3/2) scaled by 2/w: normalization per m-sign
    family, which makes the pure-state populations read (0, 2/3, 1/3)."""
    w = total_probability(rho)
    scale = 2.0 / w
    return (scale * rho.population(1.5, 1.5),
            scale * rho.population(1.5, 0.5),
            scale * rho.population(0.5, 0.5),
            scale * rho.coherence)


def signal_parameters(rho: DensityMatrix):
    """(S_bar, Delta_S) of the alignment signal for the given matrix."""
    x33, x31, x11, xoff = _family_normalized(rho)
    s_bar = (3.0 * x33 + 5.0 * x11 + 7.0 * x31) / 15.0
    delta_s = np.sqrt(32.0) / 15.0 * abs(xoff)
    return float(s_bar), float(delta_s)


@dataclass(frozen=True)
class PureStateLimit:
    """Very-short-pulse limit: only m_l = 0 electrons detached."""

    populations: tuple      # (rho(3/2,3/2), rho(3/2,1/2), rho(1/2,1/2)) per m family
    coherence: float        # |off-diagonal| in the same normalization
    g: float
    density_matrix: DensityMatrix


def pure_state_limit() -> PureStateLimit:
    """Populations (0, 2/3, 1/3), maximal coherence sqrt(2)/3, g = 1.

    The density matrix carries both m = +/-1/2 families (total trace 1);
    the off-diagonal sign per family follows the product of the coupling
    coefficients for m_l = 0.
    """
    mat = np.zeros((len(STATES), len(STATES)), dtype=complex)
    idx = {s: i for i, s in enumerate(STATES)}
    off = np.sqrt(2.0) / 6.0
    for msign in (1, -1):
        a = idx[(3, msign)]
        b = idx[(1, msign)]
        mat[a, a] = 1.0 / 3.0
        mat[b, b] = 1.0 / 6.0
        mat[a, b] = -msign * off
        mat[b, a] = -msign * off
    return PureStateLimit(
        populations=(0.0, 2.0 / 3.0, 1.0 / 3.0),
        coherence=np.sqrt(2.0) / 3.0,
        g=1.0,
        density_matrix=DensityMatrix(mat))


@dataclass(frozen=True)
class SignalTrace:
    """Sampled alignment signal S(t) = s_bar + delta_s cos(omega_b t + beta)."""

    t_fs: np.ndarray
    values: np.ndarray
    s_bar: float
    delta_s: float
    beta: float
    omega_b: float     # beat angular frequency, a.u.

    @property
    def period_fs(self) -> float:
        return units.au_to_fs(2.0 * np.pi / self.omega_b)

    def write_csv(self, fh) -> None:
        fh.write("t_fs,S\n")
        for t, s in zip(self.t_fs, self.values):
            fh.write(f"{t:.17g},{s:.17g}\n")


def signal_trace(rho: DensityMatrix, species: Species, t_fs,
                 beta: float = 0.0) -> SignalTrace:
    """Evaluate the beat signal on the given times (fs)."""
    t_fs = np.atleast_1d(np.asarray(t_fs, dtype=float))
    s_bar, delta_s = signal_parameters(rho)
    omega_b = species.omega_b
    t_au = units.fs_to_au(t_fs)
    values = s_bar + delta_s * np.cos(omega_b * t_au + beta)
    return SignalTrace(t_fs=t_fs, values=values, s_bar=s_bar,
                       delta_s=delta_s, beta=beta, omega_b=omega_b)
