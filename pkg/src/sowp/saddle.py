"""Complex saddle points of the strong-field action.

For a momentum p and channel binding energy E < 0 the saddle condition

    S'(t) = (1/2) [p + A(t)]^2 - E = 0

factorizes as A(t) = -p_z +/- i q with q = sqrt(kappa^2 + p_perp^2).
Because A(t) is a finite sum of sinusoids whose frequencies are integer
multiples of omega/N, substituting w = exp(i omega t / N) turns each branch
into a polynomial of degree 2N+2 in w.  The roots of the '+' branch alone
give the complete saddle set: roots inside the unit circle map directly to
saddles with Im t > 0, and roots outside map to the '-' branch saddles via
w -> 1/conj(w) (equivalently t -> conj(t)).  This guarantees exactly 2N+2
saddles with Im t > 0 and 0 <= Re t <= tau_p, with no search heuristics.
Companion-matrix eigenvalues seed a damped Newton polish of the exact
saddle condition.

The closed-form action uses the elementary antiderivatives of the sinusoid
expansion with the integration constant fixed so that S(0) = 0.
"""

from dataclasses import dataclass

import numpy as np

from sowp.errors import SaddleError, DegenerateSaddleError
from sowp.pulse import Pulse

RESIDUAL_TOL = 1e-10       # max |S'(t)| accepted at a root
DISTINCT_TOL = 1e-6        # min pairwise |t_i - t_j|
DEGENERATE_S2_TOL = 1e-6   # min |S''| before the plain formula is distrusted
NEWTON_ITERATIONS = 12


@dataclass(frozen=True)
class SaddlePoint:
    """One saddle: 1-based index mu in order of increasing Re t."""

    mu: int
    t: complex
    action: complex
    s2: complex          # S''(t_mu)
    prefactor: complex   # 1/sqrt(-i S'') on the principal branch
    branch: int          # sign of Im(p_z + A(t_mu)); +1 or -1


def action(pulse: Pulse, e_bound: float, p, t):
    """Classical action S(t) = (1/2) int_0^t [p+A]^2 dt' - E t (S(0)=0).

    p is the momentum 3-vector (a.u.); t may be complex, scalar or array.
    """
    px, py, pz = (float(c) for c in p)
    return _action_terms(pulse, np.asarray(t, dtype=complex),
                         pz, px * px + py * py, e_bound)


def action_derivative(pulse: Pulse, e_bound: float, p, t):
    """S'(t) = (1/2)[p + A(t)]^2 - E; vanishes at saddle points."""
    px, py, pz = (float(c) for c in p)
    vz = pz + pulse.vector_potential(np.asarray(t, dtype=complex))
    return 0.5 * (vz * vz + px * px + py * py) - e_bound


def _action_terms(pulse, t, pz, pperp2, e_bound):
    """Vectorized closed-form action for scalar pz, pperp2."""
    s = (0.5 * (pz * pz + pperp2) - e_bound) * t
    for a, om in pulse.components:
        s = s + pz * a * (1.0 - np.cos(om * t)) / om
    for a1, om1 in pulse.components:
        for a2, om2 in pulse.components:
            d = om1 - om2
            integ_d = t if d == 0.0 else np.sin(d * t) / d
            s = s + 0.25 * a1 * a2 * (integ_d - np.sin((om1 + om2) * t) / (om1 + om2))
    return s


def prefactor_branch(s2, hint=None):
    """1/sqrt(-i s2) on the principal branch (Re >= 0; Re = 0 ties resolve
    to Im > 0), applied uniformly to every saddle.

    ``hint`` is accepted for interface stability (a neighboring saddle's
    prefactor); the principal-branch rule does not use it.
    """
    s2 = complex(s2)
    if s2 == 0:
        raise DegenerateSaddleError("S'' = 0: coalescing saddle points")
    return 1.0 / np.sqrt(-1j * s2)


class SaddleBatch:
    """Saddle data for a batch of momenta, shape (n_points, 2N+2) per field.

    Points are (p_z, p_perp^2) pairs; saddles are sorted by Re t along the
    last axis.
    """

    __slots__ = ("t", "vz", "action", "s2", "prefactor", "branch", "residual")

    def __init__(self, t, vz, action_, s2, prefactor, branch, residual):
        self.t = t
        self.vz = vz
        self.action = action_
        self.s2 = s2
        self.prefactor = prefactor
        self.branch = branch
        self.residual = residual


def _polynomial_coefficients(pulse: Pulse):
    """Ascending coefficients of w^(N+1) * A(t(w)), excluding the -c w^(N+1)
    branch term; returns (coef, M) with deg = 2M."""
    n = pulse.n_cycles
    m = n + 1
    coef = np.zeros(2 * m + 1, dtype=complex)
    base = pulse.omega / n
    for a, om in pulse.components:
        k = int(round(om / base))
        coef[m + k] += a / 2j
        coef[m - k] -= a / 2j
    return coef, m


def saddle_batch(pulse: Pulse, e_bound: float, pz, pperp2,
                 chunk_elems: int = 4_000_000) -> SaddleBatch:
    """Find all 2N+2 saddles for each (pz, pperp2) point.

    Raises SaddleError/DegenerateSaddleError when any point fails the
    residual, count, distinctness, or curvature contracts.
    """
    if e_bound >= 0:
        raise ValueError(f"e_bound must be negative, got {e_bound}")
    if pulse.a0 == 0.0:
        raise SaddleError("no saddle points for a zero-amplitude pulse")
    pz = np.atleast_1d(np.asarray(pz, dtype=float))
    pperp2 = np.atleast_1d(np.asarray(pperp2, dtype=float))
    if pz.shape != pperp2.shape:
        raise ValueError("pz and pperp2 must have the same shape")
    npts = pz.size
    coef, m = _polynomial_coefficients(pulse)
    deg = 2 * m
    lead = coef[deg]

    q = np.sqrt(-2.0 * e_bound + pperp2)
    c = -pz + 1j * q  # '+' branch constant

    # companion matrix in the np.roots layout: only the w^m column entry
    # depends on c
    base = np.zeros((deg, deg), dtype=complex)
    base[1:, :-1] = np.eye(deg - 1)
    desc = coef[::-1]
    base[0, :] = -desc[1:] / lead
    const_entry = base[0, deg - 1 - m]

    w = np.empty((npts, deg), dtype=complex)
    rows = max(1, chunk_elems // (deg * deg))
    for i0 in range(0, npts, rows):
        sl = slice(i0, min(i0 + rows, npts))
        nblk = c[sl].size
        comp = np.broadcast_to(base, (nblk, deg, deg)).copy()
        comp[:, 0, deg - 1 - m] = const_entry + c[sl] / lead
        w[sl] = np.linalg.eigvals(comp)

    # roots inside the unit circle: '+' branch saddles (Im t > 0);
    # outside: reflect to the '-' branch
    theta = np.angle(w) % (2.0 * np.pi)
    t = (pulse.n_cycles / pulse.omega) * (theta - 1j * np.log(np.abs(w)))
    t = np.where(np.abs(w) < 1.0, t, np.conj(t))

    pzc = pz[:, None]
    pp2c = pperp2[:, None]
    step_cap = 0.25 * np.pi / pulse.omega
    for _ in range(NEWTON_ITERATIONS):
        vz = pzc + pulse.vector_potential(t)
        f = 0.5 * (vz * vz + pp2c) - e_bound
        fp = vz * pulse.vector_potential_derivative(t)
        with np.errstate(divide="ignore", invalid="ignore"):
            dt = np.where(fp != 0, -f / fp, 0.0)
        mag = np.abs(dt)
        scale = np.where(mag > step_cap, step_cap / np.where(mag > 0, mag, 1.0), 1.0)
        t = t + dt * scale

    order = np.argsort(t.real, axis=1)
    t = np.take_along_axis(t, order, axis=1)
    vz = pzc + pulse.vector_potential(t)
    residual = np.abs(0.5 * (vz * vz + pp2c) - e_bound)

    _validate_batch(pulse, t, residual)

    s2 = vz * pulse.vector_potential_derivative(t)
    s2min = np.abs(s2).min()
    if s2min < DEGENERATE_S2_TOL:
        raise DegenerateSaddleError(
            f"|S''| = {s2min:.3e} below {DEGENERATE_S2_TOL}: near-coalescing saddles",
            roots=t)
    prefactor = 1.0 / np.sqrt(-1j * s2)
    act = np.empty_like(t)
    for i in range(npts):
        act[i] = _action_terms(pulse, t[i], pz[i], pperp2[i], e_bound)
    branch = np.where(vz.imag > 0, 1, -1)
    return SaddleBatch(t, vz, act, s2, prefactor, branch, residual)


def _validate_batch(pulse, t, residual):
    bad = residual > RESIDUAL_TOL
    if bad.any():
        i = int(np.argmax(residual.max(axis=1)))
        raise SaddleError(
            f"saddle residual {residual.max():.3e} exceeds {RESIDUAL_TOL} "
            f"({int(bad.sum())} roots); grid or intensity outside the "
            f"validated regime", roots=t[i])
    if (t.imag <= 0).any():
        i = int(np.argmax((t.imag <= 0).sum(axis=1)))
        raise SaddleError("saddle with Im t <= 0 found", roots=t[i])
    eps = 1e-9 * pulse.tau_p
    if (t.real < -eps).any() or (t.real > pulse.tau_p + eps).any():
        raise SaddleError("saddle outside 0 <= Re t <= tau_p", roots=t)
    gap = np.abs(np.diff(t, axis=1))
    if gap.size and gap.min() < DISTINCT_TOL:
        i = int(np.argmin(gap.min(axis=1)))
        raise SaddleError(
            f"saddle pair separated by {gap.min():.3e} < {DISTINCT_TOL}",
            roots=t[i])


def find_saddles(pulse: Pulse, e_bound: float, p) -> list[SaddlePoint]:
    """All 2N+2 saddle points for momentum 3-vector p, ordered by Re t."""
    px, py, pz = (float(c) for c in p)
    batch = saddle_batch(pulse, e_bound, np.array([pz]),
                         np.array([px * px + py * py]))
    return [
        SaddlePoint(mu=k + 1, t=complex(batch.t[0, k]),
                    action=complex(batch.action[0, k]),
                    s2=complex(batch.s2[0, k]),
                    prefactor=complex(batch.prefactor[0, k]),
                    branch=int(batch.branch[0, k]))
        for k in range(batch.t.shape[1])
    ]
