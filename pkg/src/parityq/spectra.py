"""Diagonalization, parity labeling, gauge fixing, and closed-form level estimates.

The single-island spectra returned by :func:`transmon_spectrum` and
:func:`ppq_spectrum` are gauge-anchored so that the coupling matrix elements
computed in :mod:`parityq.coupled` come out real:

* state 0 (and any state not covered below) has its largest-magnitude charge
  amplitude rotated to be real and positive;
* ``<0_t| n_t |1_t>``, ``<2_p| n_p |1_p>`` and ``<3_p| n_p |0_p>`` are made
  purely imaginary with positive imaginary part.

Degenerate PPQ pairs (at ``n_g_p = 0.5``) are resolved by diagonalizing the
parity operator inside the degenerate subspace before anchoring.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
import scipy.sparse.linalg as spla

from .circuit import (
    ChargeBasis,
    CircuitParams,
    InvalidArgumentError,
    Operator,
    number_operator,
    parity_operator,
    ppq_error_hamiltonians,
    ppq_hamiltonian,
    transmon_hamiltonian,
)

EIGEN_RESIDUAL_RTOL = 1e-10
PARITY_TAU = 1e-6
OVERLAP_COARSE_THRESHOLD = 0.1
GAUGE_OVERLAP_TOL = 1e-8


class NonConvergenceError(RuntimeError):
    """Iterative eigensolver failed; carries the worst residual."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class GridTooCoarseError(RuntimeError):
    """Consecutive sweep points are too far apart to track eigenvectors."""


@dataclass
class Spectrum:
    """Lowest-k eigenpairs of a hermitian operator.

    ``states`` holds eigenvectors as columns aligned with ``energies``
    (ascending).  ``parity`` carries per-state labels for PPQ spectra.
    """

    energies: np.ndarray
    states: np.ndarray
    parity: list | None = None
    gauge_fixed: bool = False

    @property
    def k(self) -> int:
        return len(self.energies)


@dataclass
class SweepResult:
    """Gauge-smoothed spectra along a 1-D parameter sweep."""

    axis: str
    grid: np.ndarray
    spectra: list
    derived: dict = field(default_factory=dict)


def eigendecompose(h: Operator, k: int, method: str = "dense") -> Spectrum:
    """Lowest-k eigenpairs, ascending, with a residual check.

    ``method='dense'`` uses LAPACK; ``method='lanczos'`` uses implicitly
    restarted Lanczos (ARPACK) with full re-orthogonalization, intended for
    large composite systems.
    """
    m = h.matrix
    if k > m.shape[0]:
        raise InvalidArgumentError(f"k={k} exceeds dimension {m.shape[0]}")
    if method == "dense":
        vals, vecs = sla.eigh(m, subset_by_index=(0, k - 1))
    elif method == "lanczos":
        try:
            vals, vecs = spla.eigsh(m, k=k, which="SA")
        except spla.ArpackNoConvergence as exc:
            raise NonConvergenceError(
                f"Lanczos did not converge: {exc}", residual=None
            ) from exc
        order = np.argsort(vals)
        vals, vecs = vals[order], vecs[:, order]
    else:
        raise InvalidArgumentError(f"unknown method {method!r}")

    scale = np.max(np.abs(vals)) or 1.0
    residual = np.max(
        np.linalg.norm(m @ vecs - vecs * vals[np.newaxis, :], axis=0)
    )
    if residual > EIGEN_RESIDUAL_RTOL * max(scale, np.max(np.abs(m))):
        raise NonConvergenceError(
            f"eigenpair residual {residual:.3e} exceeds tolerance", residual=residual
        )
    return Spectrum(energies=vals, states=vecs)


def classify_parity(state: np.ndarray, basis: ChargeBasis, tau: float = PARITY_TAU) -> str:
    """'even'/'odd'/'mixed' by the weight on even Cooper-pair numbers."""
    weights = np.abs(state) ** 2
    even_weight = weights[basis.charges % 2 == 0].sum() / weights.sum()
    if even_weight > 1.0 - tau:
        return "even"
    if even_weight < tau:
        return "odd"
    return "mixed"


def _anchor_largest_amplitude(vec: np.ndarray) -> np.ndarray:
    """Rotate the global phase so the largest-|c| amplitude is real positive."""
    i = np.argmax(np.abs(vec))
    phase = vec[i] / abs(vec[i])
    return vec / phase


def _rotate_to_positive_imag(vec: np.ndarray, element: complex) -> np.ndarray:
    """Multiply vec by a phase making ``element * e^{i theta}`` = i * positive."""
    theta = np.pi / 2 - np.angle(element)
    return vec * np.exp(1j * theta)


def _resolve_degenerate_parity(spec: Spectrum, basis: ChargeBasis, rtol=1e-9):
    """Rotate inside (near-)degenerate pairs to diagonalize the parity operator."""
    energies, states = spec.energies, spec.states.copy()
    pi_p = parity_operator(basis).matrix
    scale = np.max(np.abs(energies)) or 1.0
    j = 0
    while j < len(energies) - 1:
        if abs(energies[j + 1] - energies[j]) < rtol * scale:
            block = states[:, j : j + 2]
            pi_block = block.conj().T @ pi_p @ block
            pvals, rot = np.linalg.eigh(pi_block)
            block = block @ rot
            # Doublets alternate (even, odd), (odd, even), ... continuing the
            # level ordering away from the charge-degeneracy point.
            want_even_first = (j // 2) % 2 == 0
            even_first = pvals[0] > pvals[1]
            if even_first != want_even_first:
                block = block[:, ::-1]
            states[:, j : j + 2] = block
            j += 2
        else:
            j += 1
    return Spectrum(energies=energies, states=states, parity=spec.parity)


def transmon_spectrum(params: CircuitParams, basis: ChargeBasis, k: int = 4) -> Spectrum:
    """Gauge-anchored transmon eigenpairs (see module docstring)."""
    spec = eigendecompose(transmon_hamiltonian(params, basis), k)
    states = spec.states
    n_t = number_operator(basis, params.n_g_t).matrix
    states[:, 0] = _anchor_largest_amplitude(states[:, 0])
    for j in range(1, k):
        elem = states[:, 0].conj() @ n_t @ states[:, j]
        if abs(elem) > 1e-12:
            states[:, j] = _rotate_to_positive_imag(states[:, j], elem)
        else:
            states[:, j] = _anchor_largest_amplitude(states[:, j])
    return Spectrum(energies=spec.energies, states=states, gauge_fixed=True)


def ppq_spectrum(
    params: CircuitParams,
    basis: ChargeBasis,
    k: int = 6,
    include_errors: bool = False,
) -> Spectrum:
    """Gauge-anchored PPQ eigenpairs with parity labels.

    With ``include_errors`` the single-Cooper-pair terms H^x, H^y are added;
    eigenstates may then classify as 'mixed'.
    """
    h = ppq_hamiltonian(params, basis).matrix
    if include_errors:
        h_x, h_y = ppq_error_hamiltonians(params, basis)
        h = h + h_x.matrix + h_y.matrix
    spec = eigendecompose(Operator(h, basis), k)
    spec = _resolve_degenerate_parity(spec, basis)
    states = spec.states
    n_p = number_operator(basis, params.n_g_p).matrix

    for j in (0, 1):
        states[:, j] = _anchor_largest_amplitude(states[:, j])
    # |2> phased against |1>, |3> against |0>; higher states self-anchored.
    pairs = {2: 1, 3: 0}
    for j in range(2, k):
        ref = pairs.get(j)
        elem = states[:, j].conj() @ n_p @ states[:, ref] if ref is not None else 0.0
        if abs(elem) > 1e-12:
            # <j| n |ref> -> e^{-i theta} <j| n |ref>; land on +i |elem|.
            states[:, j] = states[:, j] * np.exp(1j * (np.angle(elem) - np.pi / 2))
        else:
            states[:, j] = _anchor_largest_amplitude(states[:, j])
    parity = [classify_parity(states[:, j], basis) for j in range(k)]
    return Spectrum(energies=spec.energies, states=states, parity=parity, gauge_fixed=True)


def smooth_gauge_fix(
    axis: str,
    grid: np.ndarray,
    spectra: list,
    track_states: bool = True,
) -> SweepResult:
    """Fix a smooth eigenvector gauge along a sweep.

    States at each point are first matched to the previous point by maximal
    overlap (which follows parity sectors through crossings), then each track
    is multiplied by ``exp(-i beta)`` with ``beta`` the accumulated
    ``Im ln <psi_j | psi_j+1>`` so that consecutive overlaps are real-positive.
    """
    if len(spectra) != len(grid):
        raise InvalidArgumentError("one spectrum required per grid point")
    k = spectra[0].k
    if any(s.k != k for s in spectra):
        raise InvalidArgumentError("all sweep points must retain the same k")

    out = [spectra[0]]
    beta = np.zeros(k)
    for i in range(1, len(spectra)):
        prev, cur = out[-1], spectra[i]
        states = cur.states.copy()
        energies = cur.energies.copy()
        parity = list(cur.parity) if cur.parity is not None else None

        if track_states:
            overlap = np.abs(prev.states.conj().T @ states)
            from scipy.optimize import linear_sum_assignment

            _, cols = linear_sum_assignment(-overlap)
            states = states[:, cols]
            energies = energies[cols]
            if parity is not None:
                parity = [parity[c] for c in cols]

        ov = np.einsum("ij,ij->j", prev.states.conj(), states)
        if np.min(np.abs(ov)) < OVERLAP_COARSE_THRESHOLD:
            raise GridTooCoarseError(
                f"consecutive overlap {np.min(np.abs(ov)):.3f} below "
                f"{OVERLAP_COARSE_THRESHOLD} at {axis}={grid[i]:.6g}"
            )
        beta = beta + np.angle(ov)
        # prev is already phase-fixed, so rotating by the incremental angle is
        # equivalent to the accumulated beta relative to the raw sweep.
        states = states * np.exp(-1j * np.angle(ov))[np.newaxis, :]
        out.append(
            Spectrum(energies=energies, states=states, parity=parity, gauge_fixed=True)
        )
    return SweepResult(axis=axis, grid=np.asarray(grid), spectra=out)


def duffing_levels(params: CircuitParams, which: str, m: int) -> float:
    """Closed-form Duffing / double-Duffing level estimates.

    For the transmon, the m-th level of the quartic expansion.  For the PPQ,
    ``m`` must be even and the returned value is the pair mean
    ``mu_{m,m+1}`` of the double-well doublet.
    """
    if which == "transmon":
        e_j, e_c = params.e_j_t_flux, params.e_c_t
        return (
            -e_j
            + np.sqrt(8.0 * e_c * e_j) * (m + 0.5)
            - (e_c / 12.0) * (6 * m**2 + 6 * m + 3)
        )
    if which == "ppq":
        if m % 2 != 0:
            raise InvalidArgumentError("PPQ pair mean is defined for even m")
        e_j, e_c = params.e_j_p, params.e_c_p
        n = m / 2.0
        return (
            -e_j
            + 2.0 * np.sqrt(8.0 * e_c * e_j) * (n + 0.5)
            - (4.0 * e_c / 12.0) * (6 * n**2 + 6 * n + 3)
        )
    raise InvalidArgumentError(f"unknown oscillator {which!r}")


@dataclass(frozen=True)
class DesignCondition:
    satisfied: bool
    satisfied_approx: bool
    margin: float  # omega_10 - omega_02, rad/s


def design_condition(params: CircuitParams, cutoff: int = 30) -> DesignCondition:
    """Check that the PPQ doublet |2,3> sits below the transmon excitation.

    The exact inequality ``omega_02 < omega_10`` is evaluated from dense
    diagonalization at the idle flux; the closed-form proxy compares
    ``sqrt(8 E_C,t E_J,t) - E_C,t`` with ``2 sqrt(8 E_C,p E_J,p) - 4 E_C,p``.
    """
    t_basis = ChargeBasis(cutoff, "transmon")
    p_basis = ChargeBasis(cutoff, "ppq")
    t_spec = eigendecompose(transmon_hamiltonian(params, t_basis), 2)
    p_spec = eigendecompose(ppq_hamiltonian(params, p_basis), 3)
    omega_t = t_spec.energies[1] - t_spec.energies[0]
    omega_p2 = p_spec.energies[2] - p_spec.energies[0]
    margin = omega_t - omega_p2
    approx = (
        np.sqrt(8.0 * params.e_c_t * params.e_j_t) - params.e_c_t
        > 2.0 * np.sqrt(8.0 * params.e_c_p * params.e_j_p) - 4.0 * params.e_c_p
    )
    return DesignCondition(satisfied=margin > 0, satisfied_approx=bool(approx), margin=margin)
