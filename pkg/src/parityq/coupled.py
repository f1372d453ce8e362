"""Composite transmon (x) PPQ system: assembly, low-energy subspace, couplings.

Tensor ordering is transmon-first: composite index = kron(transmon, ppq).
The six retained low-energy labels are, in order,

    |0t,0p>, |0t,1p>, |1t,0p>, |1t,1p>, |0t,2p>, |0t,3p>

with the first four spanning the computational subspace P0.  All coupling
matrix elements are evaluated from the tensor-factorized form of H_c
(products of gauge-anchored single-island charge matrix elements), so no
composite diagonalization or composite gauge choice is involved.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .circuit import (
    ChargeBasis,
    CircuitParams,
    InvalidArgumentError,
    Operator,
    number_operator,
    ppq_error_hamiltonians,
    ppq_hamiltonian,
    transmon_hamiltonian,
)
from .spectra import (
    Spectrum,
    eigendecompose,
    ppq_spectrum,
    transmon_spectrum,
)

# Low-energy labels (s_t, s_p); first four span P0.
LOW_ENERGY_LABELS = [(0, 0), (0, 1), (1, 0), (1, 1), (0, 2), (0, 3)]
P0_LABELS = LOW_ENERGY_LABELS[:4]


class NoAnticrossingError(RuntimeError):
    """The requested level crossing does not occur for flux in [0, 0.5]."""


@dataclass(frozen=True)
class CompositeBasis:
    transmon: ChargeBasis
    ppq: ChargeBasis

    @property
    def dim(self) -> int:
        return self.transmon.dim * self.ppq.dim

    def kron(self, op_t: np.ndarray, op_p: np.ndarray) -> np.ndarray:
        return np.kron(op_t, op_p)


def default_composite(cutoff: int = 15) -> CompositeBasis:
    return CompositeBasis(ChargeBasis(cutoff, "transmon"), ChargeBasis(cutoff, "ppq"))


@dataclass(frozen=True)
class CouplingElements:
    """Real coupling matrix elements in the anchored gauge (rad/s).

    lambda1/lambda2 are the parity-preserving P0 <-> Q couplings (lambda',
    lambda''), eta1/eta2 the direct charge couplings (eta', eta''), kappa and
    chi the sin(phi) error elements, dh_x/dh_y the single-qubit drive
    elements <0p|H^x|1p> and <0p|H^y|1p>.  ``imag_residue`` is the largest
    relative imaginary part discarded; ``parity_mixed`` flags PPQ states that
    are no longer parity eigenstates (eps != 0 included in the spectra).
    """

    lambda1: float
    lambda2: float
    eta1: float
    eta2: float
    kappa: float
    chi: float
    dh_x: float
    dh_y: float
    imag_residue: float = 0.0
    parity_mixed: bool = False

    @property
    def g_yz(self) -> float:
        return (self.eta1 + self.eta2) / 2.0

    @property
    def g_y(self) -> float:
        return (self.eta1 - self.eta2) / 2.0


def coupling_hamiltonian(basis: CompositeBasis, params: CircuitParams) -> Operator:
    """Capacitive coupling H_c = 4 E_C,c (n_t - n_g,t)(n_p - n_g,p)."""
    n_t = number_operator(basis.transmon, params.n_g_t).matrix
    n_p = number_operator(basis.ppq, params.n_g_p).matrix
    return Operator(4.0 * params.e_c_c * basis.kron(n_t, n_p), basis)


def assemble_full(params: CircuitParams, basis: CompositeBasis | None = None) -> Operator:
    """Full Hamiltonian H_t + H_p + H_c (plus PPQ error terms when eps != 0)."""
    if basis is None:
        basis = default_composite()
    h_t = transmon_hamiltonian(params, basis.transmon).matrix
    h_p = ppq_hamiltonian(params, basis.ppq).matrix
    if params.eps_x or params.eps_y:
        h_x, h_y = ppq_error_hamiltonians(params, basis.ppq)
        h_p = h_p + h_x.matrix + h_y.matrix
    eye_t = np.eye(basis.transmon.dim)
    eye_p = np.eye(basis.ppq.dim)
    h = basis.kron(h_t, eye_p) + basis.kron(eye_t, h_p)
    h = h + coupling_hamiltonian(basis, params).matrix
    return Operator(h, basis)


@dataclass
class LowEnergyModel:
    """Single-island spectra and derived 6-level data at one parameter point."""

    params: CircuitParams
    transmon: Spectrum
    ppq: Spectrum
    t_basis: ChargeBasis
    p_basis: ChargeBasis

    @property
    def omega(self) -> dict:
        """Excitation frequencies omega_ss' = omega_t,s + omega_p,s'."""
        e_t = self.transmon.energies - self.transmon.energies[0]
        e_p = self.ppq.energies - self.ppq.energies[0]
        return {(s, sp): e_t[s] + e_p[sp] for (s, sp) in LOW_ENERGY_LABELS}

    @property
    def omega_t(self) -> float:
        return self.transmon.energies[1] - self.transmon.energies[0]

    @property
    def omega_p(self) -> float:
        return self.ppq.energies[1] - self.ppq.energies[0]


def low_energy_model(
    params: CircuitParams,
    cutoff: int = 30,
    include_errors: bool = False,
) -> LowEnergyModel:
    """Gauge-anchored single-island spectra for the 6-level subspace."""
    t_basis = ChargeBasis(cutoff, "transmon")
    p_basis = ChargeBasis(cutoff, "ppq")
    return LowEnergyModel(
        params=params,
        transmon=transmon_spectrum(params, t_basis, 2),
        ppq=ppq_spectrum(params, p_basis, 4, include_errors=include_errors),
        t_basis=t_basis,
        p_basis=p_basis,
    )


def coupling_matrix_elements(
    params: CircuitParams, cutoff: int = 30
) -> CouplingElements:
    """All eight scalar couplings from the factorized single-island elements."""
    model = low_energy_model(params, cutoff)
    n_t = number_operator(model.t_basis, params.n_g_t).matrix
    n_p = number_operator(model.p_basis, params.n_g_p).matrix
    t, p = model.transmon.states, model.ppq.states
    a_t = t[:, 1].conj() @ n_t @ t[:, 0]  # <1t| n_t - n_g,t |0t>
    pref = 4.0 * params.e_c_c * a_t

    def np_elem(i, j):
        return p[:, i].conj() @ n_p @ p[:, j]

    lam1 = pref * np_elem(1, 2)  # <1t,1p|Hc|0t,2p>
    lam2 = -pref * np_elem(0, 3)  # -<1t,0p|Hc|0t,3p>
    eta1 = 1j * pref * np_elem(1, 1).real
    eta2 = -1j * pref * np_elem(0, 0).real

    h_x, h_y = ppq_error_hamiltonians(params, model.p_basis)
    kappa = p[:, 1].conj() @ h_y.matrix @ p[:, 3]
    chi = p[:, 2].conj() @ h_x.matrix @ p[:, 3]
    dh_x = p[:, 0].conj() @ h_x.matrix @ p[:, 1]
    dh_y = p[:, 0].conj() @ h_y.matrix @ p[:, 1]

    values = np.array([lam1, lam2, eta1, eta2, kappa, chi, dh_x, dh_y])
    scale = np.max(np.abs(values)) or 1.0
    residue = float(np.max(np.abs(values.imag)) / scale)

    mixed = model.ppq.parity is not None and "mixed" in model.ppq.parity[:4]
    return CouplingElements(
        *(float(v.real) for v in values),
        imag_residue=residue,
        parity_mixed=mixed,
    )


def low_energy_projection(
    params: CircuitParams,
    cutoff: int = 30,
    include_errors: bool = True,
    model: LowEnergyModel | None = None,
):
    """Project H onto the six uncoupled product states.

    Returns ``(h6, model)`` where ``h6`` is the 6x6 hermitian matrix in the
    ``LOW_ENERGY_LABELS`` ordering (absolute energies, ground pair at the
    uncoupled zero).  Error terms H^x, H^y enter as PPQ-diagonal blocks when
    ``include_errors`` and the eps amplitudes are nonzero.
    """
    if model is None:
        model = low_energy_model(params, cutoff)
    n_t = number_operator(model.t_basis, params.n_g_t).matrix
    n_p = number_operator(model.p_basis, params.n_g_p).matrix
    t, p = model.transmon.states, model.ppq.states

    nt = t.conj().T @ n_t @ t  # 2x2
    npp = p.conj().T @ n_p @ p  # 4x4
    e_t = model.transmon.energies - model.transmon.energies[0]
    e_p = model.ppq.energies - model.ppq.energies[0]

    if include_errors and (params.eps_x or params.eps_y):
        h_x, h_y = ppq_error_hamiltonians(params, model.p_basis)
        err = p.conj().T @ (h_x.matrix + h_y.matrix) @ p
    else:
        err = np.zeros((4, 4))

    d = len(LOW_ENERGY_LABELS)
    h6 = np.zeros((d, d), dtype=complex)
    for a, (s, sp) in enumerate(LOW_ENERGY_LABELS):
        for b, (s2, sp2) in enumerate(LOW_ENERGY_LABELS):
            if a == b:
                h6[a, b] = e_t[s] + e_p[sp]
            h6[a, b] += 4.0 * params.e_c_c * nt[s, s2] * npp[sp, sp2]
            if s == s2:
                h6[a, b] += err[sp, sp2]
    return h6, model


def product_states(model: LowEnergyModel, labels=LOW_ENERGY_LABELS) -> np.ndarray:
    """Columns kron(|s_t>, |s_p>) for the given labels (composite dimension)."""
    cols = [
        np.kron(model.transmon.states[:, s], model.ppq.states[:, sp])
        for (s, sp) in labels
    ]
    return np.array(cols).T


def _crossing_labels(which: str):
    if which in ("11-02", "11<->02"):
        return (1, 1), (0, 2)
    if which in ("10-03", "10<->03"):
        return (1, 0), (0, 3)
    raise InvalidArgumentError(f"unknown anti-crossing {which!r}")


def uncoupled_detuning(params: CircuitParams, flux: float, which: str, cutoff: int = 30):
    """omega_comp(flux) - omega_noncomp for the requested crossing pair."""
    lab_c, lab_n = _crossing_labels(which)
    model = low_energy_model(params.replace(flux_ext=flux), cutoff)
    omega = model.omega
    return omega[lab_c] - omega[lab_n]


def locate_anticrossing(
    params: CircuitParams,
    which: str = "10-03",
    cutoff: int = 30,
    composite_cutoff: int = 12,
    flux_tol: float = 1e-6,
):
    """Flux position and minimum gap of a computational/non-computational anti-crossing.

    Brackets the root of the uncoupled detuning by bisection, then refines to
    the minimum gap of the coupled spectrum (bounded golden-section search).
    Returns ``(flux_star, gap)``.
    """
    lab_c, lab_n = _crossing_labels(which)

    def detuning(flux):
        return uncoupled_detuning(params, flux, which, cutoff)

    lo, hi = 1e-4, 0.5 - 1e-4
    d_lo, d_hi = detuning(lo), detuning(hi)
    if d_lo * d_hi > 0:
        raise NoAnticrossingError(
            f"uncoupled levels {which} do not cross for flux in [0, 0.5]"
        )
    flux0 = brentq(detuning, lo, hi, xtol=flux_tol)

    basis = default_composite(composite_cutoff)

    def gap(flux):
        # Track the two coupled eigenstates carrying the crossing-pair
        # character (largest overlap with the two product states); a third
        # level of opposite PPQ parity may pass through unhybridized and must
        # not be mistaken for one of the pair.
        pars = params.replace(flux_ext=flux)
        model = low_energy_model(pars, cutoff=composite_cutoff)
        pair = product_states(model, labels=[lab_c, lab_n])
        spec = eigendecompose(assemble_full(pars, basis), 8)
        weight = np.linalg.norm(pair.conj().T @ spec.states, axis=0)
        i, j = sorted(np.argsort(weight)[-2:])
        return spec.energies[j] - spec.energies[i]

    width = 0.02
    res = minimize_scalar(
        gap,
        bounds=(max(lo, flux0 - width), min(hi, flux0 + width)),
        method="bounded",
        options={"xatol": flux_tol},
    )
    return float(res.x), float(res.fun)
