"""Charge-basis operators for the transmon and the parity-protected qubit (PPQ).

All energies are stored in angular-frequency units (rad/s).  The conventional
"2 pi (12, 0.2) GHz" parameter sets translate to ``2*pi*12e9`` etc.; see
:meth:`CircuitParams.from_ghz`.

Conventions
-----------
* The charge basis spans Cooper-pair numbers ``n in [-N, N]`` (dimension
  ``2N + 1``).
* ``charge_translation(basis, k)`` adds ``k`` Cooper pairs,
  ``T_k |n> = |n+k>``.  ``cos(k phi) = (T_k + T_k^dag)/2`` and
  ``sin(k phi) = (T_k - T_k^dag)/(2i)``.
* The flux-tunable transmon uses the symmetric-SQUID law
  ``E_J(Phi) = E_J |cos(pi Phi_ext/Phi_0)|``, with the flux expressed in
  units of the flux quantum.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

TWO_PI_GHZ = 2.0 * np.pi * 1e9

HERMITICITY_RTOL = 1e-12


class InvalidArgumentError(ValueError):
    """Raised when an operation is called outside its domain."""


@dataclass(frozen=True)
class ChargeBasis:
    """Truncated Cooper-pair number basis for one island.

    ``cutoff`` is the maximum Cooper-pair number N; the basis covers
    ``n = -N..N``.  ``label`` identifies the island ('transmon' or 'ppq').
    """

    cutoff: int
    label: str

    def __post_init__(self):
        if self.cutoff < 2:
            raise InvalidArgumentError(
                f"charge cutoff must be >= 2, got {self.cutoff}"
            )
        if self.label not in ("transmon", "ppq"):
            raise InvalidArgumentError(f"unknown island label {self.label!r}")

    @property
    def dim(self) -> int:
        return 2 * self.cutoff + 1

    @property
    def charges(self) -> np.ndarray:
        """Cooper-pair numbers n = -N..N in basis order."""
        return np.arange(-self.cutoff, self.cutoff + 1)


@dataclass(frozen=True)
class CircuitParams:
    """Device energies (rad/s), offset charges, flux, and error amplitudes."""

    e_j_t: float
    e_c_t: float
    e_j_p: float
    e_c_p: float
    e_c_c: float
    n_g_t: float = 0.0
    n_g_p: float = 0.0
    flux_ext: float = 0.0
    eps_x: float = 0.0
    eps_y: float = 0.0

    def __post_init__(self):
        for name in ("e_j_t", "e_c_t", "e_j_p", "e_c_p", "e_c_c"):
            if getattr(self, name) < 0:
                raise InvalidArgumentError(f"{name} must be >= 0")
        if self.e_c_t <= 0 or self.e_c_p <= 0:
            raise InvalidArgumentError("charging energies must be > 0")
        if not 0.0 <= self.flux_ext <= 0.5:
            raise InvalidArgumentError(
                f"flux_ext must lie in [0, 0.5], got {self.flux_ext}"
            )

    @classmethod
    def from_ghz(cls, e_j_t, e_c_t, e_j_p, e_c_p, e_c_c=0.0, **kwargs) -> "CircuitParams":
        """Build from energies quoted in GHz (the 2*pi factor is applied here)."""
        eps_x = kwargs.pop("eps_x", 0.0) * TWO_PI_GHZ
        eps_y = kwargs.pop("eps_y", 0.0) * TWO_PI_GHZ
        return cls(
            e_j_t=e_j_t * TWO_PI_GHZ,
            e_c_t=e_c_t * TWO_PI_GHZ,
            e_j_p=e_j_p * TWO_PI_GHZ,
            e_c_p=e_c_p * TWO_PI_GHZ,
            e_c_c=e_c_c * TWO_PI_GHZ,
            eps_x=eps_x,
            eps_y=eps_y,
            **kwargs,
        )

    def replace(self, **changes) -> "CircuitParams":
        return replace(self, **changes)

    @property
    def e_j_t_flux(self) -> float:
        """Flux-tuned transmon Josephson energy E_J |cos(pi Phi)|."""
        return self.e_j_t * abs(np.cos(np.pi * self.flux_ext))


@dataclass(frozen=True)
class Operator:
    """Hermitian matrix over a charge (or composite) basis."""

    matrix: np.ndarray
    basis: object

    def __post_init__(self):
        m = self.matrix
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvalidArgumentError("operator matrix must be square")
        dim = getattr(self.basis, "dim", m.shape[0])
        if m.shape[0] != dim:
            raise InvalidArgumentError(
                f"matrix dimension {m.shape[0]} does not match basis dimension {dim}"
            )
        scale = np.max(np.abs(m)) or 1.0
        if np.max(np.abs(m - m.conj().T)) > HERMITICITY_RTOL * scale:
            raise InvalidArgumentError("operator matrix is not hermitian")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def number_operator(basis: ChargeBasis, n_g: float = 0.0) -> Operator:
    """Charge operator n - n_g, diagonal in the charge basis."""
    return Operator(np.diag((basis.charges - n_g).astype(float)), basis)


def parity_operator(basis: ChargeBasis) -> Operator:
    """Cooper-pair parity (-1)^n."""
    return Operator(np.diag((-1.0) ** basis.charges), basis)


def charge_translation(basis: ChargeBasis, k: int) -> np.ndarray:
    """Shift matrix T_k with T_k |n> = |n+k> (zero past the cutoff).

    Not hermitian; returned as a plain matrix.
    """
    if not 1 <= k <= basis.cutoff:
        raise InvalidArgumentError(
            f"shift k must satisfy 1 <= k <= {basis.cutoff}, got {k}"
        )
    return np.eye(basis.dim, k=-k)


def cos_k_phi(basis: ChargeBasis, k: int) -> Operator:
    """cos(k phi) built from the charge-translation matrix."""
    t = charge_translation(basis, k)
    return Operator((t + t.T) / 2.0, basis)


def sin_k_phi(basis: ChargeBasis, k: int) -> Operator:
    """sin(k phi) built from the charge-translation matrix."""
    t = charge_translation(basis, k)
    return Operator((t - t.T) / 2.0j, basis)


def transmon_hamiltonian(params: CircuitParams, basis: ChargeBasis) -> Operator:
    """4 E_C (n - n_g)^2 - E_J(Phi) cos(phi) on the transmon island."""
    if basis.label != "transmon":
        raise InvalidArgumentError("basis must be labeled 'transmon'")
    n = basis.charges - params.n_g_t
    h = np.diag(4.0 * params.e_c_t * n**2).astype(complex)
    h -= params.e_j_t_flux * cos_k_phi(basis, 1).matrix
    return Operator(h, basis)


def ppq_hamiltonian(params: CircuitParams, basis: ChargeBasis) -> Operator:
    """4 E_C (n - n_g)^2 - E_J cos(2 phi) on the PPQ island.

    cos(2 phi) only couples charge states with Delta n = +-2, so the
    Hamiltonian commutes with the Cooper-pair parity.
    """
    if basis.label != "ppq":
        raise InvalidArgumentError("basis must be labeled 'ppq'")
    n = basis.charges - params.n_g_p
    h = np.diag(4.0 * params.e_c_p * n**2).astype(complex)
    h -= params.e_j_p * cos_k_phi(basis, 2).matrix
    return Operator(h, basis)


def ppq_error_hamiltonians(params: CircuitParams, basis: ChargeBasis):
    """Single-Cooper-pair tunneling terms H^x = -eps_x cos(phi), H^y = -eps_y sin(phi).

    Both carry only Delta n = +-1 matrix elements and therefore anticommute
    with the parity structure of the bare PPQ.
    """
    if basis.label != "ppq":
        raise InvalidArgumentError("basis must be labeled 'ppq'")
    h_x = Operator(-params.eps_x * cos_k_phi(basis, 1).matrix, basis)
    h_y = Operator(-params.eps_y * sin_k_phi(basis, 1).matrix, basis)
    return h_x, h_y


DEFAULT_CUTOFF = 30


def default_basis(label: str, cutoff: int = DEFAULT_CUTOFF) -> ChargeBasis:
    return ChargeBasis(cutoff=cutoff, label=label)
