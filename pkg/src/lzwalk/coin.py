"""Transfer matrices of the bounded walk and the physical parameter map.

A walker on sites n >= 0 carries a two-component amplitude (psi_L, psi_R).
Every anticrossing applies the same 2x2 unitary ``U = [[a, b], [c, d]]``
except at the boundary site, which reflects completely through
``U~ = [[0, e^{i*gamma_tilde}], [-e^{-i*gamma_tilde}, 0]]``.  Amplitudes are
plain Python complex numbers (64-bit real and imaginary parts).

The tunneling probability derives from the driving field as
``p = exp(-pi * Fbar / F)``, with Fbar the threshold field of the avoided
crossing.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "UNITARITY_TOL",
    "Coin",
    "ModelParams",
    "make_bulk_coin",
    "make_boundary_coin",
    "pqrs_decompose",
    "reduce_angle",
]

UNITARITY_TOL = 1e-12


def _require_finite(name: str, *values: complex) -> None:
    for v in values:
        z = complex(v)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise ValueError(f"{name} must be finite, got {v!r}")


def reduce_angle(x: float) -> float:
    """Reduce an angle to the interval (-pi, pi]."""
    _require_finite("angle", x)
    r = math.remainder(x, 2.0 * math.pi)
    if r <= -math.pi:
        r += 2.0 * math.pi
    return r


@dataclass(frozen=True)
class Coin:
    """2x2 unitary transfer matrix ``[[a, b], [c, d]]``.

    Construction validates unitarity and |det| = 1 to ``UNITARITY_TOL``.
    Instances are immutable and safe to share between threads.
    """

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self) -> None:
        _require_finite("coin entry", self.a, self.b, self.c, self.d)
        defect = self.unitarity_defect()
        if defect > UNITARITY_TOL:
            raise ValueError(f"matrix is not unitary (defect {defect:.3e})")
        if abs(abs(self.det) - 1.0) > UNITARITY_TOL:
            raise ValueError(f"|det| differs from 1 by {abs(self.det) - 1.0:.3e}")

    @property
    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=np.complex128)

    def unitarity_defect(self) -> float:
        """Max entrywise deviation of U^dag U from the identity."""
        u = np.array([[self.a, self.b], [self.c, self.d]], dtype=np.complex128)
        return float(np.max(np.abs(u.conj().T @ u - np.eye(2))))

    @classmethod
    def from_matrix(cls, m: np.ndarray) -> "Coin":
        m = np.asarray(m, dtype=np.complex128)
        if m.shape != (2, 2):
            raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
        return cls(complex(m[0, 0]), complex(m[0, 1]), complex(m[1, 0]), complex(m[1, 1]))


def make_bulk_coin(p: float, beta: float, gamma: float) -> Coin:
    """Bulk transfer matrix for tunneling probability ``p`` and phases.

    Returns ``[[sqrt(p) e^{i beta}, sqrt(1-p) e^{i gamma}],
    [-sqrt(1-p) e^{-i gamma}, sqrt(p) e^{-i beta}]]``; det is exactly 1 up to
    rounding.  ``p = 1`` is the ballistic limit (off-diagonals vanish);
    ``p = 0`` is rejected because the walk then never leaves the boundary.
    """
    _require_finite("p", p)
    if not 0.0 < p <= 1.0:
        raise ValueError(f"p must lie in (0, 1], got {p}")
    _require_finite("beta", beta)
    _require_finite("gamma", gamma)
    sp = math.sqrt(p)
    sq = math.sqrt(1.0 - p)
    return Coin(
        sp * cmath.exp(1j * beta),
        sq * cmath.exp(1j * gamma),
        -sq * cmath.exp(-1j * gamma),
        sp * cmath.exp(-1j * beta),
    )


def make_boundary_coin(gamma_tilde: float) -> Coin:
    """Completely reflecting boundary matrix ``[[0, e^{i g}], [-e^{-i g}, 0]]``."""
    _require_finite("gamma_tilde", gamma_tilde)
    return Coin(0.0, cmath.exp(1j * gamma_tilde), -cmath.exp(-1j * gamma_tilde), 0.0)


def pqrs_decompose(coin: Coin) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Split a coin into the four single-row matrices P, Q, R, S.

    P = [[a,b],[0,0]] and Q = [[0,0],[c,d]] satisfy P + Q = U; together with
    R = [[c,d],[0,0]] and S = [[0,0],[a,b]] they form an orthonormal basis of
    the 2x2 complex matrices under <A|B> = Tr(A^dag B) whenever U is unitary.
    """
    a, b, c, d = coin.a, coin.b, coin.c, coin.d
    zero = 0.0 + 0.0j
    P = np.array([[a, b], [zero, zero]], dtype=np.complex128)
    Q = np.array([[zero, zero], [c, d]], dtype=np.complex128)
    R = np.array([[c, d], [zero, zero]], dtype=np.complex128)
    S = np.array([[zero, zero], [a, b]], dtype=np.complex128)
    return P, Q, R, S


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters of a run.

    F and Fbar (threshold field) share arbitrary units; the tunneling
    probability ``p = exp(-pi*Fbar/F)`` is always derived, never stored.
    ``theta = gamma - gamma_tilde`` is reduced to (-pi, pi] on access.
    L is the system length entering the quasi-energy per length; j0 and E0
    are the momentum and energy units of the level ladder.
    """

    F: float
    Fbar: float
    beta: float = 0.0
    gamma: float = 0.0
    gamma_tilde: float = 0.0
    L: float = 1.0
    j0: float = 1.0
    E0: float = 1.0

    def __post_init__(self) -> None:
        _require_finite("F", self.F)
        _require_finite("Fbar", self.Fbar)
        _require_finite("phases", self.beta, self.gamma, self.gamma_tilde)
        _require_finite("L", self.L)
        _require_finite("units", self.j0, self.E0)
        if self.F <= 0.0:
            raise ValueError(f"F must be positive, got {self.F}")
        if self.Fbar <= 0.0:
            raise ValueError(f"Fbar must be positive, got {self.Fbar}")
        if self.L <= 0.0:
            raise ValueError(f"L must be positive, got {self.L}")
        p = math.exp(-math.pi * self.Fbar / self.F)
        if not 0.0 < p < 1.0:
            raise ValueError(
                f"derived p = exp(-pi*Fbar/F) = {p} falls outside (0, 1); "
                "F is too large or too small relative to Fbar to resolve"
            )

    @property
    def p(self) -> float:
        return math.exp(-math.pi * self.Fbar / self.F)

    @property
    def theta(self) -> float:
        return reduce_angle(self.gamma - self.gamma_tilde)

    @classmethod
    def from_p(cls, p: float, Fbar: float = 1.0, **kwargs) -> "ModelParams":
        """Build params from a tunneling probability; F = -pi*Fbar/ln(p)."""
        _require_finite("p", p)
        if not 0.0 < p < 1.0:
            raise ValueError(f"p must lie in (0, 1) to define a finite field, got {p}")
        return cls(F=-math.pi * Fbar / math.log(p), Fbar=Fbar, **kwargs)

    def bulk_coin(self) -> Coin:
        return make_bulk_coin(self.p, self.beta, self.gamma)

    def boundary_coin(self) -> Coin:
        return make_boundary_coin(self.gamma_tilde)
