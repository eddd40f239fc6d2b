"""Deterministic time evolution of the bounded walk over its light cone.

One step maps the amplitudes at time tau to tau + 1 through

    Psi(n, tau+1) = P Psi(n+1, tau) + Q Psi(n-1, tau)     for n >= 2,
    Psi(1, tau+1) = P Psi(2, tau)   + Q~ Psi(0, tau),
    Psi(0, tau+1) = P Psi(1, tau),

with P, Q the single-row pieces of the bulk coin and Q~ that of the boundary
coin.  Time is counted in half Landau-Zener periods, so support stays inside
the light cone n <= tau with n = tau (mod 2).  Storage is dense over [0, tau];
the bound is exact, so there is no truncation error by construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coin import Coin
from .errors import ResourceLimitError

__all__ = [
    "MAX_EVOLVE_STEPS",
    "WalkState",
    "initial_state",
    "step",
    "evolve",
    "norm",
    "distribution",
]

MAX_EVOLVE_STEPS = 1_000_000


@dataclass(frozen=True)
class WalkState:
    """Wavefunction snapshot at integer time tau.

    psi_L[n] and psi_R[n] hold the two amplitude components for sites
    n = 0 .. tau.  Arrays are marked read-only: states are immutable values.
    """

    tau: int
    psi_L: np.ndarray
    psi_R: np.ndarray

    def __post_init__(self) -> None:
        if self.tau < 0:
            raise ValueError(f"tau must be nonnegative, got {self.tau}")
        for name in ("psi_L", "psi_R"):
            arr = np.asarray(getattr(self, name), dtype=np.complex128)
            if arr.shape != (self.tau + 1,):
                raise ValueError(
                    f"{name} must have length tau+1 = {self.tau + 1}, got shape {arr.shape}"
                )
            if not np.all(np.isfinite(arr.view(np.float64))):
                raise ValueError(f"{name} contains non-finite amplitudes")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def initial_state() -> WalkState:
    """Walker fully on the boundary site with left-moving character."""
    return WalkState(0, np.array([1.0 + 0.0j]), np.array([0.0 + 0.0j]))


def step(state: WalkState, coin: Coin, boundary_coin: Coin) -> WalkState:
    """Advance one time step; pure function, out-of-place update.

    Each output component sums its two source terms in a fixed order
    (L-source first), so results are bit-reproducible.
    """
    tau = state.tau
    a, b = coin.a, coin.b
    c, d = coin.c, coin.d
    ct, dt = boundary_coin.c, boundary_coin.d

    new_L = np.zeros(tau + 2, dtype=np.complex128)
    new_R = np.zeros(tau + 2, dtype=np.complex128)
    # P moves amplitude down one site and leaves an L component.
    new_L[:tau] = a * state.psi_L[1:] + b * state.psi_R[1:]
    # Q moves amplitude up one site and leaves an R component; departures
    # from site 0 go through the boundary row (c~, d~).
    new_R[2:] = c * state.psi_L[1:] + d * state.psi_R[1:]
    new_R[1] = ct * state.psi_L[0] + dt * state.psi_R[0]
    return WalkState(tau + 1, new_L, new_R)


def norm(state: WalkState) -> float:
    """Total probability carried by the state."""
    return float(
        np.sum(np.abs(state.psi_L) ** 2) + np.sum(np.abs(state.psi_R) ** 2)
    )


def evolve(
    coin: Coin,
    boundary_coin: Coin,
    steps: int,
    max_steps: int = MAX_EVOLVE_STEPS,
    norm_tol_per_step: float = 1e-12,
) -> WalkState:
    """Apply ``steps`` walk steps to the initial state.

    Raises ResourceLimitError beyond ``max_steps`` (memory grows linearly
    with tau).  The final norm is checked, never silently renormalized:
    drift beyond steps * norm_tol_per_step raises ArithmeticError.
    """
    if steps < 0:
        raise ValueError(f"steps must be nonnegative, got {steps}")
    if steps > max_steps:
        raise ResourceLimitError(
            f"steps = {steps} exceeds the configured cap of {max_steps}"
        )
    state = initial_state()
    for _ in range(steps):
        state = step(state, coin, boundary_coin)
    drift = abs(norm(state) - 1.0)
    if drift > max(1, steps) * norm_tol_per_step:
        raise ArithmeticError(
            f"norm drifted by {drift:.3e} after {steps} steps; "
            "the coins are not unitary to working precision"
        )
    return state


def distribution(state: WalkState) -> list[tuple[int, float, float]]:
    """Per-site probabilities (n, |psi_L|^2, |psi_R|^2) on the light cone.

    Only sites with n = tau (mod 2) are listed; all others carry exactly
    zero amplitude.
    """
    start = state.tau % 2
    out = []
    for n in range(start, state.tau + 1, 2):
        out.append(
            (n, float(abs(state.psi_L[n]) ** 2), float(abs(state.psi_R[n]) ** 2))
        )
    return out
