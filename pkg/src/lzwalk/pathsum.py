"""Brute-force lattice-path oracle for the bounded walk.

Transition amplitudes are built by enumerating every path from site 0 and
multiplying transfer-matrix pieces in path order.  Cost is exponential in
the step count, so a hard cap applies; within the cap the result is exact
and serves as the reference the fast engines are checked against.

Move labels: "P" steps down, "Q" steps up in the bulk, "Q~" steps up off the
boundary site.  A word is stored in time order (first move first); its
matrix product form puts the latest move leftmost, e.g. the time-ordered
word (Q~, Q, P, Q) prints as QPQQ~.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coin import Coin
from .errors import ResourceLimitError

__all__ = [
    "TAU_CAP",
    "DOWN",
    "UP",
    "UP_BOUNDARY",
    "TransitionAmplitude",
    "enumerate_paths",
    "word",
    "transition_amplitude",
    "pqrs_coefficients",
    "pqrs_coefficient_series",
    "pqrs_residual",
]

TAU_CAP = 16

DOWN = "P"
UP = "Q"
UP_BOUNDARY = "Q~"

_BOUNDARIES = ("reflecting", "absorbing")


def _validate(n: int, tau: int, boundary: str) -> None:
    if boundary not in _BOUNDARIES:
        raise ValueError(f"boundary must be one of {_BOUNDARIES}, got {boundary!r}")
    if tau < 0 or n < 0 or n > tau:
        raise ValueError(f"need 0 <= n <= tau, got n={n}, tau={tau}")
    if tau > TAU_CAP:
        raise ResourceLimitError(
            f"tau = {tau} exceeds the enumeration cap of {TAU_CAP} "
            "(path count grows exponentially)"
        )


def enumerate_paths(n: int, tau: int, boundary: str = "reflecting") -> list[tuple[str, ...]]:
    """All paths 0 -> n in tau steps staying on sites >= 0.

    With an absorbing boundary the walker stops on reaching site 0, so site 0
    may occur only at the start and, for n = 0, at the final step.  Paths are
    returned in lexicographic order of their time-ordered move sequences
    ("P" < "Q" < "Q~").
    """
    _validate(n, tau, boundary)
    if (n - tau) % 2 != 0:
        return []
    absorbing = boundary == "absorbing"
    out: list[tuple[str, ...]] = []
    path: list[str] = []

    def extend(pos: int, remaining: int) -> None:
        if remaining == 0:
            if pos == n:
                out.append(tuple(path))
            return
        if abs(pos - n) > remaining:
            return
        if pos == 0:
            moves = ((UP_BOUNDARY, 1),)
        else:
            moves = ((DOWN, -1), (UP, 1))
        for label, delta in moves:
            nxt = pos + delta
            if absorbing and nxt == 0 and remaining > 1:
                continue
            path.append(label)
            extend(nxt, remaining - 1)
            path.pop()

    extend(0, tau)
    return out


def word(path: tuple[str, ...]) -> str:
    """Matrix-product rendering of a path, latest move leftmost."""
    return "".join(reversed(path))


@dataclass(frozen=True)
class TransitionAmplitude:
    """Summed path product Xi(0 -> n; tau) for one boundary kind."""

    xi: np.ndarray
    n: int
    tau: int
    boundary: str

    def __post_init__(self) -> None:
        arr = np.asarray(self.xi, dtype=np.complex128)
        if arr.shape != (2, 2):
            raise ValueError(f"xi must be 2x2, got shape {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "xi", arr)

    def apply(self, vec=(1.0, 0.0)) -> tuple[complex, complex]:
        """Amplitude vector Xi @ vec; the walk starts from t(1, 0)."""
        v0, v1 = complex(vec[0]), complex(vec[1])
        m = self.xi
        return (m[0, 0] * v0 + m[0, 1] * v1, m[1, 0] * v0 + m[1, 1] * v1)


def _mul2(m2, m1):
    # rows (a, b, c, d); m2 @ m1
    a2, b2, c2, d2 = m2
    a1, b1, c1, d1 = m1
    return (
        a2 * a1 + b2 * c1,
        a2 * b1 + b2 * d1,
        c2 * a1 + d2 * c1,
        c2 * b1 + d2 * d1,
    )


def transition_amplitude(
    n: int,
    tau: int,
    coin: Coin,
    boundary_coin: Coin,
    boundary: str = "reflecting",
) -> TransitionAmplitude:
    """Sum of time-ordered matrix products over all enumerated paths.

    Later moves multiply on the left; applied to t(1, 0) the reflecting
    result reproduces the walk amplitudes at (n, tau).  Paths are summed in
    enumeration (lexicographic) order.
    """
    paths = enumerate_paths(n, tau, boundary)
    mats = {
        DOWN: (coin.a, coin.b, 0.0 + 0.0j, 0.0 + 0.0j),
        UP: (0.0 + 0.0j, 0.0 + 0.0j, coin.c, coin.d),
        UP_BOUNDARY: (0.0 + 0.0j, 0.0 + 0.0j, boundary_coin.c, boundary_coin.d),
    }
    total = (0.0 + 0.0j,) * 4
    for path in paths:
        prod = (1.0 + 0.0j, 0.0 + 0.0j, 0.0 + 0.0j, 1.0 + 0.0j)
        for label in path:
            prod = _mul2(mats[label], prod)
        total = tuple(t + p for t, p in zip(total, prod))
    xi = np.array([[total[0], total[1]], [total[2], total[3]]], dtype=np.complex128)
    return TransitionAmplitude(xi, n, tau, boundary)


def pqrs_coefficients(
    t: TransitionAmplitude, boundary_coin: Coin
) -> tuple[complex, complex]:
    """Components of Xi along Q~ = [[0,0],[c~,d~]] and R~ = [[c~,d~],[0,0]].

    Coefficients are trace inner products b_q = Tr(Q~^dag Xi) and
    b_r = Tr(R~^dag Xi).  For every path product with tau >= 1 these two
    components reconstruct Xi exactly; the tau = 0 identity is the one
    amplitude outside their span.
    """
    ct, dt = boundary_coin.c, boundary_coin.d
    m = t.xi
    b_q = np.conj(ct) * m[1, 0] + np.conj(dt) * m[1, 1]
    b_r = np.conj(ct) * m[0, 0] + np.conj(dt) * m[0, 1]
    return complex(b_q), complex(b_r)


def pqrs_coefficient_series(
    n: int,
    tau_max: int,
    coin: Coin,
    boundary_coin: Coin,
    boundary: str = "reflecting",
) -> tuple[np.ndarray, np.ndarray]:
    """Arrays of b_q and b_r coefficients for tau = 0 .. tau_max.

    At n = 0 the tau = 0 entry is set to zero: the identity amplitude lies
    outside the Q~/R~ span, and the coefficient recursion between sites
    holds with this convention (the up-move channel is instead seeded by the
    formal constant 1/d, see b_gf_closed).
    """
    _validate(n, tau_max, boundary)
    b_q = np.zeros(tau_max + 1, dtype=np.complex128)
    b_r = np.zeros(tau_max + 1, dtype=np.complex128)
    for tau in range(n % 2, tau_max + 1, 2):
        if n > tau or (n == 0 and tau == 0):
            continue
        t = transition_amplitude(n, tau, coin, boundary_coin, boundary)
        b_q[tau], b_r[tau] = pqrs_coefficients(t, boundary_coin)
    return b_q, b_r


def pqrs_residual(t: TransitionAmplitude, boundary_coin: Coin) -> float:
    """Max entrywise remainder of Xi after removing its Q~ and R~ parts.

    Equals the size of the components along P~ and S~, which vanish for all
    path sums with tau >= 1.
    """
    ct, dt = boundary_coin.c, boundary_coin.d
    b_q, b_r = pqrs_coefficients(t, boundary_coin)
    q_mat = np.array([[0.0, 0.0], [ct, dt]], dtype=np.complex128)
    r_mat = np.array([[ct, dt], [0.0, 0.0]], dtype=np.complex128)
    return float(np.max(np.abs(t.xi - b_q * q_mat - b_r * r_mat)))
