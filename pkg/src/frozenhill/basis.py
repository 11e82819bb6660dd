"""Riesz-basis diagnostics for the two-sided sine system {sin((2n+alpha)pi x)}.

The infinite-dimensional basis property is probed through growing Gram
truncations: the extreme eigenvalues of the (2N+1)x(2N+1) Gram matrix bound
the frame constants of the truncated system, and their stabilisation as N
grows is the desk-scale proxy for two-sided frame bounds.  Integer alpha
degenerates the system (rows n and -n become proportional) and drives the
lower bound to zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import PI, phi, simpson_weights, sinc_entire
from .errors import FrozenHillError

_QUAD_CHECK_N = 2048
_QUAD_CHECK_TOL = 1e-10


@dataclass(frozen=True)
class GramTruncation:
    """Hermitian Gram matrix of sin((2n+alpha)pi x), n = -N..N, on L2(0, 1)."""

    alpha: complex
    n_half: int
    matrix: np.ndarray

    def __post_init__(self):
        arr = np.ascontiguousarray(self.matrix, dtype=complex)
        arr.setflags(write=False)
        object.__setattr__(self, "matrix", arr)


@dataclass(frozen=True)
class RieszRow:
    n_half: int
    lower: float
    upper: float
    condition: float


@dataclass(frozen=True)
class RieszReport:
    alpha: complex
    rows: tuple
    lower_nonincreasing: bool
    upper_nondecreasing: bool


def _gram_entries(alpha: complex, n_half: int) -> np.ndarray:
    """Closed-form entries via I(u, v) = [sinc((u-v)pi) - sinc((u+v)pi)] / 2."""
    ns = np.arange(-n_half, n_half + 1)
    u = 2.0 * ns + complex(alpha)  # row frequencies
    v = 2.0 * ns + np.conj(complex(alpha))  # conjugated column frequencies
    diff = u[:, None] - v[None, :]
    summ = u[:, None] + v[None, :]
    return 0.5 * (sinc_entire(PI * diff) - sinc_entire(PI * summ))


def _quadrature_entry(alpha: complex, m: int, n: int) -> complex:
    xs = np.linspace(0.0, 1.0, _QUAD_CHECK_N + 1)
    wts = simpson_weights(_QUAD_CHECK_N) / _QUAD_CHECK_N
    fm = np.sin((2 * m + alpha) * PI * xs)
    fn = np.sin((2 * n + alpha) * PI * xs)
    return complex(np.dot(wts, fm * np.conj(fn)))


def gram_matrix(alpha: complex, n_half: int, cross_check: bool = True) -> GramTruncation:
    """Assemble the Gram truncation; optionally verify a central block by quadrature."""
    alpha = complex(alpha)
    g = _gram_entries(alpha, n_half)
    if cross_check:
        lo = max(-2, -n_half)
        hi = min(2, n_half)
        for m in range(lo, hi + 1):
            for n in range(lo, hi + 1):
                closed = g[m + n_half, n + n_half]
                quad = _quadrature_entry(alpha, m, n)
                if abs(closed - quad) > _QUAD_CHECK_TOL:
                    raise FrozenHillError(
                        f"Gram closed form and quadrature disagree at ({m},{n}): "
                        f"{abs(closed - quad):.3e}"
                    )
    return GramTruncation(alpha=alpha, n_half=n_half, matrix=g)


def frame_bounds(alpha: complex, n_half: int) -> tuple[float, float]:
    """Extreme eigenvalues of the Gram truncation: the truncated frame constants."""
    g = gram_matrix(alpha, n_half, cross_check=False).matrix
    herm = (g + g.conj().T) / 2.0
    eigs = np.linalg.eigvalsh(herm)
    return float(eigs[0]), float(eigs[-1])


def riesz_report(alpha: complex, n_list) -> RieszReport:
    """Frame bounds across nested truncations with interlacing diagnostics."""
    rows = []
    for n_half in n_list:
        lower, upper = frame_bounds(alpha, n_half)
        cond = upper / lower if lower > 0 else float("inf")
        rows.append(RieszRow(n_half=int(n_half), lower=lower, upper=upper, condition=cond))
    lowers = [r.lower for r in rows]
    uppers = [r.upper for r in rows]
    return RieszReport(
        alpha=complex(alpha),
        rows=tuple(rows),
        lower_nonincreasing=all(b <= a + 1e-12 for a, b in zip(lowers, lowers[1:])),
        upper_nondecreasing=all(b >= a - 1e-12 for a, b in zip(uppers, uppers[1:])),
    )


def diagonal_entry(alpha: complex, n: int) -> complex:
    """Closed-form G_nn = 1/2 - sin(2(2n+alpha)pi)/(4(2n+alpha)pi) for real alpha."""
    freq = 2 * n + complex(alpha)
    return 0.5 - 0.5 * complex(phi(2 * PI * freq, 1.0))
