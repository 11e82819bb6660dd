"""Inverse solver: potential reconstruction from one or two spectra.

The pipeline is always: rebuild Delta from its zeros as the ratio
Delta0(lambda) * prod (lambda_n - lambda)/(lambda_n^0 - lambda) truncated at
n_trunc, read off the sine coefficients of the kernel w by sampling at
lambda = (pi k)^2, then solve the main functional equation for q.  The
non-degenerate coupling inverts a 2x2 system; the periodic/antiperiodic and
two-spectra cases take an auxiliary operator that pins down the part of the
potential the spectra cannot see.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    PI,
    FrozenConfig,
    Potential,
    Spectrum,
    delta0,
    delta0_d1,
    delta0_d2,
    reference_lambda,
    reference_lambda_array,
    snap_index,
    unshift,
)
from .errors import (
    ConfigError,
    DegenerateCaseError,
    GrowthConditionError,
    InconsistentSpectrumError,
    OperatorError,
    PoleInTailError,
)
from .forward import SineSeries

#: collision tolerance between an evaluation point and a reference zero
_COLLISION_RTOL = 1e-8

#: numerical singularity threshold for I + gamma*K and I + P
_SINGULAR_TOL = 1e-10

#: relative ceiling for degeneration / symmetry / support residuals
_CONSISTENCY_TOL = 1e-6


@dataclass(frozen=True)
class OperatorSpec:
    """Auxiliary operator on sub-interval grid samples.

    kind 'constant' ignores its input and returns a fixed profile (a-priori
    specification of the hidden half of the potential), 'scalar' multiplies
    by a constant, 'matrix' applies a dense matrix to the sample vector.
    """

    kind: str
    domain_length: float
    scalar_value: complex = 0j
    profile: np.ndarray | None = None
    matrix_values: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in ("constant", "scalar", "matrix"):
            raise ConfigError(f"unknown operator kind {self.kind!r}")
        if not (0.0 < self.domain_length <= 1.0):
            raise ConfigError("operator domain length must lie in (0, 1]")
        if self.kind == "constant":
            if self.profile is None:
                raise ConfigError("constant operator needs a sample profile")
            arr = np.ascontiguousarray(self.profile, dtype=complex)
            arr.setflags(write=False)
            object.__setattr__(self, "profile", arr)
        if self.kind == "matrix":
            if self.matrix_values is None:
                raise ConfigError("matrix operator needs a matrix")
            arr = np.ascontiguousarray(self.matrix_values, dtype=complex)
            if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
                raise ConfigError("operator matrix must be square")
            arr.setflags(write=False)
            object.__setattr__(self, "matrix_values", arr)

    @classmethod
    def constant(cls, profile, domain_length: float) -> "OperatorSpec":
        return cls(kind="constant", domain_length=domain_length, profile=np.asarray(profile))

    @classmethod
    def scalar(cls, value: complex, domain_length: float) -> "OperatorSpec":
        return cls(kind="scalar", domain_length=domain_length, scalar_value=complex(value))

    @classmethod
    def matrix(cls, values, domain_length: float) -> "OperatorSpec":
        return cls(kind="matrix", domain_length=domain_length, matrix_values=np.asarray(values))

    def _check_size(self, m: int):
        if self.kind == "constant" and len(self.profile) != m:
            raise ConfigError(
                f"constant operator profile has {len(self.profile)} samples, grid needs {m}"
            )
        if self.kind == "matrix" and self.matrix_values.shape[0] != m:
            raise ConfigError(
                f"operator matrix is {self.matrix_values.shape[0]}x..., grid needs {m}"
            )

    def ensure_invertible(self, coupling: complex, m: int):
        """Reject operators with numerically singular I + coupling*K."""
        self._check_size(m)
        if self.kind == "scalar":
            if abs(1.0 + coupling * self.scalar_value) <= _SINGULAR_TOL:
                raise OperatorError(
                    f"I + ({coupling})*K is singular for scalar K = {self.scalar_value}"
                )
        elif self.kind == "matrix":
            shifted = np.eye(m, dtype=complex) + coupling * self.matrix_values
            smin = np.linalg.svd(shifted, compute_uv=False)[-1]
            if smin <= _SINGULAR_TOL:
                raise OperatorError(
                    f"I + ({coupling})*K has smallest singular value {smin:.3e}"
                )
        # constant K: I + coupling*K is an invertible affine map, nothing to check

    def apply(self, f: np.ndarray) -> np.ndarray:
        self._check_size(len(f))
        if self.kind == "constant":
            return self.profile.copy()
        if self.kind == "scalar":
            return self.scalar_value * np.asarray(f, dtype=complex)
        return self.matrix_values @ np.asarray(f, dtype=complex)

    def solve_shifted(self, coupling: complex, rhs: np.ndarray) -> np.ndarray:
        """Solve (I + coupling*K) u = rhs."""
        rhs = np.asarray(rhs, dtype=complex)
        self._check_size(len(rhs))
        if self.kind == "constant":
            return rhs - coupling * self.profile
        if self.kind == "scalar":
            return rhs / (1.0 + coupling * self.scalar_value)
        shifted = np.eye(len(rhs), dtype=complex) + coupling * self.matrix_values
        return np.linalg.solve(shifted, rhs)


@dataclass(frozen=True)
class TwoSpectra:
    """Periodic (gamma = 1) and antiperiodic (gamma = -1) spectra of one potential."""

    spec0: Spectrum
    spec1: Spectrum
    a: float

    def __post_init__(self):
        if self.spec0.config.gamma != 1:
            raise ConfigError("spec0 must belong to the periodic problem (gamma = 1)")
        if self.spec1.config.gamma != -1:
            raise ConfigError("spec1 must belong to the antiperiodic problem (gamma = -1)")
        if not (0.0 <= self.a <= 1.0):
            raise ConfigError("frozen point a must lie in [0, 1]")


@dataclass(frozen=True)
class GrowthReport:
    """Support check of w0 + w1 on (1-a, 1)."""

    max_violation: float
    scale: float
    passed: bool


def delta_from_spectrum(spec: Spectrum, lam: complex, n_trunc: int) -> complex:
    """Rebuild Delta(lambda) from eigenvalues by the truncated ratio product.

    Delta0(lambda) * prod_{n < n_trunc} (lambda_n - lambda)/(lambda_n^0 - lambda);
    omitted tail factors are exactly 1 in the limit, so truncation cannot
    drift the overall constant.  Evaluation points that collide with a
    reference zero are handled analytically: a matching degenerate eigenvalue
    turns its factor into 1, otherwise the pole is cancelled against the zero
    of Delta0 of the corresponding multiplicity.
    """
    lam = complex(lam)
    if n_trunc < 1 or n_trunc > len(spec):
        raise ConfigError("n_trunc must be between 1 and the spectrum length")
    gamma = spec.config.gamma
    alpha = spec.alpha
    tol = _COLLISION_RTOL * (1.0 + abs(lam))

    refs = reference_lambda_array(n_trunc, alpha)
    lams = spec.values[:n_trunc]
    diff = refs - lam
    colliding = np.abs(diff) <= tol

    z_mult = int(np.count_nonzero(colliding))
    poles = int(np.count_nonzero(colliding & (np.abs(lams - lam) > tol)))

    # A collision beyond the truncation is fatal unless a degenerate head
    # collision already pins the value to zero (then extra reference zeros
    # cannot change it).
    n_scan = max(n_trunc, int(np.sqrt(abs(lam)) / PI) + 3)
    for n in range(n_trunc, n_scan):
        if abs(reference_lambda(n, alpha) - lam) <= tol:
            if z_mult - poles >= 1:
                return 0.0 + 0.0j
            raise PoleInTailError(n)

    if z_mult == 0:
        # eigenvalues stored exactly at their reference make the factor 1
        # identically; complex z/z would leave ~1 ulp of imaginary residue
        ratios = np.where(lams == refs, 1.0 + 0.0j, (lams - lam) / diff)
        return complex(delta0(lam, gamma) * np.prod(ratios))
    if poles < z_mult:
        return 0.0 + 0.0j  # an uncancelled zero of Delta0 survives

    value = 1.0 + 0.0j
    for n in range(n_trunc):
        if colliding[n]:
            value *= lams[n] - lam  # pole factor, paired against a Delta0 zero
        else:
            value *= (lams[n] - lam) / diff[n]
    if poles == 1:
        limit = -delta0_d1(lam, gamma)
    elif poles == 2:
        limit = delta0_d2(lam, gamma)
    else:  # pragma: no cover - reference zeros are at most double
        raise ConfigError("reference zero of multiplicity > 2 encountered")
    return complex(limit * value)


def recover_w(spec: Spectrum, k_terms: int, n_trunc: int) -> SineSeries:
    """Sine coefficients of w read off Delta at the interleaved points (pi k)^2."""
    if k_terms < 1:
        raise ConfigError("k_terms must be positive")
    gamma = spec.config.gamma
    coeffs = np.empty(k_terms, dtype=complex)
    for k in range(1, k_terms + 1):
        lam = (PI * k) ** 2
        coeffs[k - 1] = 2.0 * PI * k * (
            delta0(lam, gamma) - delta_from_spectrum(spec, lam, n_trunc)
        )
    return SineSeries(coeffs)


def check_degeneration(spec: Spectrum, tol: float = 1e-9) -> bool:
    """True iff every odd-indexed eigenvalue sits exactly on its reference."""
    gamma = spec.config.gamma
    if gamma not in (1, -1):
        raise ConfigError("degeneration check applies to gamma = +-1 only")
    for n in range(1, len(spec), 2):
        ref = reference_lambda(n, spec.alpha)
        if abs(spec.values[n] - ref) > tol * (1.0 + abs(ref)):
            return False
    return True


def _symmetry_residual(ws: np.ndarray, gamma: complex) -> float:
    sign = 1.0 if gamma == 1 else -1.0
    return float(np.max(np.abs(ws - sign * ws[::-1])))


def algorithm1(
    spec: Spectrum,
    config: FrozenConfig,
    k_terms: int,
    n_trunc: int,
    grid_n: int = 1024,
) -> Potential:
    """One-spectrum reconstruction for non-degenerate coupling (gamma != +-1).

    Recovers w, solves the 2x2 main-equation system
    q_a(x) = (gamma w(x) - w(1-x)) / (gamma^3 - gamma) and transports the
    frozen point back from the origin.
    """
    gamma = config.gamma
    if gamma in (1, -1):
        raise DegenerateCaseError(
            "gamma = +-1 leaves half the spectrum uninformative; use algorithm2 "
            "with an auxiliary operator"
        )
    w = recover_w(spec, k_terms, n_trunc)
    ws = w.evaluate(np.linspace(0.0, 1.0, grid_n + 1))
    q_a = (gamma * ws - ws[::-1]) / (gamma**3 - gamma)
    return unshift(Potential(q_a), config)


def algorithm2(
    spec: Spectrum,
    config: FrozenConfig,
    k_op: OperatorSpec,
    k_terms: int,
    n_trunc: int,
    grid_n: int = 1024,
) -> Potential:
    """One-spectrum reconstruction for gamma = +-1 given the operator K.

    K couples the two halves of the shifted potential:
    q_a(1/2 - x) = K(q_a(1/2 + x)).  With bijective I + gamma*K the hidden
    half follows from w via q_a(1/2-x) = K((I + gamma K)^{-1}(gamma w(1/2-x))).
    """
    gamma = config.gamma
    if gamma not in (1, -1):
        raise ConfigError("algorithm2 requires gamma = 1 or gamma = -1")
    if grid_n % 2 != 0:
        raise ConfigError("grid_n must be even")
    if abs(k_op.domain_length - 0.5) > 1e-12:
        raise ConfigError("operator for the one-spectrum problem acts on (0, 1/2)")
    if not check_degeneration(spec):
        raise InconsistentSpectrumError(
            "odd-indexed eigenvalues violate the exact degeneration required for gamma = +-1"
        )
    half = grid_n // 2
    k_op.ensure_invertible(gamma, half + 1)

    w = recover_w(spec, k_terms, n_trunc)
    ws = w.evaluate(np.linspace(0.0, 1.0, grid_n + 1))
    asym = _symmetry_residual(ws, gamma)
    if asym > _CONSISTENCY_TOL * max(1.0, float(np.max(np.abs(ws)))):
        raise InconsistentSpectrumError(
            f"recovered w violates its gamma = {gamma} symmetry by {asym:.3e}"
        )

    v = gamma * ws[half::-1]  # gamma * w(1/2 - x) on the half grid
    u = k_op.solve_shifted(gamma, v)
    left = k_op.apply(u)  # q_a(1/2 - x)
    q_a = np.empty(grid_n + 1, dtype=complex)
    q_a[: half + 1] = left[::-1]
    idx = np.arange(1, half + 1)
    q_a[half + idx] = v[idx] - gamma * left[idx]
    return unshift(Potential(q_a), config)


def algorithm3(two: TwoSpectra, k_terms: int, n_trunc: int, grid_n: int = 1024) -> Potential:
    """Two-spectra reconstruction at a frozen endpoint (a = 0 or a = 1).

    Both kernels are recovered independently and the potential is their mean,
    q = (w0 + w1)/2; for a = 1 the result is the mirror image of the a = 0
    reconstruction.
    """
    if two.a not in (0.0, 1.0):
        raise ConfigError("algorithm3 handles the endpoint cases a = 0 and a = 1")
    for spec in (two.spec0, two.spec1):
        if not check_degeneration(spec):
            raise InconsistentSpectrumError(
                "two-spectra data must carry exactly degenerate odd-indexed eigenvalues"
            )
    xs = np.linspace(0.0, 1.0, grid_n + 1)
    w0 = recover_w(two.spec0, k_terms, n_trunc).evaluate(xs)
    w1 = recover_w(two.spec1, k_terms, n_trunc).evaluate(xs)
    q = (w0 + w1) / 2.0
    if two.a == 1.0:
        q = q[::-1].copy()
    return Potential(q)


def check_growth(two: TwoSpectra, n_trunc: int, grid_n: int = 512) -> GrowthReport:
    """Support test of w0 + w1 on (1-a, 1), the computable growth condition.

    The sum kernel is rebuilt through Delta0 + Delta1 and must vanish beyond
    x = 1 - a for the pair of spectra to come from a common potential.  For
    a > 1/2 the mirrored problem applies and the window becomes (a, 1); both
    cases are the nodes right of max(a, 1-a).
    """
    xs = np.linspace(0.0, 1.0, grid_n + 1)
    k_terms = n_trunc
    coeffs = np.empty(k_terms, dtype=complex)
    for k in range(1, k_terms + 1):
        lam = (PI * k) ** 2
        total = delta_from_spectrum(two.spec0, lam, n_trunc) + delta_from_spectrum(
            two.spec1, lam, n_trunc
        )
        coeffs[k - 1] = 2.0 * PI * k * (4.0 - total)
    wsum = SineSeries(coeffs).evaluate(xs)
    scale = float(np.max(np.abs(wsum)))
    j_start = snap_index(max(two.a, 1.0 - two.a), grid_n)
    window = wsum[j_start + 1 : grid_n]
    viol = float(np.max(np.abs(window))) if len(window) else 0.0
    return GrowthReport(
        max_violation=viol, scale=scale, passed=viol <= _CONSISTENCY_TOL * max(1.0, scale)
    )


def algorithm4(
    two: TwoSpectra,
    p_op: OperatorSpec,
    k_terms: int,
    n_trunc: int,
    grid_n: int = 1024,
) -> Potential:
    """Two-spectra reconstruction for an interior frozen point a in (0, 1/2].

    The operator P pins the potential left of the frozen point through
    q(a - x) = P(q(a + x)); the rest follows from w0 on (0, 2a) and from the
    p-independent mean (w0 + w1)/2 on (2a, 1).  Callers with a > 1/2 should
    mirror the problem first.
    """
    a = two.a
    if not (0.0 < a <= 0.5):
        raise ConfigError("algorithm4 requires a in (0, 1/2]; mirror the problem for a > 1/2")
    j_a = snap_index(a, grid_n)
    for spec in (two.spec0, two.spec1):
        if not check_degeneration(spec):
            raise InconsistentSpectrumError(
                "two-spectra data must carry exactly degenerate odd-indexed eigenvalues"
            )
    if abs(p_op.domain_length - a) > 1e-12:
        raise ConfigError(f"operator domain length {p_op.domain_length} must equal a = {a}")
    p_op.ensure_invertible(1.0, j_a + 1)

    xs = np.linspace(0.0, 1.0, grid_n + 1)
    w0 = recover_w(two.spec0, k_terms, n_trunc).evaluate(xs)
    w1 = recover_w(two.spec1, k_terms, n_trunc).evaluate(xs)

    wsum = w0 + w1
    window = wsum[grid_n - j_a + 1 : grid_n]
    viol = float(np.max(np.abs(window))) if len(window) else 0.0
    if viol > _CONSISTENCY_TOL * max(1.0, float(np.max(np.abs(wsum)))):
        raise GrowthConditionError(
            f"w0 + w1 reaches {viol:.3e} on (1-a, 1); the spectra do not share a potential"
        )

    q = np.empty(grid_n + 1, dtype=complex)
    rhs = w0[: j_a + 1]
    u = p_op.solve_shifted(1.0, rhs)
    left = p_op.apply(u)  # q(a - x)
    q[: j_a + 1] = left[::-1]
    idx = np.arange(1, j_a + 1)
    q[j_a + idx] = rhs[idx] - left[idx]
    tail = np.arange(2 * j_a + 1, grid_n + 1)
    q[tail] = (w0[tail - j_a] + w1[tail - j_a]) / 2.0
    return Potential(q)


def isospectral_family(
    spec: Spectrum,
    config: FrozenConfig,
    p_list,
    k_terms: int,
    n_trunc: int,
    grid_n: int = 1024,
) -> list[Potential]:
    """All-iso-spectral construction: one potential per constant-operator profile."""
    members = []
    for p in p_list:
        k_op = OperatorSpec.constant(np.asarray(p, dtype=complex), 0.5)
        members.append(algorithm2(spec, config, k_op, k_terms, n_trunc, grid_n))
    return members


def isobispectral_family(
    two: TwoSpectra,
    p_list,
    k_terms: int,
    n_trunc: int,
    grid_n: int = 1024,
) -> list[Potential]:
    """Iso-bispectral potentials sharing both spectra, one per profile on (0, a)."""
    members = []
    for p in p_list:
        p_op = OperatorSpec.constant(np.asarray(p, dtype=complex), two.a)
        members.append(algorithm4(two, p_op, k_terms, n_trunc, grid_n))
    return members
