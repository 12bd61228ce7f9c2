"""Steady states and time evolution of the covariance matrix.

The covariance matrix of a linear Gaussian network obeys

    dV/dt = A V + V A^T + N,

with drift A and diffusion N from :mod:`entflow.network`.  Two independent
solvers compute the steady state:

* a spectral solver that diagonalizes A and applies the closed-form kernel
  G_jk = -1/(alpha_j + alpha_k) in the eigenbasis, and
* a vectorized solver that solves (I (x) A + A (x) I) vec(V) = -vec(N)
  directly.

The spectral route is fast but requires a well-conditioned eigenbasis.  The
cascaded chain is exactly non-diagonalizable whenever three or more interior
nodes are identical (the one-way couplings chain equal diagonal blocks into
a single Jordan block), so the spectral solver silently falls back to the
vectorized one when the eigenvector condition number or the reconstruction
error is out of bounds.  Every returned matrix is checked against the
residual contract ||A V + V A^T + N||_max <= 1e-8 * max(1, ||N||_max).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    EigenFailureError,
    IllConditionedError,
    ResidualTooLargeError,
    SingularSystemError,
    UnstableError,
)

# |spectral abscissa| below this is reported Marginal rather than stable.
STABILITY_MARGIN = 1e-9
# Eigenbasis acceptance gates for the spectral route.
CONDITION_LIMIT = 1e8
RECONSTRUCTION_RTOL = 1e-10
# |alpha_j + alpha_k| below this uses the t-linear kernel limit.
DEGENERATE_KERNEL_TOL = 1e-12
# Discarded imaginary parts must be below this, relative to the result.
IMAG_RESIDUE_RTOL = 1e-10
# Residual contract shared by both solvers.
RESIDUAL_RTOL = 1e-8


@dataclass(frozen=True)
class StabilityReport:
    """Stability classification of a drift matrix."""

    spectral_abscissa: float
    stable: bool
    marginal: bool
    margin_tolerance: float = STABILITY_MARGIN


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigendecomposition A = P diag(alpha) P^-1 with quality diagnostics."""

    eigenvalues: np.ndarray
    p: np.ndarray
    p_inv: np.ndarray
    condition_number: float
    reconstruction_error: float

    def accepted(
        self,
        condition_limit: float = CONDITION_LIMIT,
        reconstruction_rtol: float = RECONSTRUCTION_RTOL,
    ) -> bool:
        """Whether the eigenbasis is trustworthy for spectral formulas."""
        return (
            self.condition_number <= condition_limit
            and self.reconstruction_error <= reconstruction_rtol
        )


def spectral_abscissa(a: np.ndarray) -> float:
    """Largest real part of the eigenvalues of ``a``."""
    try:
        eigs = np.linalg.eigvals(np.asarray(a, dtype=float))
    except np.linalg.LinAlgError as exc:
        raise EigenFailureError(f"eigenvalue computation failed: {exc}") from exc
    return float(eigs.real.max())


def stability_report(a: np.ndarray, margin: float = STABILITY_MARGIN) -> StabilityReport:
    """Classify ``a`` as stable, marginal, or unstable.

    Stable means the abscissa is below -margin; values within +-margin of
    zero are marginal (reported, never treated as stable).
    """
    abscissa = spectral_abscissa(a)
    marginal = abs(abscissa) < margin
    return StabilityReport(
        spectral_abscissa=abscissa,
        stable=(abscissa < -margin),
        marginal=marginal,
        margin_tolerance=margin,
    )


def spectral_decomposition(a: np.ndarray) -> SpectralDecomposition:
    """Dense eigendecomposition of ``a`` with acceptance diagnostics.

    Never raises on poor conditioning; callers decide via ``accepted()``.
    """
    a = np.asarray(a, dtype=float)
    try:
        eigenvalues, p = np.linalg.eig(a)
        p_inv = np.linalg.inv(p)
        condition = float(np.linalg.cond(p))
    except np.linalg.LinAlgError as exc:
        raise EigenFailureError(f"eigendecomposition failed: {exc}") from exc
    scale = float(np.linalg.norm(a))
    if scale == 0.0:
        recon = 0.0
    else:
        recon = float(
            np.linalg.norm(a - (p * eigenvalues) @ p_inv) / scale
        )
    return SpectralDecomposition(
        eigenvalues=eigenvalues,
        p=p,
        p_inv=p_inv,
        condition_number=condition,
        reconstruction_error=recon,
    )


def _residual(a: np.ndarray, v: np.ndarray, noise: np.ndarray) -> float:
    return float(np.abs(a @ v + v @ a.T + noise).max())


def _check_residual(a: np.ndarray, v: np.ndarray, noise: np.ndarray, label: str) -> None:
    limit = RESIDUAL_RTOL * max(1.0, float(np.abs(noise).max()))
    res = _residual(a, v, noise)
    if res > limit:
        raise ResidualTooLargeError(
            f"{label} steady state violates the residual contract: "
            f"{res:.3e} > {limit:.3e}"
        )


def _discard_imaginary(v: np.ndarray, label: str) -> np.ndarray:
    real = v.real
    imag = float(np.abs(v.imag).max()) if np.iscomplexobj(v) else 0.0
    limit = IMAG_RESIDUE_RTOL * max(1.0, float(np.abs(real).max()))
    if imag > limit:
        raise ResidualTooLargeError(
            f"{label}: imaginary residue {imag:.3e} exceeds {limit:.3e}"
        )
    return np.array(real, dtype=float)


def solve_steady_state_vectorized(a: np.ndarray, noise: np.ndarray) -> np.ndarray:
    """Steady state via the Kronecker-vectorized linear system.

    Solves (I (x) A + A (x) I) vec(V) = -vec(N) with a dense solve.  Slower
    than the spectral route (dimension squared unknowns) but indifferent to
    defective eigenstructure; it is also the oracle the spectral solver is
    validated against.

    The solve runs in the shifted variable D = V - I with right-hand side
    -(N + A + A^T), followed by one step of iterative refinement.  The
    shift costs nothing for generic inputs but is exact for networks whose
    steady state is the vacuum (the right-hand side vanishes identically),
    which keeps round-off from masquerading as entanglement in sweeps.
    """
    a = np.asarray(a, dtype=float)
    noise = np.asarray(noise, dtype=float)
    dim = a.shape[0]
    eye = np.eye(dim)
    system = np.kron(eye, a) + np.kron(a, eye)
    rhs = -(noise + a + a.T)
    try:
        with warnings.catch_warnings():
            # an exactly singular system surfaces as a zero-pivot warning
            # followed by non-finite output, turned into an error below
            warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
            factors = scipy.linalg.lu_factor(system, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(
            f"vectorized steady-state system is singular: {exc}"
        ) from exc
    deviation = scipy.linalg.lu_solve(
        factors, rhs.flatten(order="F"), check_finite=False
    ).reshape((dim, dim), order="F")
    if not np.isfinite(deviation).all():
        raise SingularSystemError(
            "vectorized steady-state system is singular (non-finite solution)"
        )
    correction = rhs - (a @ deviation + deviation @ a.T)
    deviation += scipy.linalg.lu_solve(
        factors, correction.flatten(order="F"), check_finite=False
    ).reshape((dim, dim), order="F")
    if not np.isfinite(deviation).all():
        raise SingularSystemError(
            "vectorized steady-state system is singular (non-finite solution)"
        )
    v = eye + deviation
    v = (v + v.T) / 2.0
    _check_residual(a, v, noise, "vectorized")
    return v


def solve_steady_state_spectral(a: np.ndarray, noise: np.ndarray) -> np.ndarray:
    """Steady state via the eigenbasis kernel, with automatic fallback.

    In the eigenbasis of A the fixed point is V = P [G o M] P^T with
    M = P^-1 N P^-T and G_jk = -1/(alpha_j + alpha_k); the result is
    symmetrized and its imaginary round-off discarded after a magnitude
    check.  When the eigenbasis fails its acceptance gates the vectorized
    solver is used instead, transparently.

    Raises UnstableError when the spectral abscissa is >= 0 (no decaying
    fixed point), and ResidualTooLargeError when the computed matrix fails
    the residual contract.
    """
    a = np.asarray(a, dtype=float)
    noise = np.asarray(noise, dtype=float)
    if spectral_abscissa(a) >= 0.0:
        raise UnstableError(
            "dynamics has no decaying steady state (spectral abscissa >= 0)"
        )
    decomp = spectral_decomposition(a)
    if not decomp.accepted():
        return solve_steady_state_vectorized(a, noise)
    alpha = decomp.eigenvalues
    kernel = -1.0 / (alpha[:, None] + alpha[None, :])
    transformed = decomp.p_inv @ noise @ decomp.p_inv.T
    v = decomp.p @ (kernel * transformed) @ decomp.p.T
    v = _discard_imaginary(v, "spectral")
    v = (v + v.T) / 2.0
    _check_residual(a, v, noise, "spectral")
    return v


def evolve_covariance(
    a: np.ndarray, noise: np.ndarray, v0: np.ndarray, t: float
) -> np.ndarray:
    """Covariance matrix at time ``t`` starting from ``v0`` at t = 0.

    Uses the eigenbasis kernels

        V(t) = P [K(t) o M_N + E(t) o M_0] P^T,
        E_jk = exp((alpha_j + alpha_k) t),
        K_jk = (E_jk - 1)/(alpha_j + alpha_k)   (or t when the sum vanishes),

    which solve the differential equation exactly for any diagonalizable A,
    stable or not.  When the eigenbasis fails its acceptance gates the same
    unique solution is computed as V(t) = Vs + e^{At} (V0 - Vs) e^{A^T t}
    around the algebraic steady state Vs from the vectorized solver;
    IllConditionedError is raised only when that route is closed too
    (defective A with a singular steady-state system).
    """
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    a = np.asarray(a, dtype=float)
    noise = np.asarray(noise, dtype=float)
    v0 = np.asarray(v0, dtype=float)
    if t == 0:
        return v0.copy()

    decomp = spectral_decomposition(a)
    if decomp.accepted():
        alpha_sum = decomp.eigenvalues[:, None] + decomp.eigenvalues[None, :]
        growth = np.exp(alpha_sum * t)
        degenerate = np.abs(alpha_sum) < DEGENERATE_KERNEL_TOL
        safe = np.where(degenerate, 1.0, alpha_sum)
        kernel = np.where(degenerate, t, (growth - 1.0) / safe)
        m_noise = decomp.p_inv @ noise @ decomp.p_inv.T
        m_init = decomp.p_inv @ v0 @ decomp.p_inv.T
        v = decomp.p @ (kernel * m_noise + growth * m_init) @ decomp.p.T
        v = _discard_imaginary(v, "evolution")
        return (v + v.T) / 2.0

    try:
        v_steady = solve_steady_state_vectorized(a, noise)
    except SingularSystemError as exc:
        raise IllConditionedError(
            "eigenbasis rejected (condition number "
            f"{decomp.condition_number:.3e}) and no algebraic steady state "
            "exists to evolve around"
        ) from exc
    propagator = scipy.linalg.expm(a * t)
    v = v_steady + propagator @ (v0 - v_steady) @ propagator.T
    return (v + v.T) / 2.0
