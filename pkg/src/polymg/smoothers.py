"""Polynomial smoothers for SPD systems preconditioned by a diagonal.

Every smoother realizes an error propagation ``e <- p(BA/rho(BA)) e`` for
some polynomial ``p`` with ``p(0) = 1``:

* ``smooth_simple``: damped preconditioned Richardson, ``p = (1 - omega lam)^k``;
* ``smooth_cheb4``: fourth-kind Chebyshev acceleration, ``p = W_k(1-2 lam)/(2k+1)``;
* ``smooth_opt``: the same three-term recurrence with per-step over-relaxation
  weights ``beta_i``, realizing ``p = sum_i ((beta_i - beta_{i+1})/(2i+1)) W_i(1-2 lam)``.

``smooth_cheb4`` is exactly ``smooth_opt`` with all betas equal to one; both
run the same operation sequence, so the equivalence is bitwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "DiagonalSmoother",
    "SmootherConfig",
    "smooth_simple",
    "smooth_cheb4",
    "smooth_opt",
    "apply_smoother",
]


@dataclass(frozen=True)
class DiagonalSmoother:
    """Diagonal preconditioner ``B`` together with its measured ``rho(BA)``.

    ``inverse_diagonal`` holds the entries of ``B`` (for Jacobi,
    ``1/diag(A)``); iterations divide by ``rho_BA`` so the effective
    operator ``(1/rho) B A`` has spectrum in ``(0, 1]``.
    """

    inverse_diagonal: np.ndarray
    rho_BA: float

    def __post_init__(self):
        d = np.asarray(self.inverse_diagonal, dtype=float)
        if d.ndim != 1 or np.any(d <= 0.0):
            raise ValueError("inverse diagonal must be a positive 1-D array")
        object.__setattr__(self, "inverse_diagonal", d)
        if not self.rho_BA > 0.0:
            raise ValueError("rho(BA) must be positive")

    @property
    def n(self) -> int:
        return self.inverse_diagonal.shape[0]


@dataclass(frozen=True)
class SmootherConfig:
    """Selects a smoother variant and its degree.

    ``kind`` is one of ``"simple"``, ``"cheb4"``, ``"opt"``.  ``omega`` is
    required for ``simple``; ``betas`` (length ``k``) for ``opt``.
    """

    kind: str
    k: int
    omega: float | None = None
    betas: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind not in ("simple", "cheb4", "opt"):
            raise ValueError(f"unknown smoother kind {self.kind!r}")
        if self.k < 0:
            raise ValueError("polynomial degree must be nonnegative")
        if self.kind == "simple":
            if self.omega is None or not 0.0 < self.omega < 2.0:
                raise ValueError("simple smoother needs 0 < omega < 2")
        if self.kind == "cheb4" and self.k < 1:
            raise ValueError("cheb4 smoother needs k >= 1")
        if self.kind == "opt":
            if self.betas is None:
                raise ValueError("opt smoother needs its beta array")
            b = np.asarray(self.betas, dtype=float)
            if b.shape != (self.k,):
                raise ValueError("need exactly k betas")
            object.__setattr__(self, "betas", b)

    @classmethod
    def simple(cls, omega: float, k: int) -> "SmootherConfig":
        return cls(kind="simple", k=k, omega=omega)

    @classmethod
    def cheb4(cls, k: int) -> "SmootherConfig":
        return cls(kind="cheb4", k=k)

    @classmethod
    def optimized(cls, betas) -> "SmootherConfig":
        betas = np.asarray(betas, dtype=float)
        return cls(kind="opt", k=len(betas), betas=betas)


def smooth_simple(A, B: DiagonalSmoother, x: np.ndarray, b: np.ndarray,
                  omega: float, k: int) -> np.ndarray:
    """Run ``k`` damped Jacobi steps ``x <- x + (omega/rho) B (b - A x)``."""
    if not 0.0 < omega < 2.0:
        raise ValueError("need 0 < omega < 2")
    if k < 0:
        raise ValueError("step count must be nonnegative")
    x = np.array(x, dtype=float)
    scale = omega / B.rho_BA
    for _ in range(k):
        x = x + scale * (B.inverse_diagonal * (b - A @ x))
    return x


def _cheb4_core(A, B: DiagonalSmoother, x: np.ndarray, b: np.ndarray,
                betas: np.ndarray) -> np.ndarray:
    """Three-term fourth-kind Chebyshev recurrence with over-relaxed updates.

    z_0 = 0, r_0 = b - A x_0, and for i = 1..k:
        z_i = ((2i-3)/(2i+1)) z_{i-1} + ((8i-4)/(2i+1)) (1/rho) B r_{i-1}
        x_i = x_{i-1} + beta_i z_i
        r_i = r_{i-1} - A z_i

    Note r_i tracks b - A (x_{i-1} + z_i); it feeds the recurrence and is
    not the residual of x_i unless beta_i = 1.
    """
    k = len(betas)
    x = np.array(x, dtype=float)
    if k == 0:
        return x
    inv_rho = 1.0 / B.rho_BA
    r = b - A @ x
    z = np.zeros_like(x)
    for i in range(1, k + 1):
        z = ((2 * i - 3) / (2 * i + 1)) * z \
            + ((8 * i - 4) / (2 * i + 1)) * inv_rho * (B.inverse_diagonal * r)
        x = x + betas[i - 1] * z
        if i < k:  # final residual update would be unused
            r = r - A @ z
    return x


def smooth_cheb4(A, B: DiagonalSmoother, x: np.ndarray, b: np.ndarray,
                 k: int) -> np.ndarray:
    """Run the degree-``k`` fourth-kind Chebyshev smoother.

    Error propagation is ``p_k((1/rho) B A)`` with
    ``p_k(lam) = W_k(1 - 2 lam)/(2k+1)``.
    """
    if k < 1:
        raise ValueError("need k >= 1")
    return _cheb4_core(A, B, x, b, np.ones(k))


def smooth_opt(A, B: DiagonalSmoother, x: np.ndarray, b: np.ndarray,
               betas) -> np.ndarray:
    """Run the over-relaxed Chebyshev iteration with the given betas."""
    betas = np.asarray(betas, dtype=float)
    if betas.ndim != 1 or betas.size < 1:
        raise ValueError("betas must be a nonempty 1-D array")
    return _cheb4_core(A, B, x, b, betas)


def apply_smoother(A, B: DiagonalSmoother, x: np.ndarray, b: np.ndarray,
                   cfg: SmootherConfig) -> np.ndarray:
    """Dispatch one application of the configured smoother."""
    if cfg.kind == "simple":
        return smooth_simple(A, B, x, b, cfg.omega, cfg.k)
    if cfg.kind == "cheb4":
        return smooth_cheb4(A, B, x, b, cfg.k)
    return smooth_opt(A, B, x, b, cfg.betas)
