"""Dense linear algebra on small real matrices.

Matrices are plain ``numpy`` arrays of shape ``(d, d)``; the batched helpers
accept stacks of shape ``(..., d, d)``. Exterior powers use the basis
``e_I = e_{i1} ^ ... ^ e_{ik}`` over strictly increasing index tuples ``I`` in
lexicographic order, so ``exterior_power(A, k)[I, J]`` is the minor of ``A``
with rows ``I`` and columns ``J``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Sequence

import numpy as np

from .errors import InvalidInputError, NumericalFailureError, PreconditionError

DEFAULT_PROXIMAL_TOL = 1e-8
EIGVEC_RESIDUAL_TOL = 1e-10
# leading moduli closer than this are treated as exactly equal (rotations, +-lambda pairs)
_EQUAL_MODULI_RTOL = 1e-12


def as_matrix(A, name: str = "matrix") -> np.ndarray:
    """Validate and return ``A`` as a square float array with finite entries."""
    M = np.array(A, dtype=float)
    if M.ndim == 0:
        M = M.reshape(1, 1)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InvalidInputError(f"{name} must be square, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise InvalidInputError(f"{name} has non-finite entries")
    return M


def is_invertible(A: np.ndarray, rtol: float = 1e-12) -> bool:
    """``|det A| > rtol * ||A||^d``; the scale-free invertibility test for generators."""
    norm = np.linalg.norm(A, 2)
    if norm == 0:
        return False
    return abs(np.linalg.det(A / norm)) > rtol


def singular_values(A) -> np.ndarray:
    """Singular values of ``A`` in non-increasing order."""
    return np.linalg.svd(as_matrix(A), compute_uv=False)


def operator_norm(A) -> float:
    return float(singular_values(A)[0])


def spectral_radius(A) -> float:
    return float(np.max(np.abs(np.linalg.eigvals(as_matrix(A)))))


@lru_cache(maxsize=None)
def increasing_tuples(d: int, k: int) -> np.ndarray:
    """All strictly increasing ``k``-tuples from ``range(d)``, lexicographically sorted."""
    return np.array(list(itertools.combinations(range(d), k)), dtype=np.intp).reshape(-1, k)


def exterior_power(A, k: int) -> np.ndarray:
    """Matrix of the ``k``-th exterior power of ``A`` (also works on stacks)."""
    A = np.asarray(A, dtype=float)
    d = A.shape[-1]
    if A.shape[-2] != d:
        raise InvalidInputError(f"exterior power needs square matrices, got {A.shape}")
    if int(k) != k or not 1 <= k <= d:
        raise InvalidInputError(f"exterior power degree must lie in 1..{d}, got {k}")
    if k == 1:
        return A.copy()
    idx = increasing_tuples(d, k)
    rows = idx[:, None, :, None]
    cols = idx[None, :, None, :]
    minors = A[..., rows, cols]
    return np.linalg.det(minors)


def tensor_product(maps: Sequence) -> np.ndarray:
    """Kronecker product ``A_1 (x) ... (x) A_m`` in the basis ``e_{j1} (x) ... (x) e_{jm}``."""
    maps = list(maps)
    if not maps:
        raise InvalidInputError("tensor product of an empty list")
    return reduce(np.kron, (as_matrix(M) for M in maps))


@dataclass(frozen=True)
class ProximalityReport:
    """Outcome of :func:`is_proximal`.

    ``status`` is ``"proximal"``, ``"not-proximal"`` or ``"undetermined"`` (the
    two leading moduli agree to within the relative tolerance band).
    """

    status: str
    leading_modulus: float
    gap_ratio: float
    leading_vector: np.ndarray | None
    certified_by: str

    @property
    def proximal(self) -> bool:
        return self.status == "proximal"

    def __bool__(self):
        return self.proximal


def _leading_eigenvector(A: np.ndarray, vals: np.ndarray, vecs: np.ndarray) -> np.ndarray:
    i = int(np.argmax(np.abs(vals)))
    lam = vals[i].real
    v = vecs[:, i]
    # a simple dominant eigenvalue of a real matrix is real: drop the phase
    v = v * np.exp(-1j * np.angle(v[np.argmax(np.abs(v))]))
    v = v.real
    v = v / np.linalg.norm(v)
    scale = max(1.0, np.linalg.norm(A, 2))
    d = A.shape[0]
    for _ in range(8):
        resid = np.linalg.norm(A @ v - lam * v) / scale
        if resid < EIGVEC_RESIDUAL_TOL:
            break
        # inverse iteration with a slightly shifted eigenvalue
        shift = lam * (1 + 1e-12) + 1e-14 * scale
        try:
            v = np.linalg.solve(A - shift * np.eye(d), v)
        except np.linalg.LinAlgError:
            break
        v = v / np.linalg.norm(v)
        lam = float(v @ A @ v)
    resid = np.linalg.norm(A @ v - lam * v) / scale
    if resid >= EIGVEC_RESIDUAL_TOL:
        raise NumericalFailureError(f"leading eigenvector residual {resid:.3e}", residual=resid)
    j = int(np.argmax(np.abs(v)))
    # fixed orientation: largest-magnitude coordinate positive
    return v if v[j] > 0 else -v


def is_proximal(A, tol: float = DEFAULT_PROXIMAL_TOL) -> ProximalityReport:
    """Decide whether ``A`` has a simple eigenvalue of strictly maximal modulus.

    If ``rho(A)**2 > sigma_1(A) * sigma_2(A)`` the answer is certified from the
    singular values alone. Otherwise the sorted eigenvalue moduli are compared
    with a relative margin ``tol``.
    """
    A = as_matrix(A)
    d = A.shape[0]
    vals, vecs = np.linalg.eig(A)
    rho = float(np.max(np.abs(vals)))
    if d == 1:
        return ProximalityReport("proximal", rho, np.inf, np.ones(1), "spectral-gap-criterion")
    sv = np.linalg.svd(A, compute_uv=False)
    denom = sv[0] * sv[1]
    gap_ratio = rho**2 / denom if denom > 0 else np.inf
    if gap_ratio > 1 + tol:
        return ProximalityReport(
            "proximal", rho, gap_ratio, _leading_eigenvector(A, vals, vecs), "spectral-gap-criterion"
        )
    moduli = np.sort(np.abs(vals))[::-1]
    if moduli[0] > (1 + tol) * moduli[1]:
        status = "proximal"
    elif moduli[0] <= (1 + _EQUAL_MODULI_RTOL) * moduli[1]:
        status = "not-proximal"
    else:
        status = "undetermined"
    vec = _leading_eigenvector(A, vals, vecs) if status == "proximal" else None
    return ProximalityReport(status, rho, gap_ratio, vec, "eigen-decomposition")


def leading_spaces(A, tol: float = DEFAULT_PROXIMAL_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Leading eigendirection and the normal of the complementary invariant hyperplane.

    Returns ``(v_plus, normal)``: ``v_plus`` spans the leading eigenspace and
    ``V_minus = {x : normal . x = 0}`` is the ``A``-invariant complement, obtained
    from the leading eigenvector of ``A.T``.
    """
    A = as_matrix(A)
    report = is_proximal(A, tol)
    if not report.proximal:
        raise PreconditionError(f"map is not proximal (status {report.status})")
    v_plus = report.leading_vector
    At = A.T
    vals, vecs = np.linalg.eig(At)
    normal = _leading_eigenvector(At, vals, vecs)
    if abs(float(v_plus @ normal)) <= 1e-10:
        raise NumericalFailureError("leading direction lies in the complementary hyperplane")
    return v_plus, normal


def principal_angle_sine(B1: np.ndarray, B2: np.ndarray) -> float:
    """Sine of the largest principal angle between two subspaces given orthonormal bases.

    Subspaces of different dimension are at distance 1.
    """
    if B1.shape != B2.shape:
        return 1.0
    if B1.shape[1] == 1:
        u, v = B1[:, 0], B2[:, 0]
        r = v - (u @ v) * u
        return min(1.0, math.sqrt(float(r @ r)))
    resid = B2 - B1 @ (B1.T @ B2)
    return float(min(1.0, np.linalg.norm(resid, 2)))
