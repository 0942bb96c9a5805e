"""Dense complex linear algebra primitives.

Hermitian eigendecomposition with a fixed phase convention, operator square
roots with support truncation, polar decomposition, Uhlmann fidelity and
Haar sampling. Everything works on plain complex numpy arrays and takes an
explicit ``numpy.random.Generator`` where randomness is involved, so results
are reproducible bit for bit from a seed.
"""

from __future__ import annotations

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .errors import DimMismatchError, NonHermitianError, NonSquareError, NotPositiveError


def dagger(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return a.conj().T


def require_square(a: np.ndarray) -> int:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NonSquareError(f"expected a square matrix, got shape {a.shape}")
    return a.shape[0]


def herm_eig(h: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix with reproducible output.

    Returns ``(w, v)`` with eigenvalues ``w`` ascending and eigenvector
    columns ``v`` phase-fixed so that the largest-magnitude entry of each
    column is real and positive. The input is symmetrized as (H + H†)/2
    first; asymmetry beyond ``tol.herm_gate`` is an error.
    """
    require_square(h)
    asym = np.abs(h - dagger(h)).max() if h.size else 0.0
    if asym > tol.herm_gate:
        raise NonHermitianError(f"matrix is not Hermitian: max |H - H^dag| = {asym:.3e}")
    w, v = np.linalg.eigh((h + dagger(h)) / 2)
    for k in range(v.shape[1]):
        col = v[:, k]
        lead = col[np.argmax(np.abs(col))]
        if abs(lead) > 0:
            v[:, k] = col * (abs(lead) / lead)
    return w, v


def _psd_spectrum(p: np.ndarray, tol: Tolerances) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a PSD matrix with null-space cleanup.

    Eigenvalues below -tol.psd_slack raise NotPositiveError. Eigenvalues
    below the support cutoff d * max(w) * tol.support_rel are zeroed, which
    keeps square roots of rank-deficient operators free of sqrt(eps) noise.
    """
    w, v = herm_eig(p, tol)
    if w.size and w[0] < -tol.psd_slack:
        raise NotPositiveError(f"matrix is not positive semidefinite: min eigenvalue {w[0]:.3e}")
    cutoff = max(0.0, len(w) * (w[-1] if w.size else 0.0) * tol.support_rel)
    w = np.where(w > cutoff, w, 0.0)
    return w, v


def mat_sqrt(p: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Positive square root of a positive semidefinite matrix."""
    w, v = _psd_spectrum(p, tol)
    return (v * np.sqrt(w)) @ dagger(v)


def gen_inv_sqrt(p: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Square root of the generalized (Moore-Penrose) inverse of a PSD matrix.

    Inverse square root on the support, zero on the null space.
    """
    w, v = _psd_spectrum(p, tol)
    inv = np.where(w > 0, 1.0 / np.sqrt(np.where(w > 0, w, 1.0)), 0.0)
    return (v * inv) @ dagger(v)


def polar_decompose(a: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Polar decomposition A = U P with P = sqrt(A† A) and U unitary.

    On the support of P, U maps right singular directions onto the image
    of A. On the null space it is completed deterministically to a full
    unitary by Gram-Schmidt over the standard basis vectors in index order.
    """
    d = require_square(a)
    w, v = _psd_spectrum(dagger(a) @ a, tol)
    sqrt_w = np.sqrt(w)
    p = (v * sqrt_w) @ dagger(v)

    support = w > 0
    image = []
    for k in np.nonzero(support)[0]:
        image.append((a @ v[:, k]) / sqrt_w[k])
    # complete an orthonormal basis for the image side
    for e in np.eye(d, dtype=complex):
        if len(image) == d:
            break
        residual = e.copy()
        for u in image:
            residual -= u * (u.conj() @ residual)
        norm = np.linalg.norm(residual)
        if norm > 0.5:  # standard basis vector not already spanned
            image.append(residual / norm)
    u = np.zeros((d, d), dtype=complex)
    cols = list(np.nonzero(support)[0]) + list(np.nonzero(~support)[0])
    for img, k in zip(image, cols):
        u += np.outer(img, v[:, k].conj())
    return u, p


def fidelity(rho: np.ndarray, sigma: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> float:
    """Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.

    Equals <psi|sigma|psi> when rho is the pure state |psi><psi|. The second
    argument may be trace-deficient (for conditional branch outputs), in
    which case the value is bounded by its trace rather than by one.
    """
    if rho.shape != sigma.shape:
        raise DimMismatchError(f"dimension mismatch: {rho.shape} vs {sigma.shape}")
    root = mat_sqrt(rho, tol)
    val = float(np.sum(np.sqrt(_psd_spectrum(root @ sigma @ root, tol)[0])) ** 2)
    return min(val, 1.0) if val <= 1.0 + 1e-9 else val


def haar_state(d: int, rng: np.random.Generator) -> np.ndarray:
    """A pure state drawn from the unitarily invariant distribution."""
    return haar_states(d, 1, rng)[0]


def haar_states(d: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` independent Haar-random pure states, shape (n, d)."""
    z = rng.standard_normal((n, d)) + 1j * rng.standard_normal((n, d))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """A Haar-distributed unitary.

    QR of a complex Ginibre matrix, with the columns rephased by the
    diagonal of R; without that correction QR output is not Haar.
    """
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    return q * (diag / np.abs(diag))


def haar_unitaries(d: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` independent Haar unitaries, shape (n, d, d)."""
    return np.stack([haar_unitary(d, rng) for _ in range(n)])


def outer(psi: np.ndarray, phi: np.ndarray | None = None) -> np.ndarray:
    """|psi><phi| (|psi><psi| when phi is omitted)."""
    if phi is None:
        phi = psi
    return np.outer(psi, phi.conj())


def validate_pure_state(psi: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> None:
    if psi.ndim != 1:
        raise DimMismatchError(f"expected a vector, got shape {psi.shape}")
    norm = float(np.sum(np.abs(psi) ** 2))
    if abs(norm - 1.0) >= 1e-12:
        raise ValueError(f"state is not normalized: |psi|^2 = {norm!r}")


def validate_density(rho: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> None:
    """Check Hermiticity, positivity and unit trace of a density operator."""
    require_square(rho)
    asym = np.abs(rho - dagger(rho)).max()
    if asym > 1e-12:
        raise NonHermitianError(f"density operator not Hermitian: {asym:.3e}")
    w = np.linalg.eigvalsh((rho + dagger(rho)) / 2)
    if w[0] < -tol.psd_slack:
        raise NotPositiveError(f"density operator has eigenvalue {w[0]:.3e}")
    tr = float(np.trace(rho).real)
    if abs(tr - 1.0) > tol.psd_slack:
        raise NotPositiveError(f"density operator has trace {tr!r}")
