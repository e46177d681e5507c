"""Small dense complex Hermitian kernels.

Every rate expression in this package reduces to ``log2 det`` of a Hermitian
positive definite matrix of dimension at most 16.  Two evaluation paths are
provided:

* :func:`logdet2_hpd` factorizes the assembled matrix (Cholesky, one jittered
  retry).  It is the reference path for moderate magnitudes.
* :func:`logdet2_gram` evaluates ``log2 det(D + F F^H)`` from the singular
  values of ``D^{-1/2} F``.  It never forms the large entries of ``F F^H`` and
  stays accurate when link gains reach ``1e24``.

The cyclic Jacobi eigensolver :func:`jacobi_eigvalsh` is written out by hand
so that PSD claims are checked by code that shares nothing with LAPACK.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "DimensionMismatch",
    "NotPositiveDefinite",
    "as_cmatrix",
    "hermitize",
    "logdet2_hpd",
    "logdet2_gram",
    "gram",
    "schur_capped",
    "block_logdet_check",
    "resolvent_identity_check",
    "jacobi_eigvalsh",
    "psd_check",
    "capped_sqrt",
    "MAX_DIM",
]

MAX_DIM = 16


class DimensionMismatch(ValueError):
    """Operand shapes are not conformable."""


class NotPositiveDefinite(ArithmeticError):
    """A matrix expected to be Hermitian positive definite is not."""


def as_cmatrix(a) -> np.ndarray:
    """Return ``a`` as a 2-D complex128 array (scalars become 1x1)."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    if m.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got ndim={m.ndim}")
    return m


def hermitize(a) -> np.ndarray:
    """Return ``(A + A^H) / 2``."""
    m = as_cmatrix(a)
    if m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got {m.shape}")
    return 0.5 * (m + m.conj().T)


def logdet2_hpd(a) -> float:
    """Base-2 log-determinant of a Hermitian positive definite matrix.

    The input is symmetrized and Cholesky-factorized.  If the factorization
    fails, it is retried once with ``1e-12 * trace / dim`` added to the
    diagonal.

    Parameters
    ----------
    a : array_like
        Square Hermitian matrix.

    Returns
    -------
    float
        ``log2 det(a)`` in bits.

    Raises
    ------
    NotPositiveDefinite
        If both factorization attempts fail.
    """
    m = hermitize(a)
    n = m.shape[0]
    if n == 0:
        return 0.0
    try:
        chol = np.linalg.cholesky(m)
    except np.linalg.LinAlgError:
        jitter = 1e-12 * abs(np.trace(m).real) / n
        try:
            chol = np.linalg.cholesky(m + jitter * np.eye(n))
        except np.linalg.LinAlgError as exc:
            raise NotPositiveDefinite("Cholesky failed after jitter") from exc
    return float(2.0 * np.sum(np.log2(np.diag(chol).real)))


def logdet2_gram(factor, noise=None) -> float:
    """Return ``log2 det(D + F F^H)`` for diagonal ``D > 0``.

    Parameters
    ----------
    factor : array_like
        The ``n x k`` factor ``F``.  ``k`` may be zero.
    noise : array_like, optional
        Diagonal of ``D`` (length ``n``); identity when omitted.
    """
    f = as_cmatrix(factor) if np.size(factor) else np.zeros(np.shape(factor), complex)
    n = f.shape[0]
    if noise is None:
        base = 0.0
        scaled = f
    else:
        d = np.asarray(noise, dtype=float).reshape(-1)
        if d.shape[0] != n:
            raise DimensionMismatch("noise diagonal length differs from factor rows")
        base = float(np.sum(np.log2(d)))
        scaled = f / np.sqrt(d)[:, None]
    if scaled.size == 0:
        return base
    s = np.linalg.svd(scaled, compute_uv=False)
    return base + float(np.sum(np.log2(1.0 + s * s)))


def gram(s, scale: float = 1.0) -> np.ndarray:
    """Return ``scale * S S^H`` (exactly Hermitian)."""
    m = as_cmatrix(s)
    g = float(scale) * (m @ m.conj().T)
    return hermitize(g)


def schur_capped(k, s) -> np.ndarray:
    """Return ``L(K, S) = K - K S (I + S^H K S)^{-1} S^H K``.

    ``K`` is ``M x M`` PSD and ``S`` is ``M x N``.  The result is PSD and
    dominated by ``K``.
    """
    km = hermitize(k)
    sm = as_cmatrix(s)
    if sm.shape[0] != km.shape[0]:
        raise DimensionMismatch(f"K is {km.shape}, S is {sm.shape}")
    ks = km @ sm
    inner = np.eye(sm.shape[1]) + sm.conj().T @ ks
    x = np.linalg.solve(hermitize(inner), ks.conj().T)
    return hermitize(km - ks @ x)


def block_logdet_check(a, b, c, d) -> tuple[float, float]:
    """Evaluate both sides of ``det [[A, B], [C, D]] = det A det(D - C A^{-1} B)``.

    Returns
    -------
    (float, float)
        ``log2 det`` of the assembled matrix and
        ``log2 det A + log2 det(D - C A^{-1} B)``.
    """
    am, bm, cm, dm = (as_cmatrix(x) for x in (a, b, c, d))
    if (
        am.shape[0] != am.shape[1]
        or dm.shape[0] != dm.shape[1]
        or bm.shape != (am.shape[0], dm.shape[0])
        or cm.shape != (dm.shape[0], am.shape[0])
    ):
        raise DimensionMismatch("blocks are not conformable")
    full = np.block([[am, bm], [cm, dm]])
    schur = dm - cm @ np.linalg.solve(am, bm)
    return logdet2_hpd(full), logdet2_hpd(am) + logdet2_hpd(schur)


def resolvent_identity_check(h, rho: float) -> float:
    """Max-entry residual of ``I - rho H^H (I + rho H H^H)^{-1} H = (I + rho H^H H)^{-1}``."""
    hm = as_cmatrix(h)
    n_rows, n_cols = hm.shape
    hh = hm.conj().T
    left = np.eye(n_cols) - rho * hh @ np.linalg.solve(np.eye(n_rows) + rho * hm @ hh, hm)
    right = np.linalg.inv(np.eye(n_cols) + rho * hh @ hm)
    return float(np.max(np.abs(left - right)))


def jacobi_eigvalsh(a, tol: float = 1e-15, max_sweeps: int = 100) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations.

    Returns the eigenvalues in ascending order.
    """
    m = hermitize(a).copy()
    n = m.shape[0]
    if n > MAX_DIM:
        raise DimensionMismatch(f"dimension {n} exceeds {MAX_DIM}")
    scale = max(np.max(np.abs(m)) if n else 0.0, np.finfo(float).tiny)
    for _ in range(max_sweeps):
        off = np.sqrt(max(np.sum(np.abs(m) ** 2) - np.sum(np.abs(np.diag(m)) ** 2), 0.0))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = m[p, q]
                mag = abs(apq)
                if mag <= tol * scale * 1e-3:
                    continue
                app, aqq = m[p, p].real, m[q, q].real
                tau = (aqq - app) / (2.0 * mag)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                phase = apq / mag
                # columns p, q of the unitary rotation G; apply A <- G^H A G
                gp = np.array([c, -s * np.conj(phase)])
                gq = np.array([s * phase, c])
                cols = m[:, [p, q]]
                new_p = cols @ gp
                new_q = cols @ gq
                m[:, p], m[:, q] = new_p, new_q
                rows = m[[p, q], :]
                new_rp = np.conj(gp) @ rows
                new_rq = np.conj(gq) @ rows
                m[p, :], m[q, :] = new_rp, new_rq
                m[p, q] = 0.0
                m[q, p] = 0.0
    return np.sort(np.diag(m).real)


def psd_check(a, upper=None) -> bool:
    """True iff ``A`` (and ``upper - A`` when given) is PSD within tolerance.

    The tolerance is ``1e-9 * (1 + ||.||_F)`` of the matrix being tested.
    """
    am = hermitize(a)
    mats = [am]
    if upper is not None:
        um = hermitize(upper)
        if um.shape != am.shape:
            raise DimensionMismatch(f"{am.shape} vs {um.shape}")
        mats.append(um - am)
    for m in mats:
        tol = 1e-9 * (1.0 + np.linalg.norm(m))
        if m.shape[0] and jacobi_eigvalsh(m)[0] < -tol:
            return False
    return True


def capped_sqrt(h, rho: float) -> tuple[np.ndarray, np.ndarray]:
    """Square roots of ``P = (I + rho H^H H)^{-1}`` and ``I - P``.

    Both are built from the SVD of ``H`` so no large matrix is ever inverted.
    Directions in the null space of ``H`` get factor 1 in ``P``.

    Returns
    -------
    (ndarray, ndarray)
        ``P^{1/2}`` and ``(I - P)^{1/2}``, each ``M x M`` with ``M`` the
        number of columns of ``H``.
    """
    hm = as_cmatrix(h)
    cols = hm.shape[1]
    _, sv, vh = np.linalg.svd(hm, full_matrices=True)
    gain = np.zeros(cols)
    gain[: sv.shape[0]] = float(rho) * sv * sv
    v = vh.conj().T
    keep = 1.0 / np.sqrt(1.0 + gain)
    drop = np.sqrt(gain / (1.0 + gain))
    return (v * keep) @ vh, (v * drop) @ vh
