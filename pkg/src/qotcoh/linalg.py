"""Dense Hermitian linear algebra on single and bipartite systems.

Operators are plain complex ``numpy`` arrays. A bipartite operator on
``C^d (x) C^d`` is a ``(d*d, d*d)`` array whose composite index ``i*d + j``
stands for ``|i>_A (x) |j>_B``.
"""
import numpy as np

HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-9
TRACE_TOL = 1e-10
RANK_TOL = 1e-8


class InvalidStateError(ValueError):
    """An operator failed one of the state invariants (the message names it)."""


class NotHermitianError(ValueError):
    pass


class RankConditionError(ValueError):
    pass


def kron(a, b):
    return np.kron(np.asarray(a), np.asarray(b))


def allclose(a, b, tol=1e-10):
    """Elementwise comparison with an explicit absolute tolerance."""
    a = np.asarray(a)
    b = np.asarray(b)
    return a.shape == b.shape and bool(np.max(np.abs(a - b), initial=0.0) <= tol)


def hermitian_residual(m):
    m = np.asarray(m)
    return float(np.max(np.abs(m - m.conj().T), initial=0.0))


def local_dim(op):
    n = op.shape[0]
    d = int(round(np.sqrt(n)))
    if op.ndim != 2 or op.shape[1] != n or d * d != n:
        raise ValueError(f"bipartite operator must be square with dim d*d, got shape {op.shape}")
    return d


def partial_trace(op, which, dims=None):
    """Trace out subsystem ``which`` ('A' or 'B') of a bipartite operator.

    ``dims`` defaults to two equal factors; pass ``(dA, dB)`` otherwise.
    """
    op = np.asarray(op)
    if dims is None:
        d = local_dim(op)
        dims = (d, d)
    da, db = dims
    tmp = op.reshape(da, db, da, db)
    if which == "A":
        return np.einsum("ijik->jk", tmp)
    if which == "B":
        return np.einsum("ijkj->ik", tmp)
    raise ValueError(f"which must be 'A' or 'B', got {which!r}")


def swap_operator(d):
    """SWAP on ``C^d (x) C^d``: S|i>|j> = |j>|i>. Entries are exactly 0/1."""
    assert d >= 1
    s = np.zeros((d * d, d * d), dtype=np.complex128)
    i, j = np.meshgrid(np.arange(d), np.arange(d), indexing="ij")
    s[(j * d + i).ravel(), (i * d + j).ravel()] = 1
    return s


def sym_projector(d):
    return 0.5 * (np.eye(d * d) + swap_operator(d))


def asym_projector(d):
    return 0.5 * (np.eye(d * d) - swap_operator(d))


def eig_hermitian(m, tol=HERMITIAN_TOL):
    """Eigendecomposition of a Hermitian matrix, eigenvalues in descending order.

    Returns ``(w, v)`` with ``m = v @ diag(w) @ v^dagger``.
    """
    m = np.asarray(m, dtype=np.complex128)
    res = hermitian_residual(m)
    if res > tol:
        raise NotHermitianError(f"matrix is not Hermitian: max |m - m^dagger| = {res:.3e} > {tol:.1e}")
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    return w[::-1], v[:, ::-1]


def numerical_rank(m, tol=RANK_TOL):
    """Count of eigenvalues above ``tol`` times the largest one."""
    w = np.linalg.eigvalsh(0.5 * (m + np.conj(m).T))
    top = w[-1]
    if top <= 0:
        return 0
    return int(np.sum(w > tol * top))


def support(m, tol=1e-10):
    """Isometry ``(d, r)`` onto the span of eigenvectors with eigenvalue > tol*max."""
    w, v = eig_hermitian(m, tol=np.inf)
    if w[0] <= 0:
        return v[:, :0]
    return v[:, w > tol * w[0]]


def is_psd(m, tol=PSD_TOL):
    return bool(np.linalg.eigvalsh(0.5 * (m + np.conj(m).T))[0] >= -tol)


def check_density_matrix(rho, herm_tol=HERMITIAN_TOL, psd_tol=PSD_TOL, trace_tol=TRACE_TOL):
    """Validate and return ``rho`` as a complex array.

    Raises ``InvalidStateError`` naming the violated invariant.
    """
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.shape[0] == 0:
        raise InvalidStateError(f"density matrix must be a nonempty square matrix, got shape {rho.shape}")
    res = hermitian_residual(rho)
    if res > herm_tol:
        raise InvalidStateError(f"density matrix is not Hermitian (max asymmetry {res:.3e})")
    wmin = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0]
    if wmin < -psd_tol:
        raise InvalidStateError(f"density matrix is not positive semidefinite (min eigenvalue {wmin:.3e})")
    tr = np.trace(rho).real
    if abs(tr - 1) > trace_tol:
        raise InvalidStateError(f"density matrix trace is {tr:.12g}, expected 1")
    return rho


def check_pure_state(psi, tol=1e-10):
    psi = np.asarray(psi, dtype=np.complex128)
    if psi.ndim != 1 or psi.shape[0] == 0:
        raise InvalidStateError(f"pure state must be a nonempty vector, got shape {psi.shape}")
    norm2 = float(np.vdot(psi, psi).real)
    if abs(norm2 - 1) > tol:
        raise InvalidStateError(f"pure state amplitudes have squared norm {norm2:.12g}, expected 1")
    return psi


def projector(psi):
    psi = np.asarray(psi)
    return np.outer(psi, psi.conj())


def factor_rank_one_marginal(x, tol=RANK_TOL):
    """Factor a bipartite substate with a rank-one marginal into a product.

    If ``x >= 0``, ``tr x <= 1`` and one of its marginals has rank one, then
    ``x`` equals ``X_A (x) X_B / tr(x)``.

    Returns
    -------
    marginal_a, marginal_b : ndarray
        ``tr_B x`` and ``tr_A x``.
    residual : float
        ``max |x - marginal_a (x) marginal_b / tr(x)|``.
    """
    x = np.asarray(x, dtype=np.complex128)
    local_dim(x)
    res = hermitian_residual(x)
    if res > tol:
        raise RankConditionError(f"operator is not Hermitian (max asymmetry {res:.3e})")
    if not is_psd(x, tol):
        raise RankConditionError("operator is not positive semidefinite")
    tr = np.trace(x).real
    if tr > 1 + tol:
        raise RankConditionError(f"trace {tr:.6g} exceeds 1")
    if tr <= tol:
        raise RankConditionError("operator has (numerically) zero trace")
    xa = partial_trace(x, "B")
    xb = partial_trace(x, "A")
    if numerical_rank(xa, tol) != 1 and numerical_rank(xb, tol) != 1:
        raise RankConditionError(
            f"neither marginal has rank one (ranks {numerical_rank(xa, tol)}, {numerical_rank(xb, tol)})"
        )
    residual = float(np.max(np.abs(x - np.kron(xa, xb) / tr)))
    return xa, xb, residual


def hermitian_basis(d):
    """Trace-orthonormal basis of d x d Hermitian matrices.

    Ordered as the d diagonal units, then for each pair k < l the symmetric
    and antisymmetric off-diagonal elements. Returns an array ``(d*d, d, d)``.
    """
    out = []
    for k in range(d):
        e = np.zeros((d, d), dtype=np.complex128)
        e[k, k] = 1
        out.append(e)
    s = 1 / np.sqrt(2)
    for k in range(d):
        for l in range(k + 1, d):
            e = np.zeros((d, d), dtype=np.complex128)
            e[k, l] = e[l, k] = s
            out.append(e)
            e = np.zeros((d, d), dtype=np.complex128)
            e[k, l] = -1j * s
            e[l, k] = 1j * s
            out.append(e)
    return np.stack(out)
