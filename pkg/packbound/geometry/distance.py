"""
Principal angles and the distances built from them.

All functions accept StiefelPoint or GrassmannPoint operands; Grassmann
quantities only look at the spans.

"""
import math

import numpy as np
import scipy.linalg

from packbound.errors import DimensionMismatch
from packbound.geometry.space import GrassmannPoint


def _frame(p):
    return p.frame if hasattr(p, 'frame') else np.asarray(p)


def _check_shapes(p, q):
    if p.shape != q.shape:
        raise DimensionMismatch(p.shape, q.shape)


def principal_angles(p, q):
    """Principal angles between <P> and <Q>, ascending in [0, pi/2]."""
    a, b = _frame(p), _frame(q)
    _check_shapes(a, b)
    s = scipy.linalg.svd(a.conj().T @ b, compute_uv=False)
    s = np.clip(s, 0.0, 1.0)
    return np.sort(np.arccos(s))


def chordal_stiefel(p, q):
    """Frobenius distance |Phi_1 - Phi_2|_F between two frames."""
    a, b = _frame(p), _frame(q)
    _check_shapes(a, b)
    return float(np.linalg.norm(a - b))


def chordal_grassmann(p, q):
    """sqrt(sum sin^2 theta_i) = |P_1 - P_2|_F / sqrt(2)."""
    theta = principal_angles(p, q)
    return float(np.sqrt(np.sum(np.sin(theta) ** 2)))


def geodesic_grassmann(p, q):
    """sqrt(sum theta_i^2), the Riemannian distance on G_{k,n}."""
    theta = principal_angles(p, q)
    return float(np.sqrt(np.sum(theta ** 2)))


def projector(p):
    if isinstance(p, GrassmannPoint):
        return p.projector
    phi = _frame(p)
    return phi @ phi.conj().T


# Batched forms used by the packing routines. *frames* has shape (m, n, k)
# and *others* has shape (b, n, k); pairwise results have shape (b, m).

def _check_stack(frames, others):
    if frames.shape[1:] != others.shape[1:]:
        raise DimensionMismatch(frames.shape[1:], others.shape[1:])


def pairwise_principal_angles(frames, others):
    _check_stack(frames, others)
    prods = np.einsum('mij,bik->bmjk', frames.conj(), others)
    s = np.linalg.svd(prods, compute_uv=False)
    return np.arccos(np.clip(s, 0.0, 1.0))


def pairwise_chordal_stiefel(frames, others):
    _check_stack(frames, others)
    diff = frames[np.newaxis] - others[:, np.newaxis]
    return np.sqrt(np.sum(diff.real ** 2 + diff.imag ** 2, axis=(2, 3)))


def pairwise_chordal_grassmann(frames, others):
    theta = pairwise_principal_angles(frames, others)
    return np.sqrt(np.sum(np.sin(theta) ** 2, axis=2))


def pairwise_geodesic_grassmann(frames, others):
    theta = pairwise_principal_angles(frames, others)
    return np.sqrt(np.sum(theta ** 2, axis=2))


def _single(pairwise, frames, q):
    q = _frame(q)
    if frames.shape[1:] != q.shape:
        raise DimensionMismatch(frames.shape[1:], q.shape)
    return pairwise(frames, q[np.newaxis])[0]


def batch_chordal_stiefel(frames, q):
    return _single(pairwise_chordal_stiefel, frames, q)


def batch_chordal_grassmann(frames, q):
    return _single(pairwise_chordal_grassmann, frames, q)


def batch_geodesic_grassmann(frames, q):
    return _single(pairwise_geodesic_grassmann, frames, q)


def max_geodesic_grassmann(k):
    """Diameter of G_{k,n} (k <= n/2): all principal angles pi/2."""
    return math.sqrt(k) * math.pi / 2
