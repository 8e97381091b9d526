"""
Points and horizontal tangents on the complex Stiefel manifold V_{k,n} and the
complex Grassmann manifold G_{k,n}, both viewed as normal homogeneous spaces of
U(n) with the metric <X, Y> = (1/2) Re tr X^H Y.

A horizontal tangent is stored as the block pair (A, B) of

    X = [[A, -B^H],
         [B,  0  ]]

with A skew-Hermitian (k x k) and B complex ((n-k) x k). Grassmann tangents
have A = 0.

"""
import logging
import math

import numpy as np
import scipy.linalg

from packbound.errors import (
    DegenerateInput, DimensionMismatch, InvalidSpec, NotUnitary,
)

_LOGGER = logging.getLogger(__name__)

STIEFEL = 'stiefel'
GRASSMANN = 'grassmann'
FAMILIES = (STIEFEL, GRASSMANN)

# Tolerances: construction and derived identities.
FRAME_TOL = 1e-12
IDENTITY_TOL = 1e-10


def as_generator(seed):
    """Return a numpy Generator for *seed*, which may be an integer, a sequence
    of integers or an existing Generator (returned unchanged).

    """
    return np.random.default_rng(seed)


def sample_generator(seed, index):
    """Generator for sample *index* of a sweep seeded with *seed*. Sweeps use
    this so that every sample is reproducible on its own.

    """
    return np.random.default_rng([int(seed), int(index)])


class SpaceSpec(object):
    """Which manifold family, and its dimensions (k, n).

    Stiefel spaces need 1 <= k <= n (k = n is the unitary group U(n)).
    Grassmann spaces need 1 <= k <= n/2; the complement G_{n-k,n} must be
    requested explicitly.

    """
    __slots__ = ('_family', '_k', '_n')

    def __init__(self, family, k, n):
        family = parse_family(family)
        k, n = int(k), int(n)
        if k < 1 or n < 1:
            raise InvalidSpec(
                'k and n must be positive, got k={0}, n={1}'.format(k, n),
                family, k, n
            )
        if k > n:
            raise InvalidSpec(
                'k={0} exceeds n={1}'.format(k, n), family, k, n
            )
        if family == GRASSMANN and 2 * k > n:
            raise InvalidSpec(
                'Grassmann spaces need k <= n/2, got k={0}, n={1}; '
                'use G_{{{2},{1}}} instead'.format(k, n, n - k),
                family, k, n
            )
        self._family = family
        self._k = k
        self._n = n

    @classmethod
    def stiefel(cls, k, n):
        return cls(STIEFEL, k, n)

    @classmethod
    def grassmann(cls, k, n):
        return cls(GRASSMANN, k, n)

    @classmethod
    def unitary(cls, n):
        return cls(STIEFEL, n, n)

    @property
    def family(self):
        return self._family

    @property
    def k(self):
        return self._k

    @property
    def n(self):
        return self._n

    @property
    def is_grassmann(self):
        return self._family == GRASSMANN

    @property
    def is_unitary(self):
        return self._family == STIEFEL and self._k == self._n

    @property
    def dimension(self):
        """Real dimension D = 2nk - eps k^2, eps = 1 (Stiefel), 2 (Grassmann)."""
        eps = 2 if self.is_grassmann else 1
        return 2 * self._n * self._k - eps * self._k * self._k

    def __eq__(self, other):
        if not isinstance(other, SpaceSpec):
            return NotImplemented
        return (self._family, self._k, self._n) == (other._family, other._k, other._n)

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __hash__(self):
        return hash((self._family, self._k, self._n))

    def __repr__(self):
        return 'SpaceSpec({0!r}, k={1}, n={2})'.format(self._family, self._k, self._n)


def parse_family(family):
    """Normalise a family name. Accepts 'stiefel', 'grassmann' and 'unitary'
    (an alias for Stiefel, the caller is responsible for k = n).

    """
    name = str(family).strip().lower()
    if name in ('stiefel', 'v', 'unitary', 'u'):
        return STIEFEL
    if name in ('grassmann', 'grassmannian', 'g'):
        return GRASSMANN
    raise InvalidSpec('unknown manifold family: {0!r}'.format(family))


def _readonly(arr):
    v = arr.view()
    v.setflags(write=False)
    return v


def canonical_frame(n, k):
    """The frame [I_k; 0]."""
    return np.eye(n, k, dtype=np.complex128)


class StiefelPoint(object):
    """An orthonormal n x k frame Phi (Phi^H Phi = I)."""
    __slots__ = ('_frame',)

    def __init__(self, frame, check=True):
        arr = np.array(frame, dtype=np.complex128, copy=True)
        if arr.ndim == 1:
            arr = arr[:, np.newaxis]
        if arr.ndim != 2:
            raise InvalidSpec('frame must be a 2-D array, got shape {0}'.format(arr.shape))
        n, k = arr.shape
        if k > n or k == 0:
            raise InvalidSpec('frame of shape {0} is not n x k with k <= n'.format(arr.shape))
        if check:
            residual = np.max(np.abs(arr.conj().T @ arr - np.eye(k)))
            if residual > FRAME_TOL:
                raise InvalidSpec(
                    'frame is not orthonormal: max |Phi^H Phi - I| = {0:.3e}'.format(residual)
                )
        self._frame = arr

    @classmethod
    def canonical(cls, n, k):
        return cls(canonical_frame(n, k), check=False)

    @property
    def frame(self):
        """Read-only view of the n x k frame."""
        return _readonly(self._frame)

    @property
    def shape(self):
        return self._frame.shape

    @property
    def n(self):
        return self._frame.shape[0]

    @property
    def k(self):
        return self._frame.shape[1]

    def is_canonical(self):
        return np.array_equal(self._frame, canonical_frame(self.n, self.k))

    def __repr__(self):
        return 'StiefelPoint(n={0}, k={1})'.format(self.n, self.k)


class GrassmannPoint(object):
    """The span <Phi> of an orthonormal frame. Any representative will do; the
    orthogonal projector P = Phi Phi^H is the canonical one.

    """
    __slots__ = ('_representative', '_projector')

    def __init__(self, representative):
        if not isinstance(representative, StiefelPoint):
            representative = StiefelPoint(representative)
        # validates k <= n/2
        SpaceSpec(GRASSMANN, representative.k, representative.n)
        self._representative = representative
        self._projector = None

    @property
    def representative(self):
        return self._representative

    @property
    def frame(self):
        return self._representative.frame

    @property
    def shape(self):
        return self._representative.shape

    @property
    def n(self):
        return self._representative.n

    @property
    def k(self):
        return self._representative.k

    @property
    def projector(self):
        if self._projector is None:
            phi = self._representative.frame
            self._projector = _readonly(phi @ phi.conj().T)
        return self._projector

    def __repr__(self):
        return 'GrassmannPoint(n={0}, k={1})'.format(self.n, self.k)


class HorizontalTangent(object):
    """A horizontal tangent vector given by its (A, B) blocks."""
    __slots__ = ('_a', '_b', '_space')

    def __init__(self, a_block, b_block, space):
        k, n = space.k, space.n
        a = np.array(a_block, dtype=np.complex128, copy=True).reshape(k, k)
        b = np.array(b_block, dtype=np.complex128, copy=True).reshape(n - k, k)
        if np.max(np.abs(a + a.conj().T), initial=0.0) > FRAME_TOL:
            raise InvalidSpec('A block is not skew-Hermitian')
        if space.is_grassmann and np.any(a != 0):
            raise InvalidSpec('Grassmann tangents must have A = 0')
        self._a = a
        self._b = b
        self._space = space

    @classmethod
    def zero(cls, space):
        k, n = space.k, space.n
        return cls(np.zeros((k, k)), np.zeros((n - k, k)), space)

    @classmethod
    def from_matrix(cls, x, space):
        """Read (A, B) off an n x n matrix of the form [[A, -B^H], [B, 0]]."""
        x = np.asarray(x, dtype=np.complex128)
        n, k = space.n, space.k
        if x.shape != (n, n):
            raise DimensionMismatch(x.shape, (n, n))
        a = x[:k, :k]
        if space.is_grassmann:
            a = np.zeros_like(a)
        return cls(a, x[k:, :k], space)

    @property
    def a_block(self):
        return _readonly(self._a)

    @property
    def b_block(self):
        return _readonly(self._b)

    @property
    def space(self):
        return self._space

    @property
    def norm(self):
        return tangent_norm(self)

    def matrix(self):
        """The n x n skew-Hermitian embedding X."""
        k, n = self._space.k, self._space.n
        x = np.zeros((n, n), dtype=np.complex128)
        x[:k, :k] = self._a
        x[k:, :k] = self._b
        x[:k, k:] = -self._b.conj().T
        return x

    def scaled(self, factor):
        return HorizontalTangent(factor * self._a, factor * self._b, self._space)

    def __repr__(self):
        return 'HorizontalTangent({0!r}, norm={1:.6g})'.format(self._space, self.norm)


def tangent_norm(t):
    """Geodesic length r = sqrt(|A|^2/2 + |B|^2) of the geodesic generated by t."""
    a = np.linalg.norm(t.a_block)
    b = np.linalg.norm(t.b_block)
    return math.sqrt(0.5 * a * a + b * b)


def inner(x, y):
    """The metric <X, Y> = (1/2) Re tr X^H Y on n x n matrices."""
    return 0.5 * float(np.real(np.vdot(x, y)))


# Coordinates

def tangent_coordinates(t):
    """Real coordinates of t in the orthonormal basis returned by
    :func:`coordinate_basis`. The map is an isometry onto R^D.

    """
    space = t.space
    parts = []
    if not space.is_grassmann:
        a = t.a_block
        iu = np.triu_indices(space.k, 1)
        parts.append(np.imag(np.diag(a)) / math.sqrt(2.0))
        parts.append(np.real(a[iu]))
        parts.append(np.imag(a[iu]))
    b = t.b_block
    parts.append(np.real(b).ravel())
    parts.append(np.imag(b).ravel())
    return np.concatenate(parts)


def tangent_from_coordinates(space, coords):
    coords = np.asarray(coords, dtype=np.float64)
    if coords.shape != (space.dimension,):
        raise DimensionMismatch(coords.shape, (space.dimension,))
    k, n = space.k, space.n
    a = np.zeros((k, k), dtype=np.complex128)
    pos = 0
    if not space.is_grassmann:
        iu = np.triu_indices(k, 1)
        m = len(iu[0])
        a[np.diag_indices(k)] = 1j * math.sqrt(2.0) * coords[:k]
        pos = k
        upper = coords[pos:pos + m] + 1j * coords[pos + m:pos + 2 * m]
        pos += 2 * m
        a[iu] = upper
        a[(iu[1], iu[0])] = -np.conj(upper)
    size = (n - k) * k
    b = (coords[pos:pos + size] + 1j * coords[pos + size:pos + 2 * size]).reshape(n - k, k)
    return HorizontalTangent(a, b, space)


def coordinate_basis(space):
    """Orthonormal basis of the horizontal space, of length D."""
    eye = np.eye(space.dimension)
    return [tangent_from_coordinates(space, row) for row in eye]


def random_tangent(space, norm, seed=None):
    """A tangent of the given norm with isotropic direction: independent
    standard Gaussian coordinates, rescaled.

    """
    rng = as_generator(seed)
    coords = rng.standard_normal(space.dimension)
    length = np.linalg.norm(coords)
    if length == 0:
        raise DegenerateInput('drew a zero tangent')
    return tangent_from_coordinates(space, coords * (float(norm) / length))


# Sampling

def haar_stiefel(spec, seed=None):
    """Haar-distributed point of V_{k,n}: thin QR of a complex Gaussian matrix
    with the column phases fixed so that R has a positive real diagonal.

    """
    if not isinstance(spec, SpaceSpec):
        raise InvalidSpec('expected a SpaceSpec, got {0!r}'.format(spec))
    rng = as_generator(seed)
    n, k = spec.n, spec.k
    g = rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))
    q, r = np.linalg.qr(g)
    d = np.diag(r)
    q = q * (d / np.abs(d))
    return StiefelPoint(q, check=False)


def haar_frames(spec, count, seed=None):
    """*count* independent Haar frames of V_{k,n} stacked as (count, n, k),
    drawn the same way as :func:`haar_stiefel`.

    """
    if not isinstance(spec, SpaceSpec):
        raise InvalidSpec('expected a SpaceSpec, got {0!r}'.format(spec))
    rng = as_generator(seed)
    shape = (int(count), spec.n, spec.k)
    g = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    q, r = np.linalg.qr(g)
    d = np.diagonal(r, axis1=1, axis2=2)
    return q * (d / np.abs(d))[:, np.newaxis, :]


def haar_point(spec, seed=None):
    """Haar point of the space: a StiefelPoint or a GrassmannPoint."""
    p = haar_stiefel(spec, seed)
    return GrassmannPoint(p) if spec.is_grassmann else p


# Exponential / logarithm

def expm_skew_hermitian(x):
    """exp(X) for skew-Hermitian X via the eigendecomposition of the Hermitian
    matrix -iX.

    """
    w, v = np.linalg.eigh(-1j * x)
    return (v * np.exp(1j * w)) @ v.conj().T


def unitary_completion(frame):
    """An n x n unitary whose first k columns are *frame*."""
    frame = np.asarray(frame)
    if frame.shape[0] == frame.shape[1]:
        return np.array(frame, dtype=np.complex128)
    rest = scipy.linalg.null_space(frame.conj().T)
    return np.hstack([frame, rest])


def _check_tangent_at(base, tangent):
    space = tangent.space
    if base.shape != (space.n, space.k):
        raise DimensionMismatch(base.shape, (space.n, space.k))


def _translate(base, columns):
    if base.is_canonical():
        return columns
    return unitary_completion(base.frame) @ columns


def exp_point(base, tangent):
    """Endpoint Phi = Psi_bar exp(X) [I; 0] of the geodesic leaving *base* in
    direction *tangent*, Psi_bar being a unitary completion of the base frame.

    *base* may be a StiefelPoint or a GrassmannPoint; the result has the same
    type.

    """
    grassmann = isinstance(base, GrassmannPoint)
    stiefel = base.representative if grassmann else base
    _check_tangent_at(stiefel, tangent)
    x = tangent.matrix()
    if not np.any(x):
        return base
    k = tangent.space.k
    columns = expm_skew_hermitian(x)[:, :k]
    out = StiefelPoint(_translate(stiefel, columns), check=False)
    return GrassmannPoint(out) if grassmann else out


def grassmann_exp_closed_form(base, tangent):
    """Closed form of exp_point for A = 0: with the thin SVD B = V_1 S W^H,

        exp(X) [I; 0] = [W cos(S) W^H; V_1 sin(S) W^H].

    """
    stiefel = base.representative if isinstance(base, GrassmannPoint) else base
    _check_tangent_at(stiefel, tangent)
    if np.any(tangent.a_block != 0):
        raise InvalidSpec('closed form needs a tangent with A = 0')
    v1, s, wh = np.linalg.svd(tangent.b_block, full_matrices=False)
    w = wh.conj().T
    top = (w * np.cos(s)) @ wh
    bottom = (v1 * np.sin(s)) @ wh
    columns = np.vstack([top, bottom])
    out = StiefelPoint(_translate(stiefel, columns), check=False)
    return GrassmannPoint(out) if isinstance(base, GrassmannPoint) else out


def log_unitary(v):
    """Skew-Hermitian logarithm of a unitary matrix with eigenphases taken in
    (-pi, pi]. Uses the complex Schur form, which is diagonal for normal
    matrices and keeps the eigenvectors orthonormal for repeated eigenvalues.

    """
    v = np.asarray(v, dtype=np.complex128)
    if v.ndim != 2 or v.shape[0] != v.shape[1]:
        raise DimensionMismatch(v.shape, (v.shape[0], v.shape[0]))
    residual = np.max(np.abs(v.conj().T @ v - np.eye(v.shape[0])))
    if residual > IDENTITY_TOL:
        raise NotUnitary(residual, IDENTITY_TOL)
    t, z = scipy.linalg.schur(v, output='complex')
    phases = np.angle(np.diag(t))
    log_v = (z * (1j * phases)) @ z.conj().T
    return 0.5 * (log_v - log_v.conj().T)
