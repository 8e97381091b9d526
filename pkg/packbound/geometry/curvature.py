"""
Sectional and Ricci curvature of the normal homogeneous metric.

For orthonormal horizontal X, Y the sectional curvature is

    K(X, Y) = 1/4 |[X, Y]|^2 + 3/4 |[X, Y]_v|^2

where [X, Y]_v is the projection of the bracket onto the isotropy algebra:
the lower right (n-k) block for V_{k,n} (k < n), both diagonal blocks for
G_{k,n} and nothing for U(n). Non-orthonormal pairs are normalised by the
area |X|^2 |Y|^2 - <X, Y>^2 of the plane they span.

"""
import logging
from collections import namedtuple

import numpy as np

from packbound.errors import DegenerateInput, DimensionMismatch, InvalidSpec
from packbound.geometry.space import (
    HorizontalTangent, as_generator, coordinate_basis, inner,
    tangent_coordinates, tangent_from_coordinates,
)

_LOGGER = logging.getLogger(__name__)

DEGENERATE_TOL = 1e-14
ORTHONORMAL_TOL = 1e-8


def curvature_cap(space):
    """Upper bound on the sectional curvature: 2 on U(n), 5/2 on V_{k,n}
    (k < n) and 4 on G_{k,n}.

    """
    if space.is_grassmann:
        return 4.0
    if space.is_unitary:
        return 2.0
    return 2.5


def vertical_part(c, space):
    """Projection of an n x n matrix onto the isotropy algebra."""
    k = space.k
    out = np.zeros_like(c)
    if space.is_grassmann:
        out[:k, :k] = c[:k, :k]
        out[k:, k:] = c[k:, k:]
    elif not space.is_unitary:
        out[k:, k:] = c[k:, k:]
    return out


def _matrices(space, x, y):
    if not isinstance(x, HorizontalTangent) or not isinstance(y, HorizontalTangent):
        raise InvalidSpec('sectional curvature needs two HorizontalTangent arguments')
    for t in (x, y):
        if t.space != space:
            raise DimensionMismatch((t.space.n, t.space.k), (space.n, space.k))
    return x.matrix(), y.matrix()


def curvature_numerator(space, x, y):
    """1/4 |[X, Y]|^2 + 3/4 |[X, Y]_v|^2 without any normalisation."""
    mx, my = _matrices(space, x, y)
    c = mx @ my - my @ mx
    v = vertical_part(c, space)
    return 0.25 * inner(c, c) + 0.75 * inner(v, v)


def sectional_curvature(space, x, y):
    """Sectional curvature of the plane spanned by x and y."""
    mx, my = _matrices(space, x, y)
    xx, yy, xy = inner(mx, mx), inner(my, my), inner(mx, my)
    if xx < DEGENERATE_TOL ** 2 or yy < DEGENERATE_TOL ** 2:
        raise DegenerateInput('sectional curvature of a zero tangent')
    area = xx * yy - xy * xy
    if area <= DEGENERATE_TOL * xx * yy:
        raise DegenerateInput('tangents are linearly dependent')
    return curvature_numerator(space, x, y) / area


def ricci_diagonal(space, basis):
    """Diagonal Ric(e_i, e_i) = sum_{j != i} K(e_i, e_j) of the Ricci form
    over an orthonormal basis of the horizontal space.

    Ric(e, e) depends only on e; the trace (the scalar curvature) does not
    depend on the basis at all.

    """
    basis = list(basis)
    if len(basis) != space.dimension:
        raise DegenerateInput(
            'basis has {0} vectors, the horizontal space has dimension {1}'.format(
                len(basis), space.dimension)
        )
    if any(e.space != space for e in basis):
        raise DegenerateInput('basis vectors live in a different space')
    coords = np.array([tangent_coordinates(e) for e in basis])
    gram_err = np.max(np.abs(coords @ coords.T - np.eye(len(basis))))
    if gram_err > ORTHONORMAL_TOL:
        raise DegenerateInput('basis is not orthonormal (Gram error {0:.3e})'.format(gram_err))
    d = len(basis)
    table = np.zeros((d, d))
    for i in range(d):
        for j in range(i + 1, d):
            table[i, j] = table[j, i] = curvature_numerator(space, basis[i], basis[j])
    return table.sum(axis=1)


def random_orthonormal_basis(space, seed=None):
    """A Haar-random orthonormal basis of the horizontal space."""
    rng = as_generator(seed)
    d = space.dimension
    q, r = np.linalg.qr(rng.standard_normal((d, d)))
    q = q * np.sign(np.diag(r))
    return [tangent_from_coordinates(space, row) for row in q.T]


def ricci_lower_bound(space):
    """min_i Ric(e_i, e_i) / (D - 1) over the coordinate basis. Reported only;
    the volume bounds use 0 instead.

    """
    d = space.dimension
    if d < 2:
        return 0.0
    ric = ricci_diagonal(space, coordinate_basis(space))
    return float(ric.min()) / (d - 1)


CurvatureScan = namedtuple('CurvatureScan', 'space samples minimum maximum mean cap')


def curvature_scan(space, samples, seed=None):
    """Sectional curvatures of *samples* random planes, independent Gaussian
    coordinates for both spanning vectors.

    """
    if samples < 1:
        raise InvalidSpec('samples must be positive')
    if space.dimension < 2:
        raise DegenerateInput('{0!r} has no tangent planes'.format(space))
    rng = as_generator(seed)
    values = np.empty(samples)
    for i in range(samples):
        while True:
            x = tangent_from_coordinates(space, rng.standard_normal(space.dimension))
            y = tangent_from_coordinates(space, rng.standard_normal(space.dimension))
            try:
                values[i] = sectional_curvature(space, x, y)
                break
            except DegenerateInput:
                _LOGGER.debug('redrawing a degenerate plane')
    scan = CurvatureScan(space, samples, float(values.min()), float(values.max()),
                         float(values.mean()), curvature_cap(space))
    if scan.maximum > scan.cap + 1e-9:
        _LOGGER.warning('sampled curvature %.6f exceeds the cap %.2f', scan.maximum, scan.cap)
    return scan
