"""
Equivalence of the chordal and the geodesic metric on the Stiefel manifold.

Geodesic length r and chordal distance d satisfy beta d <= r <= alpha d. The
lower side (beta = 1/sqrt 2) always holds; for the upper side the endpoint of
the geodesic exp(X) [I; 0] is factorised as exp(Z) [v; 0] with Z a Grassmann
tangent and v = exp(A~) in U(k). How far the phase A~ drifts from the A block
of X is measured by kappa, |A~ - A| <= kappa |A|, and gives
alpha = pi / (2 (1 - kappa)).

This module evaluates the series bound on kappa, samples the empirical kappa
and checks the metric sandwich on random pairs.

"""
import logging
import math
from collections import namedtuple

import numpy as np
from scipy.optimize import bisect

from packbound.errors import (
    DecompositionResidual, DimensionMismatch, Divergent, DomainError, InvalidSpec,
    NotConverged,
)
from packbound.geometry.distance import (
    chordal_grassmann, chordal_stiefel, geodesic_grassmann,
)
from packbound.geometry.space import (
    HorizontalTangent, SpaceSpec, expm_skew_hermitian, exp_point,
    haar_point, log_unitary, random_tangent, sample_generator, tangent_norm,
    unitary_completion,
)

_LOGGER = logging.getLogger(__name__)

RESIDUAL_TOL = 1e-6
ZERO_NORM = 1e-14
SANDWICH_TOL = 1e-10

HISTOGRAM_BINS = 20
HISTOGRAM_RANGE = (0.0, 1.2)

DELTA_BRACKET = (0.0, 0.25)
DELTA_XTOL = 1e-11

TIGHT = 'tight'
LOOSE = 'loose'


class KappaSeriesParams(namedtuple('KappaSeriesParams', 'delta r_max tol')):
    __slots__ = ()

    def __new__(cls, delta, r_max=10000, tol=1e-12):
        delta, r_max, tol = float(delta), int(r_max), float(tol)
        if not delta > 0:
            raise InvalidSpec('delta must be positive, got {0}'.format(delta))
        if r_max < 1:
            raise InvalidSpec('r_max must be at least 1, got {0}'.format(r_max))
        if not tol > 0:
            raise InvalidSpec('tol must be positive, got {0}'.format(tol))
        return super(KappaSeriesParams, cls).__new__(cls, delta, r_max, tol)


def kappa_bases(delta):
    """The geometric bases (e^{4d} - 1) e^{2d} and (e^{2d} - 1) e^{4d}."""
    g = math.expm1(4 * delta) * math.exp(2 * delta)
    f = math.expm1(2 * delta) * math.exp(4 * delta)
    return g, f


def _tail(g, f, r):
    # sum_{s > r} (g^s + f^s) / (s + 1) <= (g^{r+1}/(1-g) + f^{r+1}/(1-f)) / (r + 2)
    return (g ** (r + 1) / (1 - g) + f ** (r + 1) / (1 - f)) / (r + 2)


def kappa_series(params):
    """Upper bound on kappa: sum_{r >= 1} (g^r + f^r) / (r + 1)."""
    if not isinstance(params, KappaSeriesParams):
        params = KappaSeriesParams(params)
    g, f = kappa_bases(params.delta)
    if g >= 1 or f >= 1:
        raise Divergent(params.delta, max(g, f))
    total = 0.0
    gr, fr = 1.0, 1.0
    for r in range(1, params.r_max + 1):
        gr *= g
        fr *= f
        total += (gr + fr) / (r + 1)
        if _tail(g, f, r) < params.tol:
            return total
    raise NotConverged('kappa series', params.r_max, _tail(g, f, params.r_max))


def delta_threshold(tol=1e-12):
    """Largest delta whose kappa series converges to a value below 1."""
    if not tol > 0:
        raise InvalidSpec('tol must be positive, got {0}'.format(tol))

    def margin(delta):
        if delta <= 0:
            return -1.0
        try:
            return kappa_series(KappaSeriesParams(delta, tol=tol)) - 1.0
        except Divergent:
            return 1.0

    lo, hi = DELTA_BRACKET
    root, result = bisect(margin, lo, hi, xtol=DELTA_XTOL, rtol=4 * np.finfo(float).eps,
                          maxiter=200, full_output=True, disp=False)
    if not result.converged:
        raise NotConverged('delta threshold bisection', result.iterations)
    # bisect returns the bracket midpoint; step back inside the admissible side
    while margin(root) >= 0:
        root -= DELTA_XTOL
    _LOGGER.debug('delta threshold %.12f', root)
    return root


def alpha_from_kappa(kappa, variant=TIGHT):
    """pi / (2 (1 - kappa)), or pi / (sqrt 2 (1 - kappa)) for ``variant='loose'``."""
    kappa = float(kappa)
    if kappa < 0 or kappa >= 1:
        raise DomainError('kappa must lie in [0, 1), got {0}'.format(kappa))
    if variant == TIGHT:
        return math.pi / (2 * (1 - kappa))
    if variant == LOOSE:
        return math.pi / (math.sqrt(2) * (1 - kappa))
    raise InvalidSpec('unknown alpha variant {0!r}'.format(variant))


PhaseDecomposition = namedtuple(
    'PhaseDecomposition', 'z_part phase a_tilde correction kappa_emp residual')


def _check_phase_space(space):
    if space.is_grassmann:
        raise InvalidSpec('phase decomposition needs a Stiefel tangent',
                          space.family, space.k, space.n)
    if not (2 * space.k <= space.n or space.is_unitary):
        raise InvalidSpec('phase decomposition needs k <= n/2 or k = n',
                          space.family, space.k, space.n)


def _sinc_ratio(theta):
    # theta / sin(theta), 1 at 0
    return 1.0 / np.sinc(theta / np.pi)


def phase_decompose(x, base=None, point=None):
    """Factorise the geodesic endpoint exp(X) [I; 0] = exp(Z) [v; 0].

    Z is the Grassmann tangent from <[I; 0]> to the span of the endpoint,
    built from the principal angles; v is the remaining phase in U(k). With a
    *base* (and optionally the *point* reached from it) the pair is first moved
    back to the canonical frame, so the result depends only on the pair up to
    isometry.

    """
    space = x.space
    _check_phase_space(space)
    k, n = space.k, space.n
    if point is None:
        if base is None:
            phi = expm_skew_hermitian(x.matrix())[:, :k]
        else:
            phi = exp_point(base, x).frame
    else:
        phi = point.frame
    if base is not None:
        if base.shape != (n, k):
            raise DimensionMismatch(base.shape, (n, k))
        phi = unitary_completion(base.frame).conj().T @ phi

    top, bottom = phi[:k], phi[k:]
    w, c, qh = np.linalg.svd(top)
    theta = np.arccos(np.clip(c, 0.0, 1.0))
    phase = w @ qh
    b_z = bottom @ (qh.conj().T * _sinc_ratio(theta)) @ w.conj().T
    z_space = space if space.is_unitary else SpaceSpec.grassmann(k, n)
    z_part = HorizontalTangent(np.zeros((k, k)), b_z, z_space)

    stripped = expm_skew_hermitian(-z_part.matrix()) @ phi
    target = np.zeros((n, k), dtype=np.complex128)
    target[:k] = phase
    residual = float(np.linalg.norm(stripped - target))
    if residual > RESIDUAL_TOL:
        raise DecompositionResidual(residual, RESIDUAL_TOL)

    a_tilde = log_unitary(phase)
    a = np.asarray(x.a_block)
    correction = a_tilde - a
    a_norm = np.linalg.norm(a)
    kappa_emp = float(np.linalg.norm(correction) / a_norm) if a_norm >= ZERO_NORM else 0.0
    return PhaseDecomposition(z_part, phase, a_tilde, correction, kappa_emp, residual)


KappaHistogram = namedtuple(
    'KappaHistogram',
    'space delta samples mean_one_minus_kappa min max bin_edges bin_counts')


def kappa_histogram(space, delta, samples, seed=0):
    """Histogram of 1 - kappa_emp over random tangents with |X|_F = delta.

    Directions are isotropic in the horizontal coordinates; sample i uses the
    generator seeded with (seed, i). Values outside the binning range are
    counted in the nearest edge bin.

    """
    if space.is_grassmann:
        raise InvalidSpec('kappa histograms need a Stiefel space',
                          space.family, space.k, space.n)
    _check_phase_space(space)
    samples = int(samples)
    if samples < 1:
        raise InvalidSpec('samples must be positive, got {0}'.format(samples))
    delta = float(delta)
    if not delta > 0:
        raise InvalidSpec('delta must be positive, got {0}'.format(delta))

    # |X|_F^2 = |A|^2 + 2 |B|^2 = 2 r^2
    norm = delta / math.sqrt(2)
    values = np.empty(samples)
    for i in range(samples):
        t = random_tangent(space, norm, sample_generator(seed, i))
        values[i] = 1.0 - phase_decompose(t).kappa_emp
    lo, hi = HISTOGRAM_RANGE
    outside = np.count_nonzero((values < lo) | (values > hi))
    if outside:
        _LOGGER.warning('%d of %d samples of 1 - kappa fall outside [%g, %g]',
                        outside, samples, lo, hi)
    counts, edges = np.histogram(np.clip(values, lo, hi), bins=HISTOGRAM_BINS, range=(lo, hi))
    return KappaHistogram(
        space=space, delta=delta, samples=samples,
        mean_one_minus_kappa=float(values.mean()),
        min=float(values.min()), max=float(values.max()),
        bin_edges=edges, bin_counts=counts,
    )


SandwichReport = namedtuple(
    'SandwichReport',
    'space samples violations_lower violations_upper upper_checked worst_ratio')


def sandwich_bounds(space):
    """(beta, alpha or None): the constants asserted by :func:`verify_sandwich`."""
    if space.is_grassmann:
        return 1.0, math.pi / 2
    if space.is_unitary:
        return 1 / math.sqrt(2), math.pi / (2 * math.sqrt(2))
    return 1 / math.sqrt(2), None


def sandwich_violations(space, d, r):
    """Whether (d, r) violates the lower and the upper inequality."""
    beta, alpha = sandwich_bounds(space)
    lower = beta * d > r + SANDWICH_TOL
    upper = alpha is not None and r > alpha * d + SANDWICH_TOL
    return lower, upper


def _pair_distances(space, base, point, tangent):
    if space.is_grassmann:
        return chordal_grassmann(base, point), geodesic_grassmann(base, point)
    return chordal_stiefel(base, point), tangent_norm(tangent)


def verify_sandwich(space, samples, seed=0, max_norm=1.0):
    """Count violations of beta d <= r <= alpha d over random pairs
    (base, exp_point(base, X)) with |X| uniform in [0, max_norm].

    On Grassmann spaces r is the geodesic distance from the principal angles,
    on Stiefel spaces the length of the generating tangent. The upper side of
    V_{k,n} with k < n has no proven constant and is not counted.

    """
    samples = int(samples)
    if samples < 1:
        raise InvalidSpec('samples must be positive, got {0}'.format(samples))
    max_norm = float(max_norm)
    if not max_norm > 0:
        raise InvalidSpec('max_norm must be positive, got {0}'.format(max_norm))
    if max_norm > 1:
        _LOGGER.warning('max_norm %g > 1: geodesics may stop minimising', max_norm)
    beta, alpha = sandwich_bounds(space)
    lower_count = upper_count = 0
    worst = 0.0
    for i in range(samples):
        rng = sample_generator(seed, i)
        base = haar_point(space, rng)
        tangent = random_tangent(space, max_norm * rng.uniform(), rng)
        point = exp_point(base, tangent)
        d, r = _pair_distances(space, base, point, tangent)
        lower, upper = sandwich_violations(space, d, r)
        lower_count += lower
        upper_count += upper
        if d > 0:
            worst = max(worst, r / d)
    if lower_count or upper_count:
        _LOGGER.warning('sandwich violations on %r: %d lower, %d upper',
                        space, lower_count, upper_count)
    return SandwichReport(space, samples, lower_count, upper_count, alpha is not None, worst)
