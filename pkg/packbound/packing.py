"""
Greedy packings and the empirical checks of the Gilbert-Varshamov (existence)
and Hamming (necessity) inequalities.

The greedy construction draws Haar points from a single seeded generator and
accepts a draw when it keeps distance >= d0 to every accepted point. It stops
after T consecutive rejections, which is how "maximal" is read here.

"""
import logging
import math
from collections import namedtuple

import numpy as np

from packbound.bounds import default_constants, default_kappa_bar
from packbound.errors import InvalidSpec, TooFewPoints
from packbound.geometry.distance import (
    batch_chordal_grassmann, batch_chordal_stiefel, batch_geodesic_grassmann,
    pairwise_chordal_grassmann, pairwise_chordal_stiefel, pairwise_geodesic_grassmann,
)
from packbound.geometry.space import (
    SpaceSpec, StiefelPoint, as_generator, haar_frames, haar_stiefel,
)
from packbound.volumes import (
    BallModel, ball_volume_curved, grassmann_ball_k1, log_vol,
)

_LOGGER = logging.getLogger(__name__)

GEODESIC_GRASSMANN = 'geodesic-grassmann'
CHORDAL_STIEFEL = 'chordal-stiefel'
CHORDAL_GRASSMANN = 'chordal-grassmann'
METRICS = (GEODESIC_GRASSMANN, CHORDAL_STIEFEL, CHORDAL_GRASSMANN)

DEFAULT_REJECTION_CAP = 10000
# candidates drawn per batch, and the complex entries one pairwise call may hold
MAX_CANDIDATE_BATCH = 64
PAIRWISE_BUDGET = 2 ** 21
HAMMING_TOL = 1e-9
# GV floors above this are reported, never asserted
ASSERTED_FLOOR = 2

_BATCH_DISTANCE = {
    GEODESIC_GRASSMANN: batch_geodesic_grassmann,
    CHORDAL_STIEFEL: batch_chordal_stiefel,
    CHORDAL_GRASSMANN: batch_chordal_grassmann,
}

_PAIRWISE_DISTANCE = {
    GEODESIC_GRASSMANN: pairwise_geodesic_grassmann,
    CHORDAL_STIEFEL: pairwise_chordal_stiefel,
    CHORDAL_GRASSMANN: pairwise_chordal_grassmann,
}


def parse_metric(metric, space=None):
    """Normalise a metric name. Plain 'chordal' picks the chordal metric of
    *space*; plain 'geodesic' means the Grassmann geodesic distance.

    """
    key = str(metric).strip().lower().replace('_', '').replace('-', '')
    if key == 'chordal' and space is not None:
        return CHORDAL_GRASSMANN if space.is_grassmann else CHORDAL_STIEFEL
    if key == 'geodesic':
        return GEODESIC_GRASSMANN
    for name in METRICS:
        if key == name.replace('-', ''):
            return name
    raise InvalidSpec('unknown metric {0!r}; use one of {1}'.format(metric, ', '.join(METRICS)))


def default_metric(space):
    return GEODESIC_GRASSMANN if space.is_grassmann else CHORDAL_STIEFEL


def _check_metric(space, metric):
    metric = parse_metric(metric, space) if metric is not None else default_metric(space)
    if space.is_grassmann == (metric == CHORDAL_STIEFEL):
        raise InvalidSpec('metric {0} does not apply to {1!r}'.format(metric, space),
                          space.family, space.k, space.n)
    return metric


class Codebook(object):
    """A finite set of points of a space together with the metric its
    minimal distance is measured in. Grassmann codebooks store frames as
    representatives.

    """
    def __init__(self, space, points, metric=None, known_min_distance=None):
        self._space = space
        self._metric = _check_metric(space, metric)
        points = [p if isinstance(p, StiefelPoint) else StiefelPoint(p) for p in points]
        if not points:
            raise InvalidSpec('a codebook needs at least one point')
        for p in points:
            if p.shape != (space.n, space.k):
                raise InvalidSpec('point of shape {0} in a codebook for {1!r}'.format(p.shape, space))
        self._points = tuple(points)
        self._frames = np.stack([p.frame for p in points])
        self._frames.setflags(write=False)
        self._known_min_distance = known_min_distance

    @property
    def space(self):
        return self._space

    @property
    def metric(self):
        return self._metric

    @property
    def points(self):
        return self._points

    @property
    def frames(self):
        return self._frames

    @property
    def cached_min_distance(self):
        """Minimal distance recorded when the codebook was built, or None."""
        return self._known_min_distance

    @property
    def size(self):
        return len(self._points)

    def __len__(self):
        return len(self._points)

    def distances_to(self, point):
        """Distances from every codeword to *point* in the codebook's metric."""
        return _BATCH_DISTANCE[self._metric](self._frames, point)

    def to_dict(self):
        return {
            'family': self._space.family,
            'k': self._space.k,
            'n': self._space.n,
            'metric': self._metric,
            'points': [
                [[[float(z.real), float(z.imag)] for z in row] for row in frame]
                for frame in self._frames
            ],
        }

    @classmethod
    def from_dict(cls, data):
        space = SpaceSpec(data['family'], data['k'], data['n'])
        points = []
        for frame in data['points']:
            arr = np.array(frame, dtype=np.float64)
            points.append(StiefelPoint(arr[..., 0] + 1j * arr[..., 1]))
        return cls(space, points, data['metric'])

    def __repr__(self):
        return 'Codebook({0!r}, size={1}, metric={2!r})'.format(self._space, self.size, self._metric)


class GreedyConfig(namedtuple('GreedyConfig', 'seed target_distance rejection_cap')):
    __slots__ = ()

    def __new__(cls, seed, target_distance, rejection_cap=DEFAULT_REJECTION_CAP):
        rejection_cap = int(rejection_cap)
        target_distance = float(target_distance)
        if rejection_cap < 1:
            raise InvalidSpec('rejection cap must be at least 1, got {0}'.format(rejection_cap))
        if not target_distance > 0:
            raise InvalidSpec('target distance must be positive, got {0}'.format(target_distance))
        return super(GreedyConfig, cls).__new__(cls, seed, target_distance, rejection_cap)


def min_distance(cb):
    if cb.size < 2:
        raise TooFewPoints(cb.size)
    if cb.cached_min_distance is not None:
        return cb.cached_min_distance
    frames = cb.frames
    best = math.inf
    for i in range(1, cb.size):
        best = min(best, float(np.min(_BATCH_DISTANCE[cb.metric](frames[:i], frames[i]))))
    return best


def _candidate_batch(space, size):
    # pairwise workspace is at most (batch, size, n, k)
    per_candidate = size * space.n * space.k
    return int(min(MAX_CANDIDATE_BATCH, max(1, PAIRWISE_BUDGET // per_candidate)))


def greedy_pack(space, metric, config):
    """Greedy rejection packing with minimal distance >= config.target_distance.

    Candidates are drawn in batches from one generator; a batch is compared
    with every accepted frame in a single pairwise call and then accepted in
    draw order. The smallest distance seen at acceptance is cached on the
    codebook, so :func:`min_distance` costs nothing afterwards.

    """
    metric = _check_metric(space, metric)
    pairwise = _PAIRWISE_DISTANCE[metric]
    rng = as_generator(config.seed)
    d0 = config.target_distance
    capacity = 16
    frames = np.empty((capacity, space.n, space.k), dtype=np.complex128)
    frames[0] = haar_stiefel(space, rng).frame
    size = 1
    nearest = math.inf
    rejections = 0
    draws = 1
    while rejections < config.rejection_cap:
        candidates = haar_frames(space, _candidate_batch(space, size), rng)
        to_accepted = pairwise(frames[:size], candidates).min(axis=1)
        start = size
        for candidate, d in zip(candidates, to_accepted):
            draws += 1
            if size > start:
                d = min(d, pairwise(frames[start:size], candidate[np.newaxis]).min())
            if d < d0:
                rejections += 1
                if rejections >= config.rejection_cap:
                    break
                continue
            if size == capacity:
                capacity *= 2
                frames = np.concatenate([frames, np.empty_like(frames)])
            frames[size] = candidate
            size += 1
            nearest = min(nearest, float(d))
            rejections = 0
            _LOGGER.debug('accepted point %d after %d draws', size, draws)
    _LOGGER.info('greedy packing of %r at d0=%g: %d points from %d draws',
                 space, d0, size, draws)
    points = [StiefelPoint(f, check=False) for f in frames[:size]]
    return Codebook(space, points, metric,
                    known_min_distance=nearest if size > 1 else None)


def rate(cb):
    """R = log2(|C|) / n."""
    return math.log2(cb.size) / cb.space.n


HammingCheck = namedtuple('HammingCheck', 'lhs_log rhs_log passes radius kappa_bar')


def hamming_radius(metric, d0):
    """Geodesic radius of disjoint balls around the codewords of a code with
    minimal distance d0 in *metric*.

    """
    if metric == CHORDAL_STIEFEL:
        return d0 / (2 * math.sqrt(2))
    # chordal Grassmann distances bound geodesic ones from below (beta = 1)
    return d0 / 2


def check_hamming(cb, kappa_bar=None):
    """log v^{kappa_bar}(radius) + log|C| <= log vol M, with v^{kappa_bar} the
    guaranteed lower ball volume. A failure means the codebook is not a packing.

    """
    d0 = min_distance(cb)
    space = cb.space
    kappa = default_kappa_bar(space) if kappa_bar is None else float(kappa_bar)
    model = BallModel(kappa, space.dimension)
    radius = min(hamming_radius(cb.metric, d0), model.max_radius)
    lhs = ball_volume_curved(model, radius) + math.log(cb.size)
    rhs = log_vol(space)
    passes = lhs <= rhs + HAMMING_TOL
    if not passes:
        _LOGGER.warning('Hamming check failed for %r: %.12g > %.12g', cb, lhs, rhs)
    return HammingCheck(lhs, rhs, passes, radius, kappa)


GVCheck = namedtuple('GVCheck', 'gv_floor exact_floor radius asserted passes')


def gv_radius(space, metric, d0, constants=None):
    """Geodesic radius r0 whose balls cover M around a maximal packing of
    minimal distance d0.

    """
    if metric == GEODESIC_GRASSMANN:
        return d0
    if metric == CHORDAL_GRASSMANN:
        return math.pi / 2 * d0
    if constants is None:
        constants = default_constants(space)
    return constants.alpha * d0


def _floor_from_logs(log_num, log_den):
    ratio = log_num - log_den
    if ratio > 700:
        return math.inf
    return max(1, int(math.floor(math.exp(ratio) * (1 + 1e-12))))


def _exact_floor(space, metric, d0):
    # closed form ball volume on G_{1,n}
    if not space.is_grassmann or space.k != 1:
        return None
    if metric == GEODESIC_GRASSMANN:
        r = min(d0, math.pi / 2)
    else:
        r = math.asin(min(d0, 1.0))
    return _floor_from_logs(log_vol(space), grassmann_ball_k1(space.n, r))


def check_gv(space, metric, d0, achieved_size, constants=None):
    """Compare a maximal packing's size with vol M / v^0(r0) and, on G_{1,n},
    with the exact vol M / v(r0). Only floors <= 2 are asserted; above that
    ``passes`` is None.

    """
    metric = _check_metric(space, metric)
    d0 = float(d0)
    if not d0 > 0:
        raise InvalidSpec('d0 must be positive, got {0}'.format(d0))
    r0 = gv_radius(space, metric, d0, constants)
    flat = ball_volume_curved(BallModel(0.0, space.dimension), r0)
    gv_floor = _floor_from_logs(log_vol(space), flat)
    exact = _exact_floor(space, metric, d0)
    floor = max(gv_floor, exact or 0)
    asserted = floor <= ASSERTED_FLOOR
    passes = (achieved_size >= floor) if asserted else None
    return GVCheck(gv_floor, exact, r0, asserted, passes)
