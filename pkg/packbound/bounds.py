"""
Gilbert-Varshamov and Hamming bounds on the minimal geodesic distance of a
packing C with |C| = 2^{nR}, plus the asymptotic quantities that go with them.

The GV radius inverts the flat (upper) ball volume, the Hamming radius inverts
the ball volume of the sphere of curvature kappa_bar (a lower volume bound) and
is doubled. Coding-space distances are obtained through the metric equivalence
constants beta d <= r <= alpha d and the power normalisation sqrt(mu n / k).

"""
import logging
import math
from collections import namedtuple

from scipy.optimize import bisect

from packbound.errors import DomainError, InvalidSpec, NotConverged
from packbound.geometry.curvature import curvature_cap
from packbound.geometry.space import SpaceSpec
from packbound.volumes import (
    BallModel, ball_volume_curved, log_ball_volume, log_vol,
)

_LOGGER = logging.getLogger(__name__)

LOG_2 = math.log(2.0)

MAX_ITER = 200
RTOL = 1e-10
XTOL = 1e-300

# alpha for V_{k,n}, k < n, read off sampled phase corrections (1 - kappa ~ 0.9)
STIEFEL_ALPHA = math.pi / (2 * 0.9)


class _Infeasible(object):
    """Sentinel for a Hamming radius that does not exist inside the comparison
    domain [0, pi/sqrt(kappa_bar)].

    """
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(_Infeasible, cls).__new__(cls)
        return cls._instance

    def __repr__(self):
        return 'INFEASIBLE'

    __str__ = __repr__

    def __bool__(self):
        return False

    def __reduce__(self):
        return (_Infeasible, ())


INFEASIBLE = _Infeasible()


def is_infeasible(value):
    return value is INFEASIBLE


class BoundQuery(namedtuple('BoundQuery', 'space rate')):
    """A space together with a rate R = log2(|C|) / n."""
    __slots__ = ()

    def __new__(cls, space, rate):
        if not isinstance(space, SpaceSpec):
            raise InvalidSpec('expected a SpaceSpec, got {0!r}'.format(space))
        rate = float(rate)
        if not rate > 0 or not math.isfinite(rate):
            raise InvalidSpec('rate must be a positive number, got {0}'.format(rate),
                              space.family, space.k, space.n)
        return super(BoundQuery, cls).__new__(cls, space, rate)

    @property
    def log_target(self):
        """log(vol M 2^{-nR}), the volume one codeword may claim."""
        return log_vol(self.space) - self.space.n * self.rate * LOG_2


class EquivConstants(namedtuple('EquivConstants', 'alpha beta mu alpha_rigorous')):
    """Constants of beta d <= r <= alpha d and the power factor mu."""
    __slots__ = ()

    def __new__(cls, alpha, beta, mu, alpha_rigorous=True):
        alpha, beta, mu = float(alpha), float(beta), float(mu)
        if alpha <= 0 or beta <= 0 or mu <= 0:
            raise InvalidSpec('alpha, beta and mu must be positive')
        if beta > alpha:
            raise InvalidSpec('beta={0} exceeds alpha={1}'.format(beta, alpha))
        return super(EquivConstants, cls).__new__(cls, alpha, beta, mu, bool(alpha_rigorous))


BoundReport = namedtuple('BoundReport', [
    'space', 'rate', 'D', 'log_vol', 'gv_lower', 'hamming_upper', 'theorem_floor',
    'coding_lower', 'coding_upper', 'kappa_bar', 'constants',
])

BargNogin = namedtuple('BargNogin', 'geodesic_lo geodesic_hi chordal_lo chordal_hi')

BFactor = namedtuple('BFactor', 'log_B b')


def dimension(space):
    if not isinstance(space, SpaceSpec):
        raise InvalidSpec('expected a SpaceSpec, got {0!r}'.format(space))
    return space.dimension


def default_kappa_bar(space):
    return curvature_cap(space)


def default_constants(space):
    if space.is_grassmann:
        return EquivConstants(math.pi / 2, 1.0, 0.5)
    beta = 1 / math.sqrt(2)
    if space.is_unitary:
        return EquivConstants(math.pi / (2 * math.sqrt(2)), beta, 1.0)
    return EquivConstants(STIEFEL_ALPHA, beta, 1.0, alpha_rigorous=False)


def invert_ball_volume(model, log_target):
    """Radius r in [0, pi/sqrt(kappa)] with log v^kappa(r) = log_target, by
    bisection. Returns INFEASIBLE when the target exceeds the whole model.

    """
    if model.curvature == 0:
        d = model.dimension
        return math.exp((log_target - log_ball_volume(d)) / d)
    hi = model.max_radius
    log_max = model.log_total_volume()
    if log_target > log_max:
        _LOGGER.debug('target %.6g exceeds the model sphere %.6g', log_target, log_max)
        return INFEASIBLE

    def objective(r):
        return ball_volume_curved(model, r) - log_target

    if objective(hi) <= 0:
        return hi
    root, result = bisect(objective, 0.0, hi, xtol=XTOL, rtol=RTOL, maxiter=MAX_ITER,
                          full_output=True, disp=False)
    if not result.converged:
        raise NotConverged('ball volume inversion', result.iterations)
    _LOGGER.debug('inverted %r at %.6g after %d steps', model, root, result.iterations)
    return root


def gv_lower(query):
    """r_0 with |B^D| r_0^D = vol M 2^{-nR}: a code of this minimal distance exists."""
    d = query.space.dimension
    return math.exp((query.log_target - log_ball_volume(d)) / d)


def hamming_upper(query, kappa_bar=None):
    """2 r with v^{kappa_bar}(r) = vol M 2^{-nR}: no code beats this minimal
    distance. INFEASIBLE when no such r <= pi/sqrt(kappa_bar) exists.

    """
    space = query.space
    kappa = default_kappa_bar(space) if kappa_bar is None else float(kappa_bar)
    if kappa <= 0:
        raise InvalidSpec('kappa_bar must be positive, got {0}'.format(kappa))
    r = invert_ball_volume(BallModel(kappa, space.dimension), query.log_target)
    if r is INFEASIBLE:
        return INFEASIBLE
    return 2.0 * r


def theorem_floor(query):
    """2^{-nR/D}, a lower bound on the GV radius increasing in n."""
    space = query.space
    return 2.0 ** (-space.n * query.rate / space.dimension)


def asymptotic_limit(k, rate):
    """Limit of the GV radius as n -> infinity: sqrt(k 2^{-R/k})."""
    k = int(k)
    if k < 1 or not rate > 0:
        raise InvalidSpec('asymptotic limit needs k >= 1 and R > 0')
    return math.sqrt(k * 2.0 ** (-rate / k))


def barg_nogin(k, rate):
    """Asymptotic GV / Hamming bounds for Grassmann codes in the geodesic and
    chordal distances.

    """
    k = int(k)
    if k < 1 or not rate > 0:
        raise InvalidSpec('Barg-Nogin bounds need k >= 1 and R > 0')
    s = 2.0 ** (-rate / (2 * k))
    if s > 1:
        raise DomainError('arcsin argument {0} exceeds 1'.format(s))
    geodesic_lo = math.sqrt(k) * math.asin(s)
    q = 2.0 ** (-rate / k)
    return BargNogin(
        geodesic_lo=geodesic_lo,
        geodesic_hi=2 * geodesic_lo,
        chordal_lo=math.sqrt(k * q),
        chordal_hi=math.sqrt(2 * k * (1 - (1 - q) ** 2)),
    )


def b_factor(space):
    """log B = log(vol M / |B^D|) and b = B^{1/D}; GV radius = 2^{-nR/D} b."""
    log_b = log_vol(space) - log_ball_volume(space.dimension)
    return BFactor(log_b, math.exp(log_b / space.dimension))


def _scale(query, constants):
    space = query.space
    return math.sqrt(constants.mu * space.n / space.k)


def coding_bounds(query, constants=None, kappa_bar=None):
    """Lower and upper bounds on the normalised coding (chordal) distance.
    The upper value is INFEASIBLE when the Hamming radius is.

    """
    if constants is None:
        constants = default_constants(query.space)
    scale = _scale(query, constants)
    lower = scale * gv_lower(query) / constants.alpha
    upper = hamming_upper(query, kappa_bar)
    if upper is not INFEASIBLE:
        upper = scale * upper / constants.beta
    return lower, upper


def coding_floor(query, constants=None):
    """(sqrt(mu) / alpha) sqrt(n/k) 2^{-nR/D}, the closed form companion of the
    coding lower bound.

    """
    if constants is None:
        constants = default_constants(query.space)
    return _scale(query, constants) * theorem_floor(query) / constants.alpha


def rate_for_radius(space, radius):
    """The rate at which the GV radius equals *radius*."""
    radius = float(radius)
    if radius <= 0:
        raise DomainError('radius must be positive, got {0}'.format(radius))
    d = space.dimension
    log_b = log_vol(space) - log_ball_volume(d) - d * math.log(radius)
    return log_b / (space.n * LOG_2)


def bound_report(query, kappa_bar=None, constants=None):
    space = query.space
    kappa = default_kappa_bar(space) if kappa_bar is None else float(kappa_bar)
    if constants is None:
        constants = default_constants(space)
    lower = gv_lower(query)
    upper = hamming_upper(query, kappa)
    coding_lower, coding_upper = coding_bounds(query, constants, kappa)
    return BoundReport(
        space=space,
        rate=query.rate,
        D=space.dimension,
        log_vol=log_vol(space),
        gv_lower=lower,
        hamming_upper=upper,
        theorem_floor=theorem_floor(query),
        coding_lower=coding_lower,
        coding_upper=coding_upper,
        kappa_bar=kappa,
        constants=constants,
    )
