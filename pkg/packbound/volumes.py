"""
Total volumes and geodesic ball volumes, all carried as natural logarithms.

Factorials overflow a double near 170, well inside the dimensions this package
handles, so every function here returns log values and works with
:func:`scipy.special.gammaln`.

"""
import logging
import math
from collections import namedtuple

import numpy as np
from scipy.integrate import quad
from scipy.special import gammaln

from packbound.errors import DomainError, InvalidSpec, NotConverged
from packbound.geometry.curvature import curvature_cap
from packbound.geometry.space import SpaceSpec, as_generator

_LOGGER = logging.getLogger(__name__)

LOG_PI = math.log(math.pi)
LOG_2 = math.log(2.0)

QUAD_EPSREL = 1e-12
QUAD_LIMIT = 200

DETERMINISTIC_MAX_K = 3
NESTED_EPSREL = 1e-11
NESTED_LIMIT = 100

MC_SAMPLES = 10 ** 6
MC_BATCH = 1 << 18
# Monte Carlo never claims more than three significant digits.
MC_MIN_RELATIVE_ERROR = 5e-4

DETERMINISTIC = 'deterministic'
MONTE_CARLO = 'montecarlo'


def log_sphere_volume(m):
    """log |S^{m-1}| = log(2 pi^{m/2} / Gamma(m/2))."""
    m = int(m)
    if m < 1:
        raise InvalidSpec('sphere volume needs m >= 1, got {0}'.format(m))
    return LOG_2 + 0.5 * m * LOG_PI - float(gammaln(0.5 * m))


def log_ball_volume(m):
    """log |B^m| = log(|S^{m-1}| / m)."""
    return log_sphere_volume(m) - math.log(int(m))


def log_vol_stiefel(k, n):
    """log vol V_{k,n} = sum_{i=n-k+1}^{n} log(2 pi^i / (i-1)!)."""
    k, n = int(k), int(n)
    if not 1 <= k <= n:
        raise InvalidSpec('Stiefel volume needs 1 <= k <= n, got k={0}, n={1}'.format(k, n),
                          'stiefel', k, n)
    i = np.arange(n - k + 1, n + 1, dtype=np.float64)
    return float(np.sum(LOG_2 + i * LOG_PI - gammaln(i)))


def log_vol_unitary(n):
    """log vol U(n) from vol U(m) = |S^{2m-1}| vol U(m-1)."""
    n = int(n)
    if n < 1:
        raise InvalidSpec('U(n) needs n >= 1, got {0}'.format(n))
    return math.fsum(log_sphere_volume(2 * m) for m in range(1, n + 1))


def log_vol_grassmann(k, n):
    """log vol G_{k,n} = log vol V_{k,n} - log vol U(k)."""
    k, n = int(k), int(n)
    if k < 1 or 2 * k > n:
        raise InvalidSpec('Grassmann volume needs 1 <= k <= n/2, got k={0}, n={1}'.format(k, n),
                          'grassmann', k, n)
    return log_vol_stiefel(k, n) - log_vol_stiefel(k, k)


def log_vol(space):
    if space.is_grassmann:
        return log_vol_grassmann(space.k, space.n)
    return log_vol_stiefel(space.k, space.n)


class BallModel(object):
    """The simply connected D-dimensional space form of constant curvature
    kappa >= 0. Radii are limited to [0, pi/sqrt(kappa)] when kappa > 0.

    """
    __slots__ = ('_curvature', '_dimension')

    def __init__(self, curvature, dimension):
        curvature, dimension = float(curvature), int(dimension)
        if curvature < 0 or not math.isfinite(curvature):
            raise InvalidSpec('ball model curvature must be finite and >= 0, got {0}'.format(curvature))
        if dimension < 1:
            raise InvalidSpec('ball model dimension must be positive, got {0}'.format(dimension))
        self._curvature = curvature
        self._dimension = dimension

    @property
    def curvature(self):
        return self._curvature

    @property
    def dimension(self):
        return self._dimension

    @property
    def max_radius(self):
        if self._curvature == 0:
            return math.inf
        return math.pi / math.sqrt(self._curvature)

    def log_total_volume(self):
        """log of the volume of the whole model sphere (1/sqrt(kappa))^D |S^D|."""
        if self._curvature == 0:
            return math.inf
        d = self._dimension
        return log_sphere_volume(d + 1) - 0.5 * d * math.log(self._curvature)

    def __repr__(self):
        return 'BallModel(curvature={0!r}, dimension={1})'.format(self._curvature, self._dimension)


def _quad_message(result):
    # quad(..., full_output=1) appends a message only when ier > 0
    return result[3] if len(result) > 3 else None


def ball_volume_curved(model, r):
    """log v^kappa(r), the volume of a geodesic ball of radius r in *model*.

    kappa = 0 uses the closed form |B^D| r^D. kappa > 0 integrates
    sin(sqrt(kappa) t)^{D-1} with the integrand rescaled by its maximum on
    [0, r] so that large D neither underflows nor loses relative accuracy.

    """
    r = float(r)
    if r < 0 or math.isnan(r):
        raise DomainError('ball radius must be >= 0, got {0}'.format(r))
    d = model.dimension
    if model.curvature == 0:
        if r == 0:
            return -math.inf
        return log_ball_volume(d) + d * math.log(r)
    r_max = model.max_radius
    if r > r_max * (1 + 1e-12):
        raise DomainError('radius {0} exceeds pi/sqrt(kappa) = {1}'.format(r, r_max))
    r = min(r, r_max)
    if r == 0:
        return -math.inf
    sk = math.sqrt(model.curvature)
    prefactor = log_sphere_volume(d) - (d - 1) * math.log(sk)
    if d == 1:
        return prefactor + math.log(r)

    half = 0.5 * r_max
    log_peak = (d - 1) * math.log(math.sin(sk * min(r, half)))

    def integrand(t):
        s = math.sin(sk * t)
        if s <= 0.0:
            return 0.0
        return math.exp((d - 1) * math.log(s) - log_peak)

    points = [half] if r > half else None
    result = quad(integrand, 0.0, r, epsabs=0.0, epsrel=QUAD_EPSREL,
                  limit=QUAD_LIMIT, points=points, full_output=1)
    value, abserr = result[0], result[1]
    message = _quad_message(result)
    if message:
        _LOGGER.debug('ball_volume_curved(%r, %g): %s', model, r, message)
    if value <= 0:
        raise NotConverged('ball volume quadrature', QUAD_LIMIT, abserr)
    return prefactor + log_peak + math.log(value)


def grassmann_ball_k1(n, r):
    """log vol of a geodesic ball in G_{1,n} = CP^{n-1}: vol G_{1,n} sin^{2(n-1)} r,
    the whole space once r >= pi/2.

    """
    r = float(r)
    if r < 0:
        raise DomainError('ball radius must be >= 0, got {0}'.format(r))
    if r == 0:
        return -math.inf
    return log_vol_grassmann(1, n) + 2 * (n - 1) * math.log(math.sin(min(r, math.pi / 2)))


# Exact Grassmann balls

def _log_density_constant(k, n):
    """log of 2^k |G_{k,n}| prod_i (n-i)! / ((i-1)!^2 (n-k-i)!), the density of
    the ordered principal angles of a Haar point against a fixed one, scaled to
    the volume of G_{k,n}.

    """
    i = np.arange(1, k + 1, dtype=np.float64)
    log_c = np.sum(gammaln(n - i + 1) - 2 * gammaln(i) - gammaln(n - k - i + 1))
    return k * LOG_2 + log_vol_grassmann(k, n) + float(log_c)


def _log_weight_scale(k, n, r):
    # upper bound for the sine powers on the ball, used to keep the integrand O(1)
    a = 2 * (n - 2 * k) + 1
    return k * a * math.log(math.sin(min(r, math.pi / 2)))


def _angle_weight(theta, k, n, log_scale):
    """Unnormalised angle density, divided by exp(log_scale). *theta* is a
    (..., k) array; no ordering is assumed (the density is symmetric).

    """
    a = 2 * (n - 2 * k) + 1
    s = np.sin(theta)
    with np.errstate(divide='ignore'):
        log_w = a * np.sum(np.log(s), axis=-1) - log_scale
    w = np.exp(log_w) * np.prod(np.cos(theta), axis=-1)
    s2 = s * s
    for j in range(k):
        for l in range(j + 1, k):
            w = w * (s2[..., j] - s2[..., l]) ** 2
    return w


def _validate_ball(k, n, r):
    SpaceSpec.grassmann(k, n)
    r = float(r)
    full = math.sqrt(k) * math.pi / 2
    if r < 0 or r > full * (1 + 1e-12):
        raise InvalidSpec(
            'exact ball radius must lie in [0, sqrt(k) pi/2] = [0, {0:.6g}], got {1}'.format(full, r),
            'grassmann', k, n
        )
    return min(r, full)


def _nested_integral(k, n, r, log_scale):
    """Iterated adaptive quadrature over 0 < t_1 < ... < t_k < pi/2 with
    |t| <= r. The limits of each level are fitted to the ball, so no indicator
    is ever integrated.

    """
    r2 = r * r
    failures = []
    outer = []

    def upper(prev_sq, remaining):
        room = r2 - prev_sq
        if room <= 0:
            return 0.0
        return min(math.pi / 2, math.sqrt(room / remaining))

    def level(depth, prefix, prefix_sq):
        lo = prefix[-1] if prefix else 0.0
        hi = upper(prefix_sq, k - depth)
        if hi <= lo:
            return 0.0
        if depth == k - 1:
            def f(t):
                return float(_angle_weight(np.array(prefix + [t]), k, n, log_scale))
        else:
            def f(t):
                return level(depth + 1, prefix + [t], prefix_sq + t * t)
        res = quad(f, lo, hi, epsabs=0.0, epsrel=NESTED_EPSREL, limit=NESTED_LIMIT,
                   full_output=1)
        message = _quad_message(res)
        if message and res[2].get('last', 0) >= NESTED_LIMIT:
            failures.append(message)
        if depth == 0:
            outer.append(res[1])
        return res[0]

    value = level(0, [], 0.0)
    if failures:
        raise NotConverged('exact Grassmann ball quadrature', NESTED_LIMIT)
    abserr = outer[0] if outer else 0.0
    return value, (abserr / value if value > 0 else 0.0)


def _monte_carlo_integral(k, n, r, log_scale, samples, seed):
    """Mean of the (unordered) density over the cube [0, pi/2]^k with the ball
    indicator. Batches use spawned seeds and are reduced in order.

    """
    if isinstance(seed, np.random.Generator):
        root = np.random.SeedSequence(int(seed.integers(2 ** 63)))
    else:
        root = np.random.SeedSequence(seed)
    batches = int(math.ceil(samples / MC_BATCH))
    total = 0.0
    total_sq = 0.0
    count = 0
    for b, child in enumerate(root.spawn(batches)):
        size = min(MC_BATCH, samples - b * MC_BATCH)
        rng = as_generator(child)
        theta = rng.uniform(0.0, math.pi / 2, size=(size, k))
        w = _angle_weight(theta, k, n, log_scale)
        w[np.sum(theta * theta, axis=1) > r * r] = 0.0
        total += float(np.sum(w))
        total_sq += float(np.sum(w * w))
        count += size
    mean = total / count
    var = max(total_sq / count - mean * mean, 0.0)
    cube = (math.pi / 2) ** k / math.factorial(k)
    return mean * cube, math.sqrt(var / count) * cube


def exact_grassmann_ball(k, n, r, method=DETERMINISTIC, seed=None, samples=MC_SAMPLES):
    """log vol of the geodesic ball of radius r in G_{k,n}, from the joint
    density of the principal angles. Returns ``(log_volume, error)`` where
    *error* is a relative error estimate (the quadrature estimate, or the
    Monte Carlo standard error floored at three significant digits).

    """
    k, n = int(k), int(n)
    r = _validate_ball(k, n, r)
    method = str(method).lower().replace('-', '').replace('_', '')
    if method not in (DETERMINISTIC, MONTE_CARLO):
        raise InvalidSpec('unknown integration method {0!r}'.format(method))
    if r == 0:
        return -math.inf, 0.0
    log_scale = _log_weight_scale(k, n, r)
    log_const = _log_density_constant(k, n)
    if method == DETERMINISTIC:
        if k > DETERMINISTIC_MAX_K:
            raise InvalidSpec('deterministic exact ball volumes need k <= {0}'.format(
                DETERMINISTIC_MAX_K), 'grassmann', k, n)
        value, error = _nested_integral(k, n, r, log_scale)
        error = max(error, NESTED_EPSREL)
    else:
        value, stderr = _monte_carlo_integral(k, n, r, log_scale, int(samples), seed)
        if value <= 0:
            raise NotConverged('Monte Carlo ball volume (no sample hit the ball)', int(samples))
        error = max(stderr / value, MC_MIN_RELATIVE_ERROR)
        if error > 1e-3:
            _LOGGER.warning('Monte Carlo relative error %.2e for G_{%d,%d}, r=%g', error, k, n, r)
    if value <= 0:
        raise NotConverged('exact Grassmann ball quadrature', NESTED_LIMIT)
    _LOGGER.debug('exact ball G_{%d,%d} r=%g: %s, relative error %.2e', k, n, r, method, error)
    return log_const + log_scale + math.log(value), error


VolumeEnvelope = namedtuple('VolumeEnvelope', 'radius lower exact upper exact_error')


def ball_volume_envelope(space, r, kappa_bar=None, method=DETERMINISTIC, seed=None):
    """Lower comparison volume v^{kappa_bar}(r), the exact volume where one is
    available (Grassmann) and the flat upper volume |B^D| r^D, all as logs.
    The lower value is clamped to the full model sphere past pi/sqrt(kappa_bar).

    """
    d = space.dimension
    kappa = curvature_cap(space) if kappa_bar is None else float(kappa_bar)
    model = BallModel(kappa, d)
    lower = ball_volume_curved(model, min(r, model.max_radius))
    upper = ball_volume_curved(BallModel(0.0, d), r)
    exact, exact_error = None, None
    if space.is_grassmann:
        full = math.sqrt(space.k) * math.pi / 2
        if space.k == 1 and method == DETERMINISTIC:
            exact, exact_error = grassmann_ball_k1(space.n, min(r, full)), 0.0
        elif method != DETERMINISTIC or space.k <= DETERMINISTIC_MAX_K:
            exact, exact_error = exact_grassmann_ball(space.k, space.n, min(r, full),
                                                      method=method, seed=seed)
    return VolumeEnvelope(float(r), lower, exact, upper, exact_error)
