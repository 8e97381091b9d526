"""
Subcommands of the command line front end. Each ``run_*`` function takes a
:class:`packbound.RunConfig`, writes its result and returns the exit status.

"""
import logging

from packbound.bounds import (
    BoundQuery, EquivConstants, barg_nogin, bound_report, default_constants,
)
from packbound.equivalence import kappa_histogram, verify_sandwich
from packbound.errors import InvalidSpec, TooFewPoints
from packbound.geometry.curvature import curvature_scan, ricci_lower_bound
from packbound.geometry.distance import (
    chordal_grassmann, chordal_stiefel, geodesic_grassmann, principal_angles,
)
from packbound.geometry.space import SpaceSpec, haar_stiefel
from packbound.output import Table, open_output, write_json, write_table
from packbound.packing import (
    GreedyConfig, check_gv, check_hamming, greedy_pack, min_distance, rate,
)
from packbound.volumes import ball_volume_envelope

_LOGGER = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_NUMERICAL = 4


def iter_spaces(config):
    """Every valid (family, k, n) of the configured ranges, in table order.
    Raises the validation error of the first combination when none is valid.

    """
    found = False
    for family in config.families:
        for k in config.k_values:
            for n in config.n_values:
                try:
                    space = SpaceSpec(family, k, n)
                except InvalidSpec:
                    _LOGGER.debug('skipping %s k=%d n=%d', family, k, n)
                    continue
                found = True
                yield space
    if not found:
        SpaceSpec(config.families[0], config.k_values[0], config.n_values[0])


def single_space(config):
    spaces = list(iter_spaces(config))
    if len(spaces) != 1:
        raise InvalidSpec('{0} needs exactly one space'.format(config.subcommand))
    return spaces[0]


def _constants(config, space):
    constants = default_constants(space)
    if config.alpha is None and config.beta is None:
        return constants
    return EquivConstants(
        config.alpha if config.alpha is not None else constants.alpha,
        config.beta if config.beta is not None else constants.beta,
        constants.mu,
        alpha_rigorous=constants.alpha_rigorous and config.alpha is None,
    )


def _emit(config, table):
    with open_output(config.out) as stream:
        write_table(table, stream, config.fmt)


def _base_row(space):
    return {'family': space.family, 'k': space.k, 'n': space.n}


BOUNDS_COLUMNS = [
    'family', 'k', 'n', 'R', 'D', 'gv_lower', 'hamming_upper', 'theorem_floor',
    'coding_lower', 'coding_upper', 'bn_geodesic_lo', 'bn_geodesic_hi',
    'bn_chordal_lo', 'bn_chordal_hi',
]


def run_bounds_table(config):
    table = Table(BOUNDS_COLUMNS)
    for space in iter_spaces(config):
        constants = _constants(config, space)
        for r in config.rates:
            report = bound_report(BoundQuery(space, r), config.kappa_bar, constants)
            row = _base_row(space)
            row.update(R=r, D=report.D, gv_lower=report.gv_lower,
                       hamming_upper=report.hamming_upper,
                       theorem_floor=report.theorem_floor,
                       coding_lower=report.coding_lower,
                       coding_upper=report.coding_upper)
            if space.is_grassmann:
                bn = barg_nogin(space.k, r)
                row.update(bn_geodesic_lo=bn.geodesic_lo, bn_geodesic_hi=bn.geodesic_hi,
                           bn_chordal_lo=bn.chordal_lo, bn_chordal_hi=bn.chordal_hi)
            table.append(row)
    _LOGGER.info('bounds table with %d rows', len(table.rows))
    _emit(config, table)
    return EXIT_OK


def run_volume(config):
    table = Table(['family', 'k', 'n', 'D', 'r', 'log_v_lower', 'log_v_exact',
                   'log_v_upper', 'exact_error'])
    for space in iter_spaces(config):
        for r in config.radii:
            env = ball_volume_envelope(space, r, config.kappa_bar, config.method, config.seed)
            row = _base_row(space)
            row.update(D=space.dimension, r=r, log_v_lower=env.lower, log_v_exact=env.exact,
                       log_v_upper=env.upper, exact_error=env.exact_error)
            table.append(row)
    _emit(config, table)
    return EXIT_OK


def run_distance(config):
    table = Table(['family', 'k', 'n', 'seed', 'quantity', 'value'])
    for space in iter_spaces(config):
        p = haar_stiefel(space, config.seed)
        q = haar_stiefel(space, config.seed + 1)
        quantities = [('principal_angle_{0}'.format(i + 1), theta)
                      for i, theta in enumerate(principal_angles(p, q))]
        if space.is_grassmann:
            quantities.append(('chordal_grassmann', chordal_grassmann(p, q)))
            quantities.append(('geodesic_grassmann', geodesic_grassmann(p, q)))
        else:
            quantities.append(('chordal_stiefel', chordal_stiefel(p, q)))
        for name, value in quantities:
            row = _base_row(space)
            row.update(seed=config.seed, quantity=name, value=value)
            table.append(row)
    _emit(config, table)
    return EXIT_OK


def run_curvature_scan(config):
    table = Table(['family', 'k', 'n', 'D', 'samples', 'k_min', 'k_max', 'k_mean',
                   'kappa_bar', 'ricci_lower'])
    failed = False
    for space in iter_spaces(config):
        if space.dimension < 2:
            _LOGGER.info('skipping %r: no tangent planes', space)
            continue
        scan = curvature_scan(space, config.samples, config.seed)
        failed = failed or scan.maximum > scan.cap + 1e-9 or scan.minimum < -1e-9
        row = _base_row(space)
        row.update(D=space.dimension, samples=scan.samples, k_min=scan.minimum,
                   k_max=scan.maximum, k_mean=scan.mean, kappa_bar=scan.cap,
                   ricci_lower=ricci_lower_bound(space))
        table.append(row)
    _emit(config, table)
    return EXIT_CHECK_FAILED if failed else EXIT_OK


def run_kappa_hist(config):
    space = single_space(config)
    hist = kappa_histogram(space, config.delta, config.samples, config.seed)
    table = Table(['bin_left', 'bin_right', 'count'])
    for left, right, count in zip(hist.bin_edges[:-1], hist.bin_edges[1:], hist.bin_counts):
        table.append({'bin_left': left, 'bin_right': right, 'count': count})
    table.summary['mean_one_minus_kappa'] = hist.mean_one_minus_kappa
    _LOGGER.info('mean(1 - kappa) = %.6f over %d samples', hist.mean_one_minus_kappa, hist.samples)
    _emit(config, table)
    return EXIT_OK


PACK_COLUMNS = [
    'family', 'k', 'n', 'metric', 'd0', 'size', 'rate', 'min_distance',
    'hamming_lhs_log', 'hamming_rhs_log', 'hamming_passes', 'gv_floor',
    'gv_exact_floor', 'gv_asserted', 'gv_passes', 'note',
]


def run_pack_and_check(config):
    if config.d0 is None:
        raise InvalidSpec('pack needs --d0')
    space = single_space(config)
    cb = greedy_pack(space, config.metric,
                     GreedyConfig(config.seed, config.d0, config.rejection_cap))
    row = _base_row(space)
    row.update(metric=cb.metric, d0=config.d0, size=cb.size, rate=rate(cb))
    failed = False
    try:
        row['min_distance'] = min_distance(cb)
        hamming = check_hamming(cb, config.kappa_bar)
        row.update(hamming_lhs_log=hamming.lhs_log, hamming_rhs_log=hamming.rhs_log,
                   hamming_passes=hamming.passes)
        failed = not hamming.passes
    except TooFewPoints as e:
        row['note'] = 'too-few-points'
        _LOGGER.info('%s', e)
    gv = check_gv(space, cb.metric, config.d0, cb.size, _constants(config, space))
    row.update(gv_floor=gv.gv_floor, gv_exact_floor=gv.exact_floor,
               gv_asserted=gv.asserted, gv_passes=gv.passes)
    if gv.passes is False:
        _LOGGER.warning('greedy packing of size %d is below the GV floor', cb.size)
    if config.codebook:
        with open_output(config.codebook) as stream:
            write_json(cb.to_dict(), stream)
    _emit(config, Table(PACK_COLUMNS, [row]))
    return EXIT_CHECK_FAILED if failed else EXIT_OK


def run_check(config):
    table = Table(['family', 'k', 'n', 'samples', 'max_norm', 'violations_lower',
                   'violations_upper', 'upper_checked', 'worst_ratio'])
    failed = False
    max_norm = 1.0 if config.max_norm is None else config.max_norm
    for space in iter_spaces(config):
        report = verify_sandwich(space, config.samples, config.seed, max_norm)
        failed = failed or report.violations_lower > 0 or report.violations_upper > 0
        row = _base_row(space)
        row.update(samples=report.samples, max_norm=max_norm,
                   violations_lower=report.violations_lower,
                   violations_upper=report.violations_upper,
                   upper_checked=report.upper_checked, worst_ratio=report.worst_ratio)
        table.append(row)
    _emit(config, table)
    return EXIT_CHECK_FAILED if failed else EXIT_OK


COMMANDS = {
    'bounds-table': run_bounds_table,
    'volume': run_volume,
    'distance': run_distance,
    'curvature-scan': run_curvature_scan,
    'kappa-hist': run_kappa_hist,
    'pack': run_pack_and_check,
    'check': run_check,
}
