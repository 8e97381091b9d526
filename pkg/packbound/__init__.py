"""
Minimal distance bounds for packings on complex Stiefel and Grassmann manifolds.

Usage:
    packbound (-h | --help)
    packbound bounds-table [options] [--family F] [--k K] [--n N]
    packbound volume [options] --family F --k K --n N [--radii LIST] [--method M]
    packbound distance [options] --family F --k K --n N
    packbound curvature-scan [options] --family F --k K --n N
    packbound kappa-hist [options] --k K --n N [--delta D]
    packbound pack [options] --family F --k K --n N --d0 D [--metric M] [--codebook PATH]
    packbound check [options] --family F --k K --n N [--max-norm X]

Options:
    -h, --help          Show a brief usage summary.
    -q, --quiet         Decrease verbosity.
    -v, --verbose       Increase verbosity.
    --out PATH          Write the result to PATH instead of standard output.
    --format FMT        Output format, csv or json [default: csv].

Space options:
    --family F          stiefel, grassmann or all (bounds-table only) [default: all].
    --k K               Frame size, a number or an inclusive range a..b [default: 1..2].
    --n N               Ambient dimension, a number or a range a..b [default: 2..8].

Bound options:
    --rate LIST         Comma separated rates R [default: 1,10].
    --kappa-bar K       Override the curvature cap of the lower volume bound.
    --alpha A           Override alpha of beta d <= r <= alpha d.
    --beta B            Override beta of beta d <= r <= alpha d.
    --radii LIST        Comma separated ball radii [default: 0.1,0.3,0.5,0.7,1.0].
    --method M          Exact ball volumes: deterministic or montecarlo [default: deterministic].

Sampling options:
    --seed S            Random seed [default: 0].
    --samples M         Number of random samples [default: 1000].
    --delta D           Frobenius norm of the sampled tangents [default: 1.25].
    --max-norm X        Largest tangent norm of sampled pairs [default: 1.0].
    --d0 D              Target minimal distance of the packing.
    --metric M          geodesic-grassmann, chordal-grassmann or chordal-stiefel.
    --T T               Consecutive rejections before the packing stops [default: 10000].
    --codebook PATH     Also write the codebook as JSON to PATH.

Output columns:
    bounds-table    family,k,n,R,D,gv_lower,hamming_upper,theorem_floor,
                    coding_lower,coding_upper,bn_geodesic_lo,bn_geodesic_hi,
                    bn_chordal_lo,bn_chordal_hi (INFEASIBLE when no Hamming radius)
    volume          family,k,n,D,r,log_v_lower,log_v_exact,log_v_upper,exact_error
    distance        family,k,n,seed,quantity,value
    curvature-scan  family,k,n,D,samples,k_min,k_max,k_mean,kappa_bar,ricci_lower
    kappa-hist      bin_left,bin_right,count and a '# mean_one_minus_kappa' line
    pack            family,k,n,metric,d0,size,rate,min_distance,hamming_lhs_log,
                    hamming_rhs_log,hamming_passes,gv_floor,gv_exact_floor,
                    gv_asserted,gv_passes,note
    check           family,k,n,samples,max_norm,violations_lower,
                    violations_upper,upper_checked,worst_ratio

Exit status is 0 on success, 1 when a check fails, 2 on invalid arguments, 3
when the output cannot be written and 4 when a numerical routine (root finder,
quadrature, series) fails to converge.

"""
import logging
import sys
from collections import namedtuple

from docopt import docopt, DocoptExit

from packbound.commands import (
    COMMANDS, EXIT_CHECK_FAILED, EXIT_IO, EXIT_NUMERICAL, EXIT_USAGE,
)
from packbound.errors import (
    DecompositionResidual, Divergent, InvalidSpec, NotConverged, PackBoundError,
)
from packbound.geometry.space import FAMILIES, parse_family
from packbound.output import FORMATS

_LOGGER = logging.getLogger(__name__)

SUBCOMMANDS = tuple(COMMANDS)

ALL_FAMILIES = 'all'


def parse_range(text, name='range'):
    """'3' -> [3], '2..5' -> [2, 3, 4, 5]. Descending ranges are rejected."""
    text = str(text).strip()
    try:
        if '..' in text:
            lo, hi = (int(part) for part in text.split('..', 1))
        else:
            lo = hi = int(text)
    except ValueError:
        raise InvalidSpec('{0} must be an integer or a range a..b, got {1!r}'.format(name, text))
    if hi < lo:
        raise InvalidSpec('{0} {1!r} is descending'.format(name, text))
    return list(range(lo, hi + 1))


def parse_floats(text, name='list'):
    try:
        values = [float(part) for part in str(text).split(',') if part.strip()]
    except ValueError:
        raise InvalidSpec('{0} must be comma separated numbers, got {1!r}'.format(name, text))
    if not values:
        raise InvalidSpec('{0} is empty'.format(name))
    return values


def _optional_float(value, name):
    if value is None:
        return None
    try:
        return float(value)
    except ValueError:
        raise InvalidSpec('{0} must be a number, got {1!r}'.format(name, value))


def _int(value, name):
    try:
        return int(value)
    except ValueError:
        raise InvalidSpec('{0} must be an integer, got {1!r}'.format(name, value))


class RunConfig(namedtuple('RunConfig', [
        'subcommand', 'families', 'k_values', 'n_values', 'rates', 'out', 'fmt',
        'seed', 'samples', 'delta', 'd0', 'rejection_cap', 'kappa_bar', 'alpha',
        'beta', 'metric', 'radii', 'method', 'max_norm', 'codebook'])):
    """Validated command line options."""
    __slots__ = ()

    @classmethod
    def from_options(cls, opts):
        subcommand = next(name for name in SUBCOMMANDS if opts.get(name))
        family = opts['--family'].strip().lower()
        if family == ALL_FAMILIES:
            if subcommand not in ('bounds-table', 'kappa-hist'):
                raise InvalidSpec('{0} needs a single --family'.format(subcommand))
            families = FAMILIES
        else:
            families = (parse_family(family),)
        if subcommand == 'kappa-hist':
            families = ('stiefel',)

        fmt = opts['--format'].strip().lower()
        if fmt not in FORMATS:
            raise InvalidSpec('--format must be one of {0}, got {1!r}'.format(', '.join(FORMATS), fmt))

        samples = _int(opts['--samples'], '--samples')
        rejection_cap = _int(opts['--T'], '--T')
        rates = parse_floats(opts['--rate'], '--rate')
        if any(r <= 0 for r in rates):
            raise InvalidSpec('--rate values must be positive')
        if samples < 1 or rejection_cap < 1:
            raise InvalidSpec('--samples and --T must be positive')
        config = cls(
            subcommand=subcommand,
            families=families,
            k_values=parse_range(opts['--k'], '--k'),
            n_values=parse_range(opts['--n'], '--n'),
            rates=rates,
            out=opts['--out'],
            fmt=fmt,
            seed=_int(opts['--seed'], '--seed'),
            samples=samples,
            delta=_optional_float(opts['--delta'], '--delta'),
            d0=_optional_float(opts['--d0'], '--d0'),
            rejection_cap=rejection_cap,
            kappa_bar=_optional_float(opts['--kappa-bar'], '--kappa-bar'),
            alpha=_optional_float(opts['--alpha'], '--alpha'),
            beta=_optional_float(opts['--beta'], '--beta'),
            metric=opts['--metric'],
            radii=parse_floats(opts['--radii'], '--radii'),
            method=opts['--method'].strip().lower(),
            max_norm=_optional_float(opts['--max-norm'], '--max-norm'),
            codebook=opts['--codebook'],
        )
        if subcommand in ('pack', 'kappa-hist') and (
                len(config.k_values) != 1 or len(config.n_values) != 1):
            raise InvalidSpec('{0} needs single values for --k and --n'.format(subcommand))
        return config


def main(argv=None):
    try:
        opts = docopt(__doc__, argv=argv)
    except DocoptExit as e:
        sys.stderr.write('{0}\n'.format(e))
        return EXIT_USAGE

    if opts['--verbose']:
        level = logging.DEBUG
    else:
        level = logging.WARN if opts['--quiet'] else logging.INFO
    logging.basicConfig(level=level, stream=sys.stderr, format='%(name)s: %(message)s')

    try:
        config = RunConfig.from_options(opts)
        return COMMANDS[config.subcommand](config)
    except OSError as e:
        _LOGGER.error('cannot write output: %s', e)
        return EXIT_IO
    except ValueError as e:
        # InvalidSpec, DomainError, DimensionMismatch...
        _LOGGER.error('%s', e)
        return EXIT_USAGE
    except (NotConverged, Divergent, DecompositionResidual) as e:
        _LOGGER.error('numerical failure: %s', e)
        return EXIT_NUMERICAL
    except PackBoundError as e:
        _LOGGER.error('%s', e)
        return EXIT_CHECK_FAILED


if __name__ == '__main__':
    sys.exit(main())
