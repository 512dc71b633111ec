import argparse
import sys

from bitparticle_sim import __version__
from bitparticle_sim.config import load_config
from bitparticle_sim.exceptions import (
    AccumulatorOverflow,
    ConfigurationError,
    InvalidParameter,
    ProfileFormatError,
    SchedulingError,
    UnknownPreset,
)
from bitparticle_sim.experiments import (
    ExperimentSpec,
    check_output,
    list_presets,
    parse_grid_arg,
    run,
    verify,
    write_results,
)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

# flags that map one to one onto configuration keys
CONFIG_FLAGS = ('preset', 'out', 'format', 'seed', 'replicates', 'profile',
                'rows', 'cols', 'steps', 'samples', 'workers')


class ErrorHandlerFactory:

    @staticmethod
    def get_method(code):
        def handler(e):
            print(f"bpsim: error: {e}", file=sys.stderr)
            return code
        return handler


handle_usage = ErrorHandlerFactory.get_method(EXIT_USAGE)
handle_failure = ErrorHandlerFactory.get_method(EXIT_FAILURE)

ERROR_HANDLERS = (
    (ConfigurationError, handle_usage),
    (UnknownPreset, handle_usage),
    (ProfileFormatError, handle_usage),
    (InvalidParameter, handle_usage),
    (SchedulingError, handle_failure),
    (AccumulatorOverflow, handle_failure),
)


def _add_experiment_arguments(parser):
    parser.add_argument('--preset', help='experiment preset, see '
                                         'list-presets')
    parser.add_argument('--config', help='YAML file with default values '
                                         'for these flags')
    parser.add_argument('--out', help='result file (default: stdout)')
    parser.add_argument('--format', choices=['csv', 'json'])
    parser.add_argument('--seed', type=int, help='first stream seed')
    parser.add_argument('--replicates', type=int,
                        help='number of consecutive seeds per grid point')
    parser.add_argument('--grid', action='append', default=[],
                        metavar='KEY=V1,V2',
                        help='sweep a parameter; may be repeated')
    parser.add_argument('--profile', help='per-layer sparsity profile CSV')
    parser.add_argument('--rows', type=int)
    parser.add_argument('--cols', type=int)
    parser.add_argument('--steps', type=int, help='steps per column')
    parser.add_argument('--samples', type=int,
                        help='operand pairs per Monte-Carlo estimate')
    parser.add_argument('--workers', type=int, help='worker processes')


def build_parser():
    parser = argparse.ArgumentParser(
        prog='bpsim',
        description='Cycle-accurate simulation of a dual-factor '
                    'bit-sparsity MAC unit and array.')
    parser.add_argument('--version', action='version',
                        version=f'%(prog)s {__version__}')
    subparsers = parser.add_subparsers(dest='command', required=True)
    _add_experiment_arguments(subparsers.add_parser(
        'run', help='run an experiment and write its results'))
    verify_parser = subparsers.add_parser(
        'verify', help='run a preset and compare it with reference values')
    _add_experiment_arguments(verify_parser)
    verify_parser.add_argument('--strict', action='store_true',
                               help='count known deviations as failures')
    subparsers.add_parser('list-presets', help='show available presets')
    return parser


def spec_from_args(args) -> ExperimentSpec:
    overrides = {flag: getattr(args, flag) for flag in CONFIG_FLAGS}
    config = load_config(args.config, overrides)
    grid = dict(config.get('grid') or {})
    grid.update(parse_grid_arg(text) for text in args.grid)
    config['grid'] = grid
    return ExperimentSpec.from_config(config)


def run_command(args) -> int:
    spec = spec_from_args(args)
    check_output(spec.out)
    write_results(spec, run(spec))
    return EXIT_OK


def verify_command(args) -> int:
    spec = spec_from_args(args)
    check_output(spec.out)
    results, checks = verify(spec)
    if spec.out is not None:
        write_results(spec, results)
    for check in checks:
        print(check)
    deviations = sum(check.status == 'DEVIATION' for check in checks)
    if args.strict:
        passed = all(check.passed for check in checks)
    else:
        passed = all(check.acceptable for check in checks)
    if not passed:
        print(f"{spec.preset}: FAIL")
        return EXIT_FAILURE
    if deviations and not args.strict:
        print(f"{spec.preset}: PASS ({deviations} known deviations)")
    else:
        print(f"{spec.preset}: PASS")
    return EXIT_OK


def list_presets_command(args) -> int:
    for preset in list_presets():
        print(f"{preset.name:<22}{preset.kind.value:<15}"
              f"{preset.description}")
    return EXIT_OK


COMMANDS = {
    'run': run_command,
    'verify': verify_command,
    'list-presets': list_presets_command,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except Exception as e:
        for error_type, handler in ERROR_HANDLERS:
            if isinstance(e, error_type):
                return handler(e)
        raise


if __name__ == '__main__':
    sys.exit(main())
