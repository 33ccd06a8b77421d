#!/usr/bin/env python3
"""
Command-line front end.

    python -m hvaudit oracle --theta 0 --phi 60 --degrees
    python -m hvaudit audit --variant overlap --format json --out overlap.json
    python -m hvaudit sweep --quantity L --axis theta --phi 1.0471975512 --v 0.1 --variant overlap --format csv
    python -m hvaudit lemma --dim 8 --seed 7

Exit codes: 0 success, 1 audit expectation violated, 2 usage error.
"""
import argparse
import csv
import io
import json
import logging
import sys

from hvaudit import __version__
from hvaudit.commands import (RunConfig, COMMANDS, FORMATS, SWEEP_QUANTITIES, EXIT_USAGE, load_config_file, run)
from hvaudit.settings import load_settings, configure_logging

logger = logging.getLogger(__name__)

SUMMARY_COLUMNS = ['name', 'quantity', 'tolerance', 'passed', 'expected']


def _add_common_flags(parser):
    parser.add_argument('--config', help='YAML run config (or a saved JSON report to replay)')
    parser.add_argument('--theta', type=float, help="Alice's analyzer angle (radians unless --degrees)")
    parser.add_argument('--phi', type=float, help="Bob's analyzer angle (radians unless --degrees)")
    parser.add_argument('--degrees', action='store_true', default=None, help='read angles in degrees')
    parser.add_argument('--v', type=float, help='hidden-variable value in [0, 1)')
    parser.add_argument('--y', help="Bob's outcome, +1 or -1 (default: both)")
    parser.add_argument('--variant', choices=['disjoint', 'overlap'], help='response-set layout')
    parser.add_argument('--x-rule', dest='x_rule', choices=['threshold', 'rotating'], help="Alice's rule f")
    parser.add_argument('--n', type=int, help='Monte Carlo trials')
    parser.add_argument('--seed', help='64-bit seed, decimal or 0x-hex')
    parser.add_argument('--grid', type=int, help='settings grid size per axis for faithfulness')
    parser.add_argument('--theta-points', dest='theta_points', type=int, help='theta grid points')
    parser.add_argument('--v-points', dest='v_points', type=int, help='uniform v grid points')
    parser.add_argument('--phi-points', dest='phi_points', type=int, help='phi values audited')
    parser.add_argument('--tol', type=float, help='tolerance for exact checks')
    parser.add_argument('--confidence', type=float, help='Wilson interval confidence')
    parser.add_argument('--workers', type=int, help='threads for Monte Carlo chunks')
    parser.add_argument('--format', choices=FORMATS, help='output format')
    parser.add_argument('--out', help='write the report to PATH instead of stdout')


def build_parser():
    parser = argparse.ArgumentParser(prog='hvaudit', description='Hidden-variable model audit toolkit')
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    parser.add_argument('--log-level', dest='log_level', help='override LOG_LEVEL')
    subparsers = parser.add_subparsers(dest='command', required=True)

    helps = {
        'oracle': 'closed-form quantum predictions at (theta, phi)',
        'model': 'simulate a counter-example model and compare with the oracle',
        'audit': 'run every audit for one model variant',
        'sweep': 'plot-ready table of a quantity along one angle',
        'lemma': 'functions of one Hermitian matrix commute; truncated Z and P do not',
    }
    for command in COMMANDS:
        sub = subparsers.add_parser(command, help=helps[command])
        _add_common_flags(sub)
        if command == 'sweep':
            sub.add_argument('--quantity', choices=SWEEP_QUANTITIES)
            sub.add_argument('--axis', choices=['theta', 'phi'])
            sub.add_argument('--start', type=float)
            sub.add_argument('--stop', type=float)
            sub.add_argument('--steps', type=int)
            sub.add_argument('--monte-carlo', dest='monte_carlo', action='store_true', default=None,
                             help='add seeded Monte Carlo columns (correlation only)')
        if command == 'lemma':
            sub.add_argument('--dim', type=int, help='matrix dimension (>= 2)')
            sub.add_argument('--matrices', type=int, help='random Hermitian matrices to test')
    return parser


def config_from_args(args, settings=None):
    overrides = {}
    if args.config:
        overrides.update(load_config_file(args.config))
    flags = vars(args).copy()
    for key in ('config', 'log_level'):
        flags.pop(key, None)
    overrides.update({k: v for k, v in flags.items() if v is not None})
    return RunConfig.from_settings(settings, **overrides)


def _cell(value):
    if isinstance(value, float):
        return format(value, '.17g')
    if value is None:
        return ''
    return str(value)


def _table_rows(document):
    results = document['results']
    if document['command'] == 'sweep':
        return results[0]['columns'], results[0]['rows']
    return SUMMARY_COLUMNS, results


def render_csv(document):
    columns, rows = _table_rows(document)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(column)) for column in columns])
    return buffer.getvalue()


def render_table(document):
    columns, rows = _table_rows(document)
    cells = [[_cell(row.get(column)) for column in columns] for row in rows]
    widths = [max([len(c)] + [len(r[i]) for r in cells]) for i, c in enumerate(columns)]

    lines = [f"{document['command']} (seed {document['seed']}, version {document['version']})"]
    lines.append('  '.join(c.ljust(w) for c, w in zip(columns, widths)))
    lines.append('  '.join('-' * w for w in widths))
    lines.extend('  '.join(v.ljust(w) for v, w in zip(r, widths)) for r in cells)

    if document['command'] != 'sweep':
        for row in rows:
            if row.get('witnesses'):
                lines.append(f"{row['name']}: {len(row['witnesses'])} witness(es), first {row['witnesses'][0]}")
            if 'diagonal' in row:
                lines.append(f"{row['name']} diagonal: {row['diagonal']}")
    for warning in document.get('warnings', []):
        lines.append(f"warning: {warning}")
    return '\n'.join(lines) + '\n'


def render(document, fmt):
    if fmt == 'json':
        return json.dumps(document, indent=2) + '\n'
    if fmt == 'csv':
        return render_csv(document)
    return render_table(document)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        settings = load_settings()
        configure_logging(args.log_level or settings.log_level, settings.log_file)
        config = config_from_args(args, settings)
        document, exit_code = run(config)
        output = render(document, document['config']['format'])
        out = document['config']['out']
        if out:
            with open(out, 'w', encoding='utf-8', newline='') as file:
                file.write(output)
            logger.info(f"Report written to {out}")
        else:
            sys.stdout.write(output)
        return exit_code
    except (ValueError, OSError) as e:
        logger.debug('command failed', exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == '__main__':
    raise SystemExit(main())
