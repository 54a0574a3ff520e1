"""Command-line front end.

Exit codes: 0 success, 1 usage or parse error, 2 semantic or conversion failure.
"""
from __future__ import annotations

import argparse
import sys

from faultgraphs.bdd import (
    OrderKind,
    bdd_min_cut_sets,
    bdd_probability,
    build_bdd,
    read_bdd_dot,
)
from faultgraphs.boolean_core import format_cut_sets, probability_bruteforce
from faultgraphs.converters import KINDS, convert, universe_of
from faultgraphs.dataset import Dataset, read_csv
from faultgraphs.decision_tree import (
    accuracy,
    dt_positive_rules,
    dt_to_dot,
    dt_truth_table,
    induce_dt,
    read_dt_dot,
)
from faultgraphs.errors import FaultGraphError, ParseError, SharedEventError
from faultgraphs.fault_tree import (
    ft_probability_formulas,
    ft_to_dot,
    ft_truth_table,
    parse_ft,
    render_ft,
    sample_dataset,
)

EXHAUSTIVE_REPORT_LIMIT = 20
ORDERS = [k.value for k in OrderKind]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f'{self.prog}: error: {message}\n')


def _read(path):
    with open(path, encoding='utf-8') as fh:
        return fh.read()


def _write(path, text):
    if path is None or path == '-':
        sys.stdout.write(text)
        return
    with open(path, 'w', encoding='utf-8', newline='\n') as fh:
        fh.write(text)


def _fmt(p, precise):
    return repr(p) if precise else f'{p:.7g}'


def cmd_analyze(args):
    ft = parse_ft(_read(args.input))
    out = [f'top = {ft.top}',
           f'basic_events = {len(ft.basic_events)}']
    try:
        per_node = ft_probability_formulas(ft)
    except SharedEventError as exc:
        per_node = None
        out.append(f'P(top) gate formulas = n/a ({exc})')
    if per_node is not None:
        for gate in ft.gates:
            out.append(f'P({gate}) = {_fmt(per_node[gate], args.precise)}')
        out.append(f'P(top) gate formulas = {_fmt(per_node[ft.top], args.precise)}')
    mgr, f = build_bdd(ft, args.order)
    p_bdd = bdd_probability(mgr, f, ft.probabilities)
    out.append(f'P(top) bdd = {_fmt(p_bdd, args.precise)}')
    if len(ft.basic_events) <= EXHAUSTIVE_REPORT_LIMIT:
        p_exh = probability_bruteforce(ft_truth_table(ft), ft.probabilities)
        out.append(f'P(top) exhaustive = {_fmt(p_exh, args.precise)}')
    if per_node is not None:
        out.append(f'delta = {abs(per_node[ft.top] - p_bdd):.3g}')
    _write(None, '\n'.join(out) + '\n')
    return 0


def cmd_cutsets(args):
    ft = parse_ft(_read(args.input))
    mgr, f = build_bdd(ft, args.order)
    _write(args.output, format_cut_sets(bdd_min_cut_sets(mgr, f)))
    return 0


def _load(kind, path, default_prob):
    """Model plus basic-event probabilities from an FT file or one of our DOT files."""
    text = _read(path)
    if kind == 'ft':
        ft = parse_ft(text)
        return ft, ft.probabilities
    if kind == 'bdd':
        mgr, f, probs = read_bdd_dot(text)
        universe = mgr.order
        model = f
    else:
        model, probs = read_dt_dot(text)
        universe = model.universe
    if default_prob is not None:
        probs = {v: probs.get(v, default_prob) for v in universe}
    return model, probs


def _render(kind, model, probs):
    if kind == 'ft':
        return render_ft(model)
    if kind == 'bdd':
        return model.manager.to_dot(model, probs)
    return dt_to_dot(model, probs)


def cmd_convert(args):
    if args.source == args.target:
        raise UsageError('--from and --to must differ')
    if args.sampled and args.seed is None:
        raise UsageError('--sampled requires --seed')
    model, probs = _load(args.source, args.input, args.default_prob)
    order = args.order or ('declared' if args.source == 'dt' else 'dfs')
    if args.target == 'ft':
        missing = [v for v in universe_of(model) if v not in probs]
        if missing:
            raise UsageError(f'no probability for {missing}; pass --default-prob')
    result, report = convert(model, args.source, args.target, order=order,
                             mode='sampled' if args.sampled else 'exact',
                             n=args.n, p=args.p, seed=args.seed, probs=probs)
    _write(args.output, _render(args.target, result, probs))
    text = report.to_text()
    if args.report:
        _write(args.report, text)
    else:
        sys.stdout.write(text)
    if report.equivalence == 'fail':
        print('error: converted model is not equivalent to the source', file=sys.stderr)
        return 2
    return 0


def cmd_sample(args):
    ft = parse_ft(_read(args.input))
    _write(args.output, sample_dataset(ft, args.n, args.p, args.seed).to_csv())
    return 0


def cmd_induce(args):
    if args.raw_rules and not args.rules:
        raise UsageError('--raw-rules needs --rules')
    ft = probs = None
    if args.exact:
        ft = parse_ft(_read(args.input))
        data = Dataset.from_truth_table(ft_truth_table(ft))
    else:
        data = read_csv(_read(args.input))
        if args.ft:
            ft = parse_ft(_read(args.ft))
    dt = induce_dt(data)
    training = float((dt_truth_table(dt).outputs[_row_index(data)] == data.y).mean())
    lines = [f'rows = {len(data)}',
             f'decision_nodes = {dt.decision_count}',
             f'training_accuracy = {training:.6g}']
    if ft is not None:
        probs = ft.probabilities
        lines.append(f'accuracy = {accuracy(dt, ft_truth_table(ft, dt.universe)):.6g}')
    _write(args.output, dt_to_dot(dt, probs))
    if args.rules:
        _write(args.rules, format_cut_sets(dt_positive_rules(dt, raw=args.raw_rules)))
    stream = sys.stderr if args.output in (None, '-') else sys.stdout
    stream.write('\n'.join(lines) + '\n')
    return 0


def _row_index(data):
    index = 0
    for j in range(len(data.universe)):
        index = (index << 1) | data.X[:, j].astype('int64')
    return index


def cmd_render(args):
    ft = parse_ft(_read(args.input))
    if args.view == 'ft':
        text = ft_to_dot(ft)
    elif args.view == 'bdd':
        mgr, f = build_bdd(ft, args.order)
        text = mgr.to_dot(f, ft.probabilities)
    else:
        result, _ = convert(ft, 'ft', 'dt')
        text = dt_to_dot(result, ft.probabilities)
    _write(args.output, text)
    return 0


def build_parser():
    parser = _Parser(prog='faultgraphs',
                     description='Fault trees, decision trees and BDDs.')
    sub = parser.add_subparsers(dest='command', required=True, parser_class=_Parser)

    p = sub.add_parser('analyze', help='top-event probability')
    p.add_argument('input')
    p.add_argument('--order', choices=ORDERS, default='dfs')
    p.add_argument('--precise', action='store_true', help='print full precision')
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser('cutsets', help='minimal cut sets, one per line')
    p.add_argument('input')
    p.add_argument('--order', choices=ORDERS, default='dfs')
    p.add_argument('-o', '--output')
    p.set_defaults(func=cmd_cutsets)

    p = sub.add_parser('convert', help='convert between ft, bdd and dt')
    p.add_argument('input')
    p.add_argument('--from', dest='source', choices=KINDS, required=True)
    p.add_argument('--to', dest='target', choices=KINDS, required=True)
    p.add_argument('--order', choices=ORDERS,
                   help='BDD variable order (default: dfs, or declared for dt input)')
    mode = p.add_mutually_exclusive_group()
    mode.add_argument('--exact', action='store_true', help='ft->dt on the full table (default)')
    mode.add_argument('--sampled', action='store_true', help='ft->dt on a Monte Carlo sample')
    p.add_argument('-n', type=int, default=1000)
    p.add_argument('-p', type=float, default=0.5)
    p.add_argument('--seed', type=int)
    p.add_argument('--default-prob', type=float,
                   help='probability for basic events the input does not specify')
    p.add_argument('-o', '--output')
    p.add_argument('--report', help='write the conversion report here instead of stdout')
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser('sample', help='Monte Carlo dataset from a fault tree')
    p.add_argument('input')
    p.add_argument('-n', type=int, required=True)
    p.add_argument('-p', type=float, required=True)
    p.add_argument('--seed', type=int, required=True)
    p.add_argument('-o', '--output')
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser('induce', help='induce a decision tree')
    p.add_argument('input', help='CSV dataset, or a fault tree with --exact')
    p.add_argument('--exact', action='store_true',
                   help='input is a fault tree; train on its full truth table')
    p.add_argument('--ft', help='fault tree to score the induced tree against')
    p.add_argument('-o', '--output')
    p.add_argument('--rules', help='write the positive rules (cut-set candidates) here')
    p.add_argument('--raw-rules', action='store_true',
                   help='keep every 1-path rule instead of minimizing')
    p.set_defaults(func=cmd_induce)

    p = sub.add_parser('render', help='DOT rendering of a fault tree')
    p.add_argument('input')
    p.add_argument('--format', choices=['dot'], default='dot')
    p.add_argument('--as', dest='view', choices=KINDS, default='ft')
    p.add_argument('--order', choices=ORDERS, default='dfs')
    p.add_argument('-o', '--output')
    p.set_defaults(func=cmd_render)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # --help or a usage error
        return exc.code
    if getattr(args, 'n', 1) is not None and getattr(args, 'n', 1) < 1:
        print('error: -n must be at least 1', file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except ParseError as exc:
        print(f'parse error: {exc}', file=sys.stderr)
        return 1
    except FaultGraphError as exc:
        print(f'error: {type(exc).__name__}: {exc}', file=sys.stderr)
        return 2
    except (UsageError, ValueError, OSError) as exc:
        print(f'error: {exc}', file=sys.stderr)
        return 1


if __name__ == '__main__':
    sys.exit(main())
