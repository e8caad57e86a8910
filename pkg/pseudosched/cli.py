import functools
import json
import logging
import sys
from collections import Counter

import click

from pseudosched.baselines import exact_min_pseudo, greedy_strict
from pseudosched.bench import ALGORITHMS, default_suite, run_bench
from pseudosched.config import JOBS_ENV, LOG_LEVEL_ENV, SEED_ENV, derive_seed
from pseudosched.dband.runtime import POLICIES, RunConfig, run_dband
from pseudosched.errors import ParameterError, PseudoschedError, TerminationFailure, VerificationError
from pseudosched.generators import CYCLE_TYPES, KINDS, generate
from pseudosched.graph_io import (
    export_dot,
    parse_graph,
    parse_schedule,
    read_trace,
    serialize_coloring,
    serialize_graph,
    write_trace,
)
from pseudosched.models.tree import build_bfs_tree, build_dfs_tree, min_valid_d, random_spanning_tree
from pseudosched.schedule import (
    is_pseudo_schedule,
    is_strict_schedule,
    is_T_pseudo_schedule,
    oracle_pseudo_check,
    verdict,
)
from pseudosched.twice_degree import twice_degree, verify_twice_degree_bound

logger = logging.getLogger(__name__)

EXIT_VERIFICATION = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3


def exit_codes(command):
    """Map library errors onto the CLI exit codes."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except VerificationError as e:
            click.echo(f"verification failed: {e}", err=True)
            sys.exit(EXIT_VERIFICATION)
        except TerminationFailure as e:
            click.echo(f"run did not terminate: {e}", err=True)
            sys.exit(EXIT_BUDGET)
        except (PseudoschedError, OSError) as e:
            click.echo(f"error: {e}", err=True)
            sys.exit(EXIT_INPUT)

    return wrapper


def _read(path):
    with open(path, 'rb') as fh:
        return fh.read()


def _load_order(path):
    try:
        return json.loads(_read(path))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise ParameterError(f"--order {path} is not a JSON list: {e}") from e


def _write(path, data: bytes):
    if path is None or path == '-':
        click.echo(data.decode('utf-8'), nl=False)
        return
    with open(path, 'wb') as fh:
        fh.write(data)


def _dump(doc) -> bytes:
    return (json.dumps(doc, sort_keys=True, indent=2) + '\n').encode('utf-8')


seed_option = click.option(
    '--seed', type=int, default=0, envvar=SEED_ENV, show_default=True,
    help=f'Root seed for every random choice (env {SEED_ENV}).',
)


@click.group()
@click.option('--log-level', default='INFO', envvar=LOG_LEVEL_ENV, show_default=True,
              type=click.Choice(['DEBUG', 'INFO', 'WARNING', 'ERROR'], case_sensitive=False))
def cli(log_level):
    """Pseudo-scheduling toolkit: generate graphs, build and verify broadcast schedules."""
    logging.basicConfig(level=log_level.upper(), stream=sys.stderr,
                        format='%(asctime)s %(levelname)s %(name)s: %(message)s')


@cli.command()
@click.option('--kind', type=click.Choice(KINDS), required=True)
@click.option('--n', type=int, help='Vertex count (path, random-gnp, random-geometric).')
@click.option('--leaves', type=int, help='Leaf count (star).')
@click.option('--rows', type=int)
@click.option('--cols', type=int)
@click.option('--p', 'p', type=float, default=0.3, show_default=True, help='Edge probability (random-gnp).')
@click.option('--radius', type=float, default=0.3, show_default=True, help='Link radius (random-geometric).')
@click.option('--k', 'k', type=int, help='Cycle length (cycle-gadget).')
@click.option('--type', 'cycle_type', type=click.Choice(CYCLE_TYPES), default='I', show_default=True)
@seed_option
@click.option('--out', type=click.Path(dir_okay=False, writable=True), default=None)
@exit_codes
def gen(kind, n, leaves, rows, cols, p, radius, k, cycle_type, seed, out):
    """Generate a graph document (cycle gadgets include their tree)."""
    params = {
        'path': {'n': n},
        'star': {'leaves': leaves},
        'grid': {'rows': rows, 'cols': cols},
        'random-gnp': {'n': n, 'p': p},
        'random-geometric': {'n': n, 'radius': radius},
        'cycle-gadget': {'k': k, 'cycle_type': cycle_type},
    }[kind]
    instance = generate(kind, seed=derive_seed(seed, 'gen', kind), **params)
    _write(out, serialize_graph(instance.graph, instance.tree))


def _band_option(ctx, param, value):
    if value == 'auto':
        return value
    try:
        return int(value)
    except ValueError:
        raise click.BadParameter(f"expected an integer or 'auto', got {value!r}")


def _choose_tree(g, file_tree, tree, root, seed):
    if tree == 'file':
        if file_tree is None:
            raise PseudoschedError("--tree file requires root and tree_parent in the graph document")
        return file_tree
    if tree == 'dfs':
        return build_dfs_tree(g, root)
    if tree == 'random':
        return random_spanning_tree(g, root, derive_seed(seed, 'tree'))
    return build_bfs_tree(g, root)


@cli.command()
@click.option('--algo', type=click.Choice(ALGORITHMS), required=True)
@click.option('--in', 'in_path', type=click.Path(exists=True, dir_okay=False), required=True)
@click.option('--out', type=click.Path(dir_okay=False, writable=True), default=None)
@click.option('--root', type=int, default=0, show_default=True)
@click.option('--d', 'd', default='auto', show_default=True, callback=_band_option,
              help='Band count, or "auto" for the smallest valid d.')
@click.option('--tree', type=click.Choice(['bfs', 'dfs', 'random', 'file']), default='bfs', show_default=True)
@click.option('--policy', type=click.Choice(POLICIES), default='synchronous', show_default=True)
@click.option('--budget', type=int, default=None, help='Delivery budget (default 64 n (max degree + 1)).')
@click.option('--order', type=click.Path(exists=True, dir_okay=False), default=None,
              help='JSON list giving the greedy-strict coloring order.')
@click.option('--trace', 'trace_path', type=click.Path(dir_okay=False, writable=True), default=None)
@seed_option
@exit_codes
def solve(algo, in_path, out, root, d, tree, policy, budget, order, trace_path, seed):
    """Compute a schedule, re-verify it, and write it."""
    g, file_tree = parse_graph(_read(in_path))
    g.require_connected()

    if algo == 'twice-degree':
        result = twice_degree(g, root, trace=trace_path is not None)
        if not verify_twice_degree_bound(g, result):
            raise VerificationError("twice-degree output is not a T-pseudo-schedule within 2 max-degree colors")
        _write(out, serialize_coloring(result.coloring, result.tree, algorithm=algo))
        if trace_path:
            _write(trace_path, _dump([step.to_dict() for step in result.forbidden_trace]))
        return

    if algo == 'greedy-strict':
        sequence = None if order is None else _load_order(order)
        result = greedy_strict(g, sequence)
        if not is_strict_schedule(g, result.coloring):
            raise VerificationError("greedy output is not a strict schedule")
        _write(out, serialize_coloring(result.coloring, algorithm=algo))
        return

    t = _choose_tree(g, file_tree, tree, root, seed)
    band = min_valid_d(g, t) if d == 'auto' else d
    config = RunConfig(seed=seed, policy=policy, budget=budget, trace=trace_path is not None)
    run = run_dband(g, t, band, config=config)
    if trace_path and run.trace is not None:
        with open(trace_path, 'w', encoding='utf-8') as fh:
            write_trace(run.trace, fh)
    run.raise_for_status()
    if not is_T_pseudo_schedule(g, t, run.coloring):
        raise VerificationError(f"d-band output with d={band} is not a T-pseudo-schedule")
    _write(out, serialize_coloring(run.coloring, t, algorithm=algo, d=band, statistics=run.statistics()))
    click.echo(f"d={band} h_max={run.coloring.h_max} deliveries={run.steps}", err=True)


@cli.command()
@click.option('--in', 'in_path', type=click.Path(exists=True, dir_okay=False), required=True)
@click.option('--schedule', 'schedule_path', type=click.Path(exists=True, dir_okay=False), required=True)
@click.option('--out', type=click.Path(dir_okay=False, writable=True), default=None)
@exit_codes
def verify(in_path, schedule_path, out):
    """Print the verdict of a schedule; exit 1 unless it is a pseudo-schedule."""
    g, file_tree = parse_graph(_read(in_path))
    coloring, schedule_tree, _ = parse_schedule(_read(schedule_path), g)
    result = verdict(g, coloring, schedule_tree or file_tree)
    _write(out, _dump(result))
    if not result['pseudo'] or result['t_pseudo'] is False:
        sys.exit(EXIT_VERIFICATION)


@cli.command()
@click.option('--full', is_flag=True, help='Run the large sweep.')
@click.option('--algo', 'algorithms', type=click.Choice(ALGORITHMS), multiple=True)
@click.option('--jobs', type=int, default=1, envvar=JOBS_ENV, show_default=True)
@click.option('--out', type=click.Path(dir_okay=False, writable=True), default=None, help='JSON report path.')
@click.option('--table/--no-table', default=True, show_default=True)
@click.option('--timings', is_flag=True, help='Add wall-clock times (reports stop being reproducible).')
@seed_option
@exit_codes
def bench(full, algorithms, jobs, out, table, timings, seed):
    """Sweep generator families across algorithms and check the color envelopes."""
    report = run_bench(default_suite(full), seed=seed, algorithms=algorithms or ALGORITHMS,
                       jobs=jobs, timings=timings)
    if out:
        _write(out, report.to_json().encode('utf-8'))
    if table:
        click.echo(report.to_table(), nl=False)
    click.echo(json.dumps(report.summary(), sort_keys=True), err=True)
    reasons = ' '.join(f['reason'] for f in report.failures)
    if 'BudgetExhaustedError' in reasons or 'DeadlockError' in reasons:
        sys.exit(EXIT_BUDGET)
    if report.failures:
        sys.exit(EXIT_VERIFICATION)


def summarize_trace(entries):
    kinds = Counter(e['kind'] for e in entries if 'kind' in e)
    breaks = [
        {'vertex': e['vertex'], 'type': e['type'], 'at': e.get('at'), 'step': e.get('step')}
        for e in entries if e.get('event') == 'cycle-break'
    ]
    colored = {
        str(e['vertex']): {'color': e['color'], 'step': e.get('step')}
        for e in entries if e.get('event') == 'colored'
    }
    return {
        'deliveries': sum(kinds.values()),
        'messages': dict(sorted(kinds.items())),
        'cycle_breaks': breaks,
        'colored': dict(sorted(colored.items(), key=lambda item: int(item[0]))),
    }


@cli.command('trace-inspect')
@click.argument('trace_path', type=click.Path(exists=True, dir_okay=False))
@exit_codes
def trace_inspect(trace_path):
    """Summarize a d-band trace: message histogram, cycle breaks, coloring steps."""
    with open(trace_path, encoding='utf-8') as fh:
        entries = read_trace(fh)
    _write(None, _dump(summarize_trace(entries)))


@cli.command()
@click.option('--in', 'in_path', type=click.Path(exists=True, dir_okay=False), required=True)
@click.option('--schedule', 'schedule_path', type=click.Path(exists=True, dir_okay=False), default=None)
@click.option('--min-pseudo', is_flag=True, help='Search for a minimum pseudo-schedule.')
@click.option('--max-colors', type=int, default=4, show_default=True)
@exit_codes
def oracle(in_path, schedule_path, min_pseudo, max_colors):
    """Exhaustive checks for tiny graphs."""
    g, _ = parse_graph(_read(in_path))
    doc = {}
    if schedule_path:
        coloring, _, _ = parse_schedule(_read(schedule_path), g)
        exhaustive = oracle_pseudo_check(g, coloring)
        doc['pseudo'] = exhaustive
        doc['agrees'] = exhaustive == is_pseudo_schedule(g, coloring)
    if min_pseudo:
        best = exact_min_pseudo(g, max_colors)
        doc['min_pseudo'] = None if best is None else best.to_dict()
    if not doc:
        raise PseudoschedError("nothing to do: pass --schedule and/or --min-pseudo")
    _write(None, _dump(doc))
    if doc.get('agrees') is False:
        sys.exit(EXIT_VERIFICATION)


@cli.command()
@click.option('--in', 'in_path', type=click.Path(exists=True, dir_okay=False), required=True)
@click.option('--schedule', 'schedule_path', type=click.Path(exists=True, dir_okay=False), default=None)
@click.option('--out', type=click.Path(dir_okay=False, writable=True), default=None)
@exit_codes
def dot(in_path, schedule_path, out):
    """Export the graph (and schedule labels) as Graphviz DOT."""
    g, t = parse_graph(_read(in_path))
    coloring = None
    if schedule_path:
        coloring, schedule_tree, _ = parse_schedule(_read(schedule_path), g)
        t = schedule_tree or t
    _write(out, export_dot(g, t, coloring).encode('utf-8'))


@cli.command()
@click.option('--host', default='0.0.0.0', show_default=True)
@click.option('--port', type=int, default=5000, show_default=True)
@click.option('--debug', is_flag=True)
def serve(host, port, debug):
    """Run the JSON HTTP service."""
    from pseudosched.main import create_app

    create_app().run(host=host, port=port, debug=debug)


if __name__ == '__main__':
    cli()
