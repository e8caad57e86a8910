import json
import logging
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import pandas as pd
from joblib import Parallel, delayed

from pseudosched.baselines import greedy_strict
from pseudosched.config import derive_seed
from pseudosched.dband.analysis import check_color_bounds
from pseudosched.dband.runtime import RunConfig, run_dband
from pseudosched.errors import PseudoschedError
from pseudosched.generators import CYCLE_TYPES, generate
from pseudosched.models.tree import build_bfs_tree, min_valid_d
from pseudosched.schedule import is_strict_schedule, is_T_pseudo_schedule
from pseudosched.twice_degree import twice_degree

logger = logging.getLogger(__name__)

ALGORITHMS = ('twice-degree', 'dband', 'greedy-strict')

COLUMNS = [
    'instance', 'kind', 'params', 'algorithm', 'n', 'd', 'delta_g', 'delta_t', 'height',
    'h_max', 'h_distinct', 'colors', 'envelope', 'strict_bound', 'within_envelope',
    'lower_ok', 'upper_ok', 'messages', 'breaks_I', 'breaks_II', 'verified',
]


def default_suite(full: bool = False) -> List[Dict]:
    """
    Instance descriptions swept by the bench.

    Args:
        full: Use the large sweep (grids up to 12x12, gnp up to 64 vertices)

    Returns:
        List of {'kind': ..., 'params': {...}} dictionaries
    """
    suite = []
    for n in ((3, 8, 16, 32) if full else (3, 8)):
        suite.append({'kind': 'path', 'params': {'n': n}})
    for leaves in ((3, 5, 10, 20) if full else (3, 10)):
        suite.append({'kind': 'star', 'params': {'leaves': leaves}})
    for side in ((2, 4, 6, 8, 10, 12) if full else (2, 4, 6)):
        suite.append({'kind': 'grid', 'params': {'rows': side, 'cols': side}})
    for n in ((8, 16, 32, 64) if full else (8, 16)):
        for replica in range(5 if full else 2):
            suite.append({'kind': 'random-gnp', 'params': {'n': n, 'p': min(1.0, 4.0 / n), 'replica': replica}})
    for n in ((16, 32, 64) if full else (16,)):
        suite.append({'kind': 'random-geometric', 'params': {'n': n, 'radius': 0.4}})
    for k in ((2, 3, 4, 5, 6) if full else (2, 3)):
        for cycle_type in CYCLE_TYPES:
            suite.append({'kind': 'cycle-gadget', 'params': {'k': k, 'cycle_type': cycle_type}})
    return suite


def instance_label(spec: Dict) -> str:
    params = ','.join(f"{key}={value}" for key, value in sorted(spec['params'].items()))
    return f"{spec['kind']}({params})"


@dataclass
class BenchReport:
    rows: List[dict] = field(default_factory=list)
    failures: List[dict] = field(default_factory=list)

    def to_frame(self) -> pd.DataFrame:
        columns = COLUMNS + (['wall_time'] if any('wall_time' in row for row in self.rows) else [])
        return pd.DataFrame(self.rows, columns=columns)

    def to_dict(self) -> dict:
        return {'rows': self.rows, 'failures': self.failures}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + '\n'

    def to_table(self) -> str:
        frame = self.to_frame()
        if frame.empty:
            return '(no rows)\n'
        shown = frame.drop(columns=['params'])
        return shown.to_string(index=False) + '\n'

    def summary(self) -> dict:
        frame = self.to_frame()
        if frame.empty:
            return {'rows': 0, 'failures': len(self.failures)}
        grouped = frame.groupby('algorithm').agg(
            rows=('instance', 'count'),
            max_h=('h_max', 'max'),
            within_envelope=('within_envelope', 'all'),
        )
        return {
            'rows': int(len(frame)),
            'failures': len(self.failures),
            'by_algorithm': {
                algo: {key: (bool(v) if key == 'within_envelope' else int(v)) for key, v in values.items()}
                for algo, values in grouped.to_dict(orient='index').items()
            },
        }


def _build(spec: Dict, seed: int):
    params = {key: value for key, value in spec['params'].items() if key != 'replica'}
    instance_seed = derive_seed(seed, 'gen', instance_label(spec))
    return generate(spec['kind'], seed=instance_seed, **params)


def _bench_instance(spec: Dict, seed: int, algorithms: Tuple[str, ...], timings: bool) -> Tuple[List[dict], List[dict]]:
    label = instance_label(spec)
    rows, failures = [], []
    try:
        instance = _build(spec, seed)
    except PseudoschedError as e:
        return rows, [{'instance': label, 'algorithm': None, 'reason': str(e)}]
    g = instance.graph
    base = {
        'instance': label,
        'kind': spec['kind'],
        'params': json.dumps(spec['params'], sort_keys=True),
        'n': g.n,
        'delta_g': g.max_degree,
        'strict_bound': g.max_degree ** 2 + 1,
    }

    for algorithm in algorithms:
        started = time.perf_counter()
        row = dict(base, d=None, lower_ok=None, upper_ok=None, messages=None, breaks_I=None, breaks_II=None)
        try:
            if algorithm == 'twice-degree':
                result = twice_degree(g, 0)
                tree, coloring = result.tree, result.coloring
                verified = is_T_pseudo_schedule(g, tree, coloring)
                row['envelope'] = max(2 * g.max_degree, 1)
                row['colors'] = coloring.max_color
            elif algorithm == 'dband':
                tree = instance.tree or build_bfs_tree(g, 0)
                d = min_valid_d(g, tree)
                config = RunConfig(seed=derive_seed(seed, 'dband', label), trace=False)
                run = run_dband(g, tree, d, config=config).raise_for_status()
                coloring = run.coloring
                verified = is_T_pseudo_schedule(g, tree, coloring)
                bounds = check_color_bounds(g, tree, d, coloring)
                row.update(
                    d=d,
                    envelope=bounds.upper,
                    lower_ok=bounds.lower_ok if bounds.applicable else None,
                    upper_ok=bounds.upper_ok if bounds.applicable else None,
                    messages=run.message_count,
                    breaks_I=run.cycle_breaks.get('I', 0),
                    breaks_II=run.cycle_breaks.get('II', 0),
                )
                row['colors'] = coloring.h_max
            elif algorithm == 'greedy-strict':
                result = greedy_strict(g)
                tree, coloring = build_bfs_tree(g, 0), result.coloring
                verified = is_strict_schedule(g, coloring)
                row['envelope'] = g.max_degree ** 2 + 1
                row['colors'] = coloring.max_color
            else:
                raise ValueError(f"unknown algorithm {algorithm!r}")
        except PseudoschedError as e:
            logger.error(f"{label} {algorithm}: {e}")
            failures.append({'instance': label, 'algorithm': algorithm, 'reason': f"{type(e).__name__}: {e}"})
            continue

        if not verified:
            logger.warning(f"{label} {algorithm}: schedule failed verification")
            failures.append({'instance': label, 'algorithm': algorithm, 'reason': 'verification failed'})
            continue
        row.update(
            algorithm=algorithm,
            delta_t=tree.max_degree,
            height=tree.height,
            h_max=coloring.h_max,
            h_distinct=coloring.h_distinct,
            within_envelope=row['colors'] <= row['envelope'],
            verified=True,
        )
        if timings:
            row['wall_time'] = round(time.perf_counter() - started, 6)
        rows.append(row)
    return rows, failures


def run_bench(
    suite: Optional[List[Dict]] = None,
    seed: int = 0,
    algorithms: Tuple[str, ...] = ALGORITHMS,
    jobs: int = 1,
    timings: bool = False,
) -> BenchReport:
    """
    Run every algorithm on every suite instance and collect verified rows.

    Args:
        suite: Instance descriptions; `default_suite()` when omitted
        seed: Root seed, split per instance and component
        algorithms: Algorithms to run on each instance
        jobs: joblib worker count
        timings: Add a wall_time column (makes reports run-dependent)

    Returns:
        BenchReport with rows sorted by (instance, algorithm)
    """
    suite = default_suite() if suite is None else suite
    results = Parallel(n_jobs=jobs)(
        delayed(_bench_instance)(spec, seed, tuple(algorithms), timings) for spec in suite
    )
    report = BenchReport()
    for rows, failures in results:
        report.rows.extend(rows)
        report.failures.extend(failures)
    report.rows.sort(key=lambda row: (row['instance'], row['algorithm']))
    report.failures.sort(key=lambda f: (f['instance'], f['algorithm'] or ''))
    logger.info(f"bench: {len(report.rows)} rows, {len(report.failures)} failures")
    return report
