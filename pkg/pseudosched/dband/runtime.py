import logging
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from pseudosched.config import default_budget, default_palette_cap, derive_seed
from pseudosched.dband.agents import (
    Event,
    VertexContext,
    handle_acquire,
    handle_assign,
    handle_report,
    start_acquire,
    start_assign,
    start_report,
)
from pseudosched.dband.messages import Message, MessageKind, rpt_col
from pseudosched.errors import BudgetExhaustedError, DeadlockError, ParameterError
from pseudosched.models.coloring import Coloring
from pseudosched.models.graph import Graph
from pseudosched.models.tree import KinshipView, RootedTree, kinship

logger = logging.getLogger(__name__)

POLICIES = ('synchronous', 'channel', 'fifo')

TERMINATED = 'terminated'
BUDGET_EXHAUSTED = 'budget-exhausted'
DEADLOCK = 'deadlock'

# (message kind, sender relation) -> procedure
ROUTES = {
    (MessageKind.REQ_COL, 'child'): 'assign',
    (MessageKind.PUT_COL, 'parent'): 'acquire',
    (MessageKind.PUT_COL, 'stepparent'): 'report',
    (MessageKind.RPT_PAR, 'stepchild'): 'acquire',
    (MessageKind.RPT_PAR, 'child'): 'acquire',
    (MessageKind.DEP_REQ, 'parent'): 'report',
    (MessageKind.DEP_REQ, 'child'): 'acquire',
    (MessageKind.DEP_PUT, 'parent'): 'report',
    (MessageKind.DEP_PUT, 'child'): 'assign',
    (MessageKind.DEP_PUT, 'stepparent'): 'report',
    (MessageKind.DEP_PUT, 'stepchild'): 'assign',
    (MessageKind.RPT_COL, 'parent'): 'report',
    (MessageKind.RPT_COL, 'stepparent'): 'report',
    (MessageKind.RPT_COL, 'child'): 'assign',
    (MessageKind.RPT_COL, 'stepchild'): 'assign',
}

HANDLERS = {
    'acquire': handle_acquire,
    'assign': handle_assign,
    'report': handle_report,
}


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    policy: str = 'synchronous'
    budget: Optional[int] = None
    i_max: Optional[int] = None
    trace: bool = True

    def __post_init__(self):
        if self.policy not in POLICIES:
            raise ParameterError(f"unknown interleaving policy {self.policy!r}; expected one of {POLICIES}")
        if self.budget is not None and self.budget < 1:
            raise ParameterError(f"message budget must be positive, got {self.budget}")
        if self.i_max is not None and self.i_max < 0:
            raise ParameterError(f"palette cap must be nonnegative, got {self.i_max}")


@dataclass
class SimulationRun:
    config: RunConfig
    d: int
    budget: int
    coloring: Coloring
    status: str
    steps: int
    messages: Dict[str, int]
    cycle_breaks: Dict[str, int]
    break_vertices: List[int] = field(default_factory=list)
    trace: Optional[List[dict]] = None

    @property
    def terminated(self) -> bool:
        return self.status == TERMINATED

    @property
    def message_count(self) -> int:
        return sum(self.messages.values())

    def raise_for_status(self) -> 'SimulationRun':
        if self.status == BUDGET_EXHAUSTED:
            raise BudgetExhaustedError(
                f"message budget of {self.budget} exhausted with {len(self.coloring.uncolored)} vertices uncolored",
                self.coloring.uncolored,
            )
        if self.status == DEADLOCK:
            raise DeadlockError(
                f"no message in flight after {self.steps} steps but vertices {list(self.coloring.uncolored)} are uncolored",
                self.coloring.uncolored,
            )
        return self

    def statistics(self) -> dict:
        return {
            'status': self.status,
            'steps': self.steps,
            'messages': dict(sorted(self.messages.items())),
            'message_count': self.message_count,
            'cycle_breaks': dict(sorted(self.cycle_breaks.items())),
        }


class _Network:
    """Reliable in-flight message store; `policy` fixes which message may be delivered next."""

    def __init__(self, policy: str, seed: int):
        self.policy = policy
        self.rng = np.random.default_rng(seed)
        self.queues: Dict[object, deque] = {}
        self.size = 0

    def _key(self, msg: Message):
        if self.policy == 'synchronous':
            return msg.src
        if self.policy == 'channel':
            return (msg.src, msg.dst)
        return 0

    def send(self, msg: Message):
        self.queues.setdefault(self._key(msg), deque()).append(msg)
        self.size += 1

    def receive(self) -> Message:
        keys = sorted(key for key, queue in self.queues.items() if queue)
        key = keys[0] if self.policy == 'fifo' else keys[int(self.rng.integers(len(keys)))]
        self.size -= 1
        return self.queues[key].popleft()

    def __bool__(self):
        return self.size > 0


def _contexts(view: KinshipView, d: int, i_max: int) -> List[VertexContext]:
    t = view.tree
    return [
        VertexContext(
            vertex=v,
            parent=None if v == t.root else t.parent[v],
            children=view.children[v],
            stepparents=view.stepparents[v],
            stepchildren=view.stepchildren[v],
            level=t.level[v],
            d=d,
            i_max=i_max,
        )
        for v in range(t.n)
    ]


def run_dband(
    g: Graph,
    t: RootedTree,
    d: int,
    seed: int = 0,
    budget: Optional[int] = None,
    config: Optional[RunConfig] = None,
) -> SimulationRun:
    """
    Run the d-band protocol on every vertex over a simulated reliable network.

    The run stops once no message is in flight or the delivery budget is
    spent. It counts as terminated when every vertex has acquired a color;
    otherwise the returned run carries a failure status for
    `raise_for_status`.
    """
    if config is None:
        config = RunConfig(seed=seed, budget=budget)
    if d < 1:
        raise ParameterError(f"band count d must be at least 1, got {d}")
    view = kinship(g, t)
    budget = config.budget or default_budget(g.n, g.max_degree)
    i_max = default_palette_cap(g.max_degree) if config.i_max is None else config.i_max
    contexts = _contexts(view, d, i_max)

    network = _Network(config.policy, derive_seed(config.seed, 'dband', config.policy))
    colors: List[Optional[int]] = [None] * g.n
    messages: Counter = Counter()
    breaks: Counter = Counter()
    break_vertices: List[int] = []
    trace: Optional[List[dict]] = [] if config.trace else None
    procedures: List[Dict[str, object]] = [{} for _ in range(g.n)]
    step = 0

    def record(events: List[Event]):
        for event in events:
            if event.name == 'colored':
                colors[event.vertex] = event.color
            else:
                breaks[event.cycle_type] += 1
                break_vertices.append(event.vertex)
                logger.debug(f"type {event.cycle_type} cycle broken for vertex {event.vertex} at {event.at}")
            if trace is not None:
                trace.append(dict(event.to_dict(), step=step))

    root = t.root
    colors[root] = 0
    record([Event('colored', root, color=0)])
    for c in contexts[root].children:
        network.send(rpt_col(root, c, 0, root))

    for ctx in contexts:
        if not ctx.is_root:
            state, out = start_acquire(ctx)
            procedures[ctx.vertex]['acquire'] = state
            for msg in out:
                network.send(msg)
            state, out = start_report(ctx)
            procedures[ctx.vertex]['report'] = state
            for msg in out:
                network.send(msg)
        if ctx.children:
            state, out = start_assign(ctx)
            procedures[ctx.vertex]['assign'] = state
            for msg in out:
                network.send(msg)

    while network and step < budget:
        msg = network.receive()
        step += 1
        messages[msg.kind.value] += 1
        if trace is not None:
            trace.append({
                'step': step,
                'kind': msg.kind.value,
                'src': msg.src,
                'dst': msg.dst,
                'payload': msg.payload(),
            })
        relation = contexts[msg.dst].relation(msg.src)
        assert relation is not None, f"{msg} travels between vertices that are not kin"
        target = ROUTES.get((msg.kind, relation))
        state = procedures[msg.dst].get(target)
        if state is None:
            logger.debug(f"vertex {msg.dst}: no {target} procedure for {msg}")
            continue
        state, out = HANDLERS[target](state, msg)
        procedures[msg.dst][target] = state
        record(state.events)
        for m in out:
            network.send(m)

    coloring = Coloring.from_list(colors)
    if coloring.is_total:
        status = TERMINATED
    elif network:
        status = BUDGET_EXHAUSTED
    else:
        status = DEADLOCK

    run = SimulationRun(
        config=config,
        d=d,
        budget=budget,
        coloring=coloring,
        status=status,
        steps=step,
        messages=dict(messages),
        cycle_breaks=dict(breaks),
        break_vertices=break_vertices,
        trace=trace,
    )
    if run.terminated:
        logger.info(f"d-band: n={g.n} d={d} terminated after {step} deliveries, h_max={coloring.h_max}")
    else:
        logger.error(f"d-band: n={g.n} d={d} {status} after {step} deliveries; uncolored={list(coloring.uncolored)}")
    return run
