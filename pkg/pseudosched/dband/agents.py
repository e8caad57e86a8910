"""
Per-vertex procedures of the d-band protocol as pure transition functions.

Every vertex other than the root runs an acquire procedure (collect excluded
colors, request a color from the parent, announce it) and a report procedure
(relay colors and dependencies between the tree and its step-relations).
Every vertex with children also runs an assign procedure that hands colors
to its children.

A dependence never points up the vertex order. When its default direction
would, the vertex on the other side is asked to hold a reverse dependence
instead. The original dependence is dropped only once that request is
acknowledged; if the other side already has its color, the request goes
unanswered and the color itself settles the dependence.

Handlers take a state and one message and return `(new_state, outbound)`.
They never mutate their input; `new_state.events` lists the cycle breaks and
colorings produced by that single transition.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Set, Tuple

from pseudosched.errors import PaletteExhaustedError, ParameterError
from pseudosched.dband.messages import (
    Message,
    MessageKind,
    dep_put,
    dep_req,
    put_col,
    req_col,
    rpt_col,
    rpt_par,
)

logger = logging.getLogger(__name__)

COLLECT, AWAIT, DONE = 'collect', 'await', 'done'


def palette(level: int, d: int, i_max: int) -> Tuple[int, ...]:
    """Colors available at `level`: level mod d, then every d-th color above it, i_max steps up."""
    if d < 1:
        raise ParameterError(f"band count d must be at least 1, got {d}")
    base = level % d
    return tuple(base + i * d for i in range(i_max + 1))


@dataclass(frozen=True)
class VertexContext:
    """What a vertex knows about its surroundings; fixed for the whole run."""

    vertex: int
    parent: Optional[int]
    children: Tuple[int, ...]
    stepparents: Tuple[int, ...]
    stepchildren: Tuple[int, ...]
    level: int
    d: int
    i_max: int

    @property
    def is_root(self) -> bool:
        return self.parent is None

    def relation(self, u: int) -> Optional[str]:
        if u == self.parent:
            return 'parent'
        if u in self.children:
            return 'child'
        if u in self.stepparents:
            return 'stepparent'
        if u in self.stepchildren:
            return 'stepchild'
        return None


@dataclass(frozen=True)
class Event:
    name: str
    vertex: int
    color: Optional[int] = None
    cycle_type: Optional[str] = None
    at: Optional[int] = None

    def to_dict(self) -> dict:
        if self.name == 'colored':
            return {'event': 'colored', 'vertex': self.vertex, 'color': self.color}
        return {'event': 'cycle-break', 'vertex': self.vertex, 'type': self.cycle_type, 'at': self.at}


def _drop(ctx: VertexContext, procedure: str, msg: Message, reason: str):
    logger.debug(f"vertex {ctx.vertex} {procedure}: dropped {msg} ({reason})")


# Acquire

@dataclass
class AcquireState:
    """
    `waiting` maps a stepchild to this vertex (its parent's color is still
    missing) and a registered vertex w to itself (w's color is still missing).
    """

    ctx: VertexContext
    phase: str = COLLECT
    excluded: Set[int] = field(default_factory=set)
    waiting: Dict[int, int] = field(default_factory=dict)
    settled: Set[int] = field(default_factory=set)
    color: Optional[int] = None
    events: List[Event] = field(default_factory=list)

    @property
    def awaited(self) -> Set[int]:
        return set(self.waiting.values())

    def copy(self) -> 'AcquireState':
        return AcquireState(
            ctx=self.ctx,
            phase=self.phase,
            excluded=set(self.excluded),
            waiting=dict(self.waiting),
            settled=set(self.settled),
            color=self.color,
        )


def _finish_collect(state: AcquireState, out: List[Message]):
    ctx = state.ctx
    out.append(req_col(ctx.vertex, ctx.parent, state.excluded))
    state.phase = AWAIT


def start_acquire(ctx: VertexContext) -> Tuple[AcquireState, List[Message]]:
    v = ctx.vertex
    state = AcquireState(ctx=ctx, waiting={x: v for x in ctx.stepchildren})
    out: List[Message] = []
    if not state.waiting:
        _finish_collect(state, out)
    return state, out


def _acquire_awaiting(state: AcquireState, msg: Message, out: List[Message]):
    ctx = state.ctx
    v, p = ctx.vertex, ctx.parent
    relation = ctx.relation(msg.src)
    if msg.kind is MessageKind.PUT_COL and relation == 'parent' and msg.x == v and msg.k is not None:
        state.color = msg.k
        state.phase = DONE
        for u in ctx.children + ctx.stepchildren + ctx.stepparents:
            out.append(rpt_col(v, u, msg.k, v))
        state.events.append(Event('colored', v, color=msg.k))
    elif msg.kind is MessageKind.DEP_REQ and relation == 'child':
        # Request already sent: the parent holds the dependence in its place
        out.append(dep_put(v, p, msg.w))
    elif msg.kind is MessageKind.RPT_PAR and relation == 'child' and msg.k is not None:
        out.append(rpt_col(v, p, msg.k, msg.w))
        out.append(rpt_col(v, p, None, msg.w))
    else:
        _drop(ctx, 'acquire', msg, 'waiting for PUT-COL')


def handle_acquire(state: AcquireState, msg: Message) -> Tuple[AcquireState, List[Message]]:
    ctx = state.ctx
    v = ctx.vertex
    assert msg.dst == v, f"message for {msg.dst} delivered to {v}"
    state = state.copy()
    out: List[Message] = []

    if state.phase == DONE:
        _drop(ctx, 'acquire', msg, 'already colored')
        return state, out
    if state.phase == AWAIT:
        _acquire_awaiting(state, msg, out)
        return state, out

    relation = ctx.relation(msg.src)
    if msg.kind is MessageKind.RPT_PAR and relation == 'stepchild':
        x = msg.src
        if msg.k is not None:
            state.waiting.pop(x, None)
            state.excluded.add(msg.k)
            state.settled.add(x)
        elif msg.w == v and x in state.waiting:
            # Type I cycle breaking: the parent of x now waits for this vertex
            state.waiting.pop(x)
            state.settled.add(x)
            state.events.append(Event('cycle-break', v, cycle_type='I', at=v))
        else:
            _drop(ctx, 'acquire', msg, 'stepchild already resolved')
            return state, out
    elif msg.kind is MessageKind.RPT_PAR and relation == 'child' and msg.k is not None:
        # Reverse report: the color of w, a stepparent of this child
        state.waiting.pop(msg.w, None)
        state.excluded.add(msg.k)
        state.settled.add(msg.w)
    elif msg.kind is MessageKind.DEP_REQ and relation == 'child':
        # Reverse dependence, acknowledged back to the child
        if msg.w not in state.settled:
            state.waiting[msg.w] = msg.w
        out.append(dep_req(v, msg.src, msg.w))
    else:
        _drop(ctx, 'acquire', msg, 'no matching arm')
        return state, out

    if not state.waiting:
        _finish_collect(state, out)
    return state, out


# Assign

@dataclass
class AssignState:
    """
    A stepchild in `deferring` has acknowledged a reverse dependence: it will
    avoid the colors of every child below it in vertex order, so those
    children need not wait for its color.
    """

    ctx: VertexContext
    forbidden: Set[int] = field(default_factory=set)
    requests: Dict[int, Set[int]] = field(default_factory=dict)
    requested: Set[int] = field(default_factory=set)
    uncolored: Set[int] = field(default_factory=set)
    deferring: Set[int] = field(default_factory=set)
    unassigned: Set[int] = field(default_factory=set)
    reverse: Dict[int, Set[int]] = field(default_factory=dict)
    signaled: Set[int] = field(default_factory=set)
    assigned: Dict[int, int] = field(default_factory=dict)
    done: bool = False
    events: List[Event] = field(default_factory=list)

    def copy(self) -> 'AssignState':
        return AssignState(
            ctx=self.ctx,
            forbidden=set(self.forbidden),
            requests={z: set(excluded) for z, excluded in self.requests.items()},
            requested=set(self.requested),
            uncolored=set(self.uncolored),
            deferring=set(self.deferring),
            unassigned=set(self.unassigned),
            reverse={z: set(pending) for z, pending in self.reverse.items()},
            signaled=set(self.signaled),
            assigned=dict(self.assigned),
            done=self.done,
        )


def _pick_color(state: AssignState, z: int) -> int:
    ctx = state.ctx
    blocked = state.forbidden | state.requests.get(z, set())
    for k in palette(ctx.level + 1, ctx.d, ctx.i_max):
        if k not in blocked:
            return k
    raise PaletteExhaustedError(z, ctx.i_max)


def _ready(state: AssignState, z: int) -> bool:
    return not state.reverse[z] and all(x in state.deferring and z < x for x in state.uncolored)


def _advance(state: AssignState, out: List[Message]):
    ctx = state.ctx
    v = ctx.vertex
    if state.done:
        return
    for z in sorted(state.requested & state.unassigned):
        if not _ready(state, z):
            continue
        k = _pick_color(state, z)
        out.append(put_col(v, z, z, k))
        out.extend(put_col(v, x, z, k) for x in ctx.stepchildren)
        state.unassigned.discard(z)
        state.forbidden.add(k)
        state.assigned[z] = k
    for x in sorted(state.deferring - state.signaled):
        if not any(z < x for z in state.unassigned):
            # Done-signal for x: vertex = sender, color unknown
            out.append(put_col(v, x, v, None))
            state.signaled.add(x)
    if not state.unassigned:
        out.extend(put_col(v, x, v, None) for x in ctx.stepchildren if x not in state.signaled)
        state.signaled.update(ctx.stepchildren)
        state.done = True


def _process_assign(state: AssignState, msg: Message, out: List[Message]):
    ctx = state.ctx
    v = ctx.vertex
    relation = ctx.relation(msg.src)
    if msg.kind is MessageKind.REQ_COL and relation == 'child':
        z = msg.src
        state.requests[z] = set(msg.excluded) | state.requests.get(z, set())
        state.requested.add(z)
    elif msg.kind is MessageKind.RPT_COL and relation == 'stepchild' and msg.k is not None:
        state.uncolored.discard(msg.src)
        state.forbidden.add(msg.k)
    elif msg.kind is MessageKind.DEP_PUT and relation == 'stepchild' and msg.w == v:
        x = msg.src
        if x in state.uncolored and x not in state.deferring:
            # Type II cycle breaking: children below x stop waiting for it
            state.deferring.add(x)
            smallest = min(z for z in ctx.children if z < x)
            state.events.append(Event('cycle-break', smallest, cycle_type='II', at=v))
    elif msg.kind is MessageKind.RPT_COL and relation == 'child':
        # Reverse report: a color the child must avoid, then the release of w
        z = msg.src
        if msg.k is not None:
            state.requests.setdefault(z, set()).add(msg.k)
        else:
            state.reverse[z].discard(msg.w)
    elif msg.kind is MessageKind.DEP_PUT and relation == 'child':
        z = msg.src
        if z in state.unassigned:
            # Reverse dependence, acknowledged back to the child
            state.reverse[z].add(msg.w)
            out.append(dep_put(v, z, msg.w))
        else:
            _drop(ctx, 'assign', msg, 'child already assigned')
    else:
        _drop(ctx, 'assign', msg, 'no matching arm')


def start_assign(ctx: VertexContext) -> Tuple[AssignState, List[Message]]:
    v = ctx.vertex
    state = AssignState(
        ctx=ctx,
        uncolored=set(ctx.stepchildren),
        unassigned=set(ctx.children),
        reverse={z: set() for z in ctx.children},
    )
    out = [dep_put(v, x, v) for x in ctx.stepchildren if any(z < x for z in ctx.children)]
    _advance(state, out)
    return state, out


def handle_assign(state: AssignState, msg: Message) -> Tuple[AssignState, List[Message]]:
    ctx = state.ctx
    assert msg.dst == ctx.vertex, f"message for {msg.dst} delivered to {ctx.vertex}"
    state = state.copy()
    out: List[Message] = []
    if state.done:
        _drop(ctx, 'assign', msg, 'all children assigned')
        return state, out
    _process_assign(state, msg, out)
    _advance(state, out)
    return state, out


# Report

@dataclass
class ReportState:
    ctx: VertexContext
    type_one: Set[int] = field(default_factory=set)
    type_two: Set[int] = field(default_factory=set)
    forwarded: Set[int] = field(default_factory=set)
    stepparent_colors: Dict[int, int] = field(default_factory=dict)
    events: List[Event] = field(default_factory=list)

    def copy(self) -> 'ReportState':
        return ReportState(
            ctx=self.ctx,
            type_one=set(self.type_one),
            type_two=set(self.type_two),
            forwarded=set(self.forwarded),
            stepparent_colors=dict(self.stepparent_colors),
        )


def start_report(ctx: VertexContext) -> Tuple[ReportState, List[Message]]:
    """Offer the parent a reverse dependence for every stepparent below it in vertex order."""
    v, p = ctx.vertex, ctx.parent
    return ReportState(ctx=ctx), [dep_req(v, p, w) for w in ctx.stepparents if w < p]


def handle_report(state: ReportState, msg: Message) -> Tuple[ReportState, List[Message]]:
    ctx = state.ctx
    v, p = ctx.vertex, ctx.parent
    assert msg.dst == v, f"message for {msg.dst} delivered to {v}"
    state = state.copy()
    out: List[Message] = []
    relation = ctx.relation(msg.src)

    if msg.kind is MessageKind.DEP_REQ and relation == 'parent' and msg.w in ctx.stepparents:
        w = msg.w
        if w in state.stepparent_colors:
            # Type I cycle breaking: reverse report of a color already heard
            out.append(rpt_par(v, p, state.stepparent_colors[w], w))
        elif w not in state.type_one:
            # Type I cycle breaking: w stops waiting for the parent
            state.type_one.add(w)
            out.append(rpt_par(v, w, None, w))
    elif msg.kind is MessageKind.RPT_COL and relation == 'parent':
        out.extend(rpt_par(v, u, msg.k, msg.w) for u in ctx.stepparents)
    elif msg.kind is MessageKind.RPT_COL and relation == 'stepparent' and msg.k is not None:
        y = msg.src
        state.stepparent_colors[y] = msg.k
        if y in state.type_one:
            # Type I cycle breaking: reverse report
            state.type_one.discard(y)
            out.append(rpt_par(v, p, msg.k, y))
    elif msg.kind is MessageKind.DEP_PUT and relation == 'stepparent':
        # Type II cycle breaking: the parent is asked to hold this vertex back
        state.forwarded.add(msg.src)
        out.append(dep_put(v, p, msg.src))
    elif msg.kind is MessageKind.DEP_PUT and relation == 'parent':
        if msg.w in state.forwarded:
            state.forwarded.discard(msg.w)
            state.type_two.add(msg.w)
            out.append(dep_put(v, msg.w, msg.w))
        else:
            # The parent holds a reverse dependence on w for this vertex
            out.extend(dep_req(v, c, msg.w) for c in ctx.children)
    elif msg.kind is MessageKind.PUT_COL and relation == 'stepparent' and msg.src in state.type_two:
        # Type II cycle breaking: reverse report
        y = msg.src
        if msg.k is None:
            state.type_two.discard(y)
        out.append(rpt_col(v, p, msg.k, y))
    else:
        _drop(ctx, 'report', msg, 'no matching arm')
    return state, out
