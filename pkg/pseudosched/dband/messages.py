from dataclasses import dataclass
from enum import Enum
from typing import FrozenSet, Optional


class MessageKind(str, Enum):
    REQ_COL = 'REQ-COL'
    PUT_COL = 'PUT-COL'
    RPT_COL = 'RPT-COL'
    RPT_PAR = 'RPT-PAR'
    DEP_REQ = 'DEP-REQ'
    DEP_PUT = 'DEP-PUT'


@dataclass(frozen=True)
class Message:
    """
    One protocol message. Fields not used by `kind` stay None:

    REQ-COL carries `excluded`; PUT-COL carries (`x`, `k`); RPT-COL and
    RPT-PAR carry (`k`, `w`); DEP-REQ and DEP-PUT carry `w`. A color `k`
    of None is the unknown color.
    """

    kind: MessageKind
    src: int
    dst: int
    excluded: Optional[FrozenSet[int]] = None
    x: Optional[int] = None
    k: Optional[int] = None
    w: Optional[int] = None

    def __post_init__(self):
        if self.src == self.dst:
            raise ValueError(f"{self.kind.value} from {self.src} addressed to itself")
        if self.kind is MessageKind.REQ_COL:
            shape_ok = self.excluded is not None and self.x is None and self.k is None and self.w is None
        elif self.kind is MessageKind.PUT_COL:
            shape_ok = self.x is not None and self.excluded is None and self.w is None
        elif self.kind in (MessageKind.RPT_COL, MessageKind.RPT_PAR):
            shape_ok = self.w is not None and self.excluded is None and self.x is None
        else:
            shape_ok = self.w is not None and self.excluded is None and self.x is None and self.k is None
        if not shape_ok:
            raise ValueError(f"payload does not match kind {self.kind.value}: {self}")

    def payload(self) -> dict:
        if self.kind is MessageKind.REQ_COL:
            return {'L': sorted(self.excluded)}
        if self.kind is MessageKind.PUT_COL:
            return {'x': self.x, 'k': self.k}
        if self.kind in (MessageKind.RPT_COL, MessageKind.RPT_PAR):
            return {'k': self.k, 'w': self.w}
        return {'w': self.w}

    def __str__(self):
        args = ', '.join('?' if v is None else str(v) for v in self.payload().values()) \
            if self.kind is not MessageKind.REQ_COL else str(sorted(self.excluded))
        return f"{self.kind.value}({args}) {self.src}->{self.dst}"


def req_col(src, dst, excluded) -> Message:
    return Message(MessageKind.REQ_COL, src, dst, excluded=frozenset(excluded))


def put_col(src, dst, x, k) -> Message:
    return Message(MessageKind.PUT_COL, src, dst, x=x, k=k)


def rpt_col(src, dst, k, w) -> Message:
    return Message(MessageKind.RPT_COL, src, dst, k=k, w=w)


def rpt_par(src, dst, k, w) -> Message:
    return Message(MessageKind.RPT_PAR, src, dst, k=k, w=w)


def dep_req(src, dst, w) -> Message:
    return Message(MessageKind.DEP_REQ, src, dst, w=w)


def dep_put(src, dst, w) -> Message:
    return Message(MessageKind.DEP_PUT, src, dst, w=w)
