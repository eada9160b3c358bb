"""FIFO message transport with consume-once register handles.

The channel between the two parties carries either classical bits or
handles to quantum registers. A handle points into a joint state and
can be consumed exactly once; consuming it again is a hard error. That
is the no-cloning guard: the simulator never lets a register travel or
be measured twice.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .errors import HandleReusedError, TransportEmptyError

__all__ = ["RegisterHandle", "Transport"]


@dataclass
class RegisterHandle:
    """Single-use reference to one register inside a carried payload."""

    payload: object
    register: int
    _consumed: bool = field(default=False, repr=False)

    def consume(self):
        if self._consumed:
            raise HandleReusedError("register handle was already consumed")
        self._consumed = True
        return self.payload, self.register

    @property
    def consumed(self) -> bool:
        return self._consumed


class Transport:
    """Strictly ordered two-party message queue."""

    def __init__(self):
        self._queue: deque = deque()

    def send(self, message) -> None:
        self._queue.append(message)

    def recv(self):
        if not self._queue:
            raise TransportEmptyError("receive on empty transport")
        return self._queue.popleft()

    def __len__(self) -> int:
        return len(self._queue)
