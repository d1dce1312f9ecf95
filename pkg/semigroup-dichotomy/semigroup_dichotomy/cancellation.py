"""
Cooperative cancellation for numerical loops running in worker threads.

A thread started by :func:`semigroup_dichotomy.commands.run.run` carries a
``threading.Event`` in a context variable. Long loops call :func:`checkpoint`
once per iteration and unwind with :class:`Cancelled` after the event is set.
Outside a cancellable scope a checkpoint is a no-op.
"""

import threading
from collections.abc import Iterator
from contextlib import contextmanager
from contextvars import ContextVar

from .errors import Cancelled

_cancel_event: ContextVar[threading.Event | None] = ContextVar("cancel_event", default=None)


def checkpoint() -> None:
    event = _cancel_event.get()
    if event is not None and event.is_set():
        raise Cancelled("cancelled: the command timed out")


@contextmanager
def cancel_scope(event: threading.Event) -> Iterator[None]:
    token = _cancel_event.set(event)
    try:
        yield
    finally:
        _cancel_event.reset(token)
