"""Utility to run blocking numerical work off the event loop with a timeout."""

import asyncio
import logging
import threading
from collections.abc import Callable
from typing import Any, TypeVar

from ..cancellation import cancel_scope

T = TypeVar("T")

DEFAULT_TIMEOUT: float = 600.0  # seconds

logger = logging.getLogger(__name__)


async def run(
    operation: Callable[..., T],
    *args: Any,
    timeout: float | None = DEFAULT_TIMEOUT,
    **kwargs: Any,
) -> T:
    """
    Run a synchronous operation in a worker thread, raising TimeoutError past `timeout`.

    On timeout the worker's cancel event is set, so loops that pass through
    :func:`semigroup_dichotomy.cancellation.checkpoint` stop at their next
    iteration instead of running on behind the abandoned await.
    """
    cancel = threading.Event()

    def guarded() -> T:
        with cancel_scope(cancel):
            return operation(*args, **kwargs)

    try:
        return await asyncio.wait_for(asyncio.to_thread(guarded), timeout=timeout)
    except asyncio.TimeoutError as exc:
        cancel.set()
        name = getattr(operation, "__name__", "operation")
        logger.debug("%s: timeout after %s seconds, cancel event set", name, timeout)
        raise TimeoutError(f"{name} timed out after {timeout} seconds") from exc
