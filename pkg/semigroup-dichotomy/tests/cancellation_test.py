import threading

import pytest

from semigroup_dichotomy.cancellation import cancel_scope, checkpoint
from semigroup_dichotomy.errors import Cancelled, NumericsError


def test_checkpoint_outside_a_scope_is_a_no_op():
    checkpoint()


def test_checkpoint_raises_once_the_event_is_set():
    event = threading.Event()
    with cancel_scope(event):
        checkpoint()
        event.set()
        with pytest.raises(Cancelled, match="timed out"):
            checkpoint()
    checkpoint()


def test_cancelled_is_a_numerics_error():
    assert issubclass(Cancelled, NumericsError)
