from contextlib import contextmanager
from functools import wraps
from typing import Any, Callable, Iterator

from krall_laguerre.core import config


@contextmanager
def config_set(name: str, value: Any) -> Iterator[None]:
    old_value = getattr(config, name)
    setattr(config, name, value)
    try:
        yield
    finally:
        setattr(config, name, old_value)


def mock_config(name: str, value: Any) -> Callable[[Callable[..., Any]], Callable[..., Any]]:
    """
    Decorator running a test with a config value overridden.
    """

    def _decorator(f: Callable[..., Any]) -> Callable[..., Any]:
        @wraps(f)
        def _wrapper(*args: Any, **kwargs: Any) -> Any:
            with config_set(name, value):
                return f(*args, **kwargs)

        return _wrapper

    return _decorator
