# noinspection PyUnresolvedReferences
from tests.fixtures.core import *  # noqa isort:skip

# noinspection PyUnresolvedReferences
from tests.fixtures.system import *  # noqa isort:skip

# noinspection PyUnresolvedReferences
from tests.fixtures.cli import *  # noqa isort:skip
