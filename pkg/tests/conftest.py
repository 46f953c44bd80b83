import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from rainbowmatch import _backend  # noqa: E402


@pytest.fixture(params=_backend.available())
def backend(request):
    """Run the test once per importable kernel backend."""
    previous = _backend.name()
    _backend.use(request.param)
    yield request.param
    _backend.use(previous)
