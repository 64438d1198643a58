import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from minirijndael.params import builtin_8bit, builtin_12bit  # noqa: E402


@pytest.fixture(scope="session")
def p8():
    return builtin_8bit()


@pytest.fixture(scope="session")
def p12():
    return builtin_12bit()


@pytest.fixture(scope="session", params=["8", "12"])
def builtin(request, p8, p12):
    return p8 if request.param == "8" else p12
