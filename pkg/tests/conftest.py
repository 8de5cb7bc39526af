import sys
from pathlib import Path

import pytest

SRC = Path(__file__).resolve().parent.parent / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

from padic_hodge.padics import UnramifiedField  # noqa: E402


@pytest.fixture(scope="session")
def K5():
    """Q_5 at the default window."""
    return UnramifiedField(5, 1, 20)


@pytest.fixture(scope="session")
def K5div():
    """Q_5 with a window wide enough for chains of divisions by log."""
    return UnramifiedField(5, 1, 20, work_margin=200)


@pytest.fixture(scope="session")
def K25():
    """The unramified quadratic extension of Q_5."""
    return UnramifiedField(5, 2, 20)


@pytest.fixture(scope="session")
def K3():
    return UnramifiedField(3, 1, 20)
