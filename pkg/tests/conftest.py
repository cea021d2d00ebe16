import sys
from pathlib import Path

import pytest

from torifan.corpus import named_fan

# regen_golden sits next to the tests and is imported by test_cli and test_acceptance.
sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture
def p2():
    return named_fan("Pn:2")
