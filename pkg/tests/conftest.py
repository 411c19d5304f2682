import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from patternbuilder.corpus import default_corpus


@pytest.fixture(scope="session")
def corpus14():
    return default_corpus()
