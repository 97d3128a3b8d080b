import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from sdgclassify import library
from sdgclassify.data import MINI_CORPUS, MINI_LIBRARY, MINI_TRUTH


@pytest.fixture(scope="session")
def mini_library():
    return library.load_library(MINI_LIBRARY)


@pytest.fixture(scope="session")
def mini_compiled(mini_library):
    return library.compile_library(mini_library)


@pytest.fixture(scope="session")
def mini_corpus_path():
    return MINI_CORPUS


@pytest.fixture(scope="session")
def mini_truth_path():
    return MINI_TRUTH
