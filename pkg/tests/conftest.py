from functools import lru_cache

import pytest

from coxkit import systems


@lru_cache(maxsize=None)
def system(name):
    """One shared instance per system so ball and normal-form caches are reused."""
    return systems.by_name(name)


@pytest.fixture
def get_system():
    return system
