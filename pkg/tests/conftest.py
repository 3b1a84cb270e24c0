import pytest
from hypothesis import HealthCheck, settings

from hardy_lab import make_antitree, make_tree

settings.register_profile(
    "suite",
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def tree2():
    return make_tree(2, 2100)


@pytest.fixture(scope="session")
def tree3():
    return make_tree(3, 1100)


@pytest.fixture(scope="session")
def antitree_linear():
    # sphere sizes 1, 2, 3, ...
    return make_antitree(lambda r: r + 1, 1100)
