import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "suite",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def g2():
    from treegrp.subgroups import full_group

    return full_group(2)


@pytest.fixture(scope="session")
def g3():
    from treegrp.subgroups import full_group

    return full_group(3)


@pytest.fixture(scope="session")
def g4():
    from treegrp.subgroups import full_group

    return full_group(4)
