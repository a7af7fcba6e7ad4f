import pytest

from csflab.construct import build_admissible
from csflab.yinyang import integrate_profile


@pytest.fixture(scope="session")
def profile_1e4():
    return integrate_profile(1e4)


@pytest.fixture(scope="session")
def profile_1e3():
    return integrate_profile(1e3)


@pytest.fixture(scope="session")
def profile_200():
    return integrate_profile(200.0)


@pytest.fixture(scope="session")
def admissible_200(profile_200):
    return build_admissible(profile_200, -200.0)


@pytest.fixture(scope="session")
def admissible_1e3(profile_1e3):
    return build_admissible(profile_1e3, -1e3)


@pytest.fixture(scope="session")
def admissible_1e4(profile_1e4):
    return build_admissible(profile_1e4, -1e4)
