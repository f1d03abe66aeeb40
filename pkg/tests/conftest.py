import pytest

from speiserlab.theorem1 import run_theorem1


@pytest.fixture(scope="session")
def theorem1_report():
    """One default desk-scale run shared by the acceptance criteria."""
    return run_theorem1()
