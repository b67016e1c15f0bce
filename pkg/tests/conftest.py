import pytest

from app.models import StepFunction, paper_h, reference_tv


@pytest.fixture
def two_step_h() -> StepFunction:
    return paper_h()


@pytest.fixture
def reference():
    return reference_tv()
