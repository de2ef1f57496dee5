import pytest
from hypothesis import HealthCheck, settings

from helpers import DATA, student_log
from rpminer import run_pipeline
from rpminer.log_model import read_log

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def sample_log():
    return read_log(DATA / "sample_log.csv")


@pytest.fixture(scope="session")
def students():
    return student_log()


@pytest.fixture(scope="session")
def students_result(students):
    return run_pipeline(students)


@pytest.fixture(scope="session")
def students_spec(students_result):
    (spec,) = students_result.routines
    return spec
