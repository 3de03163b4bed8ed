import pytest

from shiftaut.language import SubshiftSpec, build_oracle, fibonacci, period_doubling, thue_morse


@pytest.fixture(scope="session")
def fib():
    return build_oracle(fibonacci(), 80)


@pytest.fixture(scope="session")
def tm():
    return build_oracle(thue_morse(), 120)


@pytest.fixture(scope="session")
def pd():
    return build_oracle(period_doubling(), 80)


@pytest.fixture(scope="session")
def per01():
    return build_oracle(SubshiftSpec.periodic("01"), 20)


@pytest.fixture(scope="session")
def per0102():
    """Periodic orbit of 0102: exchanging 1 and 2 is an automorphism fixing [0]."""
    return build_oracle(SubshiftSpec.periodic("0102"), 24)


@pytest.fixture(scope="session")
def full2():
    return build_oracle(SubshiftSpec.full_shift("01", 10), 10)


def pytest_terminal_summary(terminalreporter):
    import acceptance_log

    if acceptance_log.LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(acceptance_log.LINES):
            terminalreporter.write_line(acceptance_log.LINES[n])
