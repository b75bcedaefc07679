import numpy as np
import pytest

import sboxkit as sk

# scoreboard lines recorded by the acceptance tests; replayed after capture
acceptance_log = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if acceptance_log:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_log:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def aes():
    return sk.SBox(8, np.array(sk.AES_SBOX))


@pytest.fixture(scope="session")
def identity8():
    return sk.SBox(8, np.arange(256))


@pytest.fixture(scope="session")
def dillon():
    return sk.SBox(6, np.array(sk.DILLON_PERMUTATION))
