import pytest

from exitlab import ebch, reed_muller, repetition, single_parity_check


def suite_codes():
    """The small-code test suite: every exact identity is checked on these."""
    codes = []
    for n in range(2, 11):
        codes.append(single_parity_check(n))
        codes.append(repetition(n))
    for m in range(5):
        for v in range(m + 1):
            codes.append(reed_muller(v, m))
    codes.append(ebch(1, 3))
    codes.append(ebch(1, 4))
    return codes


@pytest.fixture(scope="session")
def suite():
    return suite_codes()
