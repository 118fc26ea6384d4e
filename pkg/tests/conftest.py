import os

import pytest


def trial_division_is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def sieve_oracle(limit: int) -> bytearray:
    """flags[i] == 1 iff i is prime, for i < limit (plain Eratosthenes)."""
    flags = bytearray([1]) * limit
    flags[:2] = b"\x00\x00"
    i = 2
    while i * i < limit:
        if flags[i]:
            flags[i * i :: i] = bytearray(len(range(i * i, limit, i)))
        i += 1
    return flags


def pytest_collection_modifyitems(config, items):
    if os.environ.get("GAFACTOR_EXTENDED") == "1":
        return
    skip = pytest.mark.skip(reason="set GAFACTOR_EXTENDED=1 to run the long large-number checks")
    for item in items:
        if "extended" in item.keywords:
            item.add_marker(skip)


_ACCEPTANCE: list[tuple[str, str]] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(name): acceptance criterion reported in the summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        status = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[report.outcome]
        _ACCEPTANCE.append((marker.args[0], status))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, status in _ACCEPTANCE:
        terminalreporter.write_line(f"{status}  {name}")
