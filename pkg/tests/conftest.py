import itertools

import pytest

from mahonian import kernels

ACCEPTANCE_RESULTS = []


def compositions(max_n, max_d, min_n=0):
    """Every composition with 1 <= d <= max_d parts and min_n <= n <= max_n."""
    for d in range(1, max_d + 1):
        for a in itertools.product(range(max_n + 1), repeat=d):
            if min_n <= sum(a) <= max_n:
                yield a


def words_by_permutation(a):
    """Independent oracle: distinct permutations of the sorted word, sorted."""
    base = [k + 1 for k, c in enumerate(a) for _ in range(c)]
    return sorted(set(itertools.permutations(base)))


BACKENDS = [kernels.fallback]
if kernels.BACKEND == "cython":
    BACKENDS.append(kernels.impl)


@pytest.fixture(params=BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
def backend(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(line)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call":
        return
    number, title = marker.args
    status = "PASS" if report.passed else "FAIL"
    params = f" [{item.callspec.id}]" if hasattr(item, "callspec") else ""
    ACCEPTANCE_RESULTS.append(f"[{status}] criterion {number:>2}{params}: {title} ({report.duration:.1f} s)")
