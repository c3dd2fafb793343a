import numpy as np
import pytest

from qgtube import build_cut, make_wrapping


@pytest.fixture
def rng():
    return np.random.default_rng(20261014)


@pytest.fixture(params=[(1, 1), (1, 2), (2, 3), (3, 5)], ids=lambda p: f"{p[0]}-{p[1]}")
def spec_cut(request):
    spec = make_wrapping(*request.param)
    return spec, build_cut(spec)


def pass_band_ks(spec, n, rng=None):
    """``n`` wavenumbers with at least one propagating channel and no band edge."""
    from qgtube.dispersion import all_modes

    out = []
    for k in np.linspace(0.15, 3.0, 4 * n):
        ms = all_modes(spec, k)
        if not ms.band_edge and ms.n_propagating_channels > 0 and abs(k - np.pi / 2) > 1e-2:
            out.append(float(k))
    idx = np.linspace(0, len(out) - 1, n).round().astype(int)
    return [out[i] for i in idx]


_CRITERIA = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marker = report.user_properties and dict(report.user_properties).get("criterion")
    if not marker:
        return
    n, title = marker
    entry = _CRITERIA.setdefault(n, {"title": title, "failed": [], "count": 0})
    entry["count"] += 1
    if report.outcome != "passed":
        entry["failed"].append(report.nodeid.split("::", 1)[1])


@pytest.hookimpl(tryfirst=True)
def pytest_runtest_setup(item):
    m = item.get_closest_marker("criterion")
    if m:
        item.user_properties.append(("criterion", m.args))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        e = _CRITERIA[n]
        status = "FAIL" if e["failed"] else "PASS"
        line = f"criterion {n}: {status}  {e['title']}  ({e['count'] - len(e['failed'])}/{e['count']} cases)"
        if e["failed"]:
            line += "  failed: " + ", ".join(e["failed"])
        terminalreporter.write_line(line)
