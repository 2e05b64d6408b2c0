import pytest

from genus5.field_tower import get_field
from genus5.polynomials.forms import MPoly, monomials


def rand_form(k, d, rng, density=1.0):
    """Random ternary form of degree d over GF(3^k)."""
    E = get_field(k)
    terms = {m: E.random(rng) for m in monomials(3, d) if rng.random() < density}
    return MPoly(E, 3, terms)


def rand_sextic(rng, density=1.0):
    while True:
        F = rand_form(1, 6, rng, density)
        if F:
            return F


def norm_to_f3(G):
    """Product of the Frobenius conjugates of a form over GF(3^k), as a form over GF(3)."""
    out = H = G
    for _ in range(G.field.degree - 1):
        H = H.frobenius()
        out = out * H
    return out.restrict(1)


# --- acceptance summary: one PASS/FAIL line per criterion ------------------------

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion this test belongs to")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m is None or (rep.when != "call" and not rep.failed):
        return
    n, title = m.args
    ok, _ = _CRITERIA.get(n, (True, title))
    _CRITERIA[n] = (ok and rep.passed, title)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        ok, title = _CRITERIA[n]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {n}: {title}")
