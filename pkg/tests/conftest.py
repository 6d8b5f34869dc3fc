import pytest
from hypothesis import strategies as st

from pervhilb.dynkin import FAMILIES
from pervhilb.graded import PervBettiTable

FAMILY_NAMES = sorted(FAMILIES)

# fibrations over a curve, perversity = Leray-type grading
K3 = PervBettiTable({(0, 0): 1, (0, 2): 1, (1, 2): 20, (2, 2): 1, (2, 4): 1})
P1XP1 = PervBettiTable({(0, 0): 1, (0, 2): 1, (2, 2): 1, (2, 4): 1})
EXE = PervBettiTable({(0, 0): 1, (0, 1): 2, (0, 2): 1, (1, 1): 2, (1, 2): 4, (1, 3): 2,
                      (2, 2): 1, (2, 3): 2, (2, 4): 1})
CUSTOM_SURFACES = {"K3": K3, "P1xP1": P1XP1, "ExE": EXE}
ALL_SURFACES = {**{name: FAMILIES[name].surface for name in FAMILY_NAMES}, **CUSTOM_SURFACES}


@pytest.fixture(params=sorted(ALL_SURFACES))
def any_surface(request):
    return ALL_SURFACES[request.param]


@pytest.fixture(params=FAMILY_NAMES)
def family_name(request):
    return request.param


def surface_tables(max_dim=3):
    """Random small surface tables with p in {0,1,2} and d in {0..4}."""
    key = st.tuples(st.integers(0, 2), st.integers(0, 4))
    return st.dictionaries(key, st.integers(1, max_dim), min_size=1, max_size=4).map(PervBettiTable)


def pytest_terminal_summary(terminalreporter):
    module = __import__("sys").modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in module.RESULTS:
        terminalreporter.write_line(line)
