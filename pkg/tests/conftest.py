import itertools
import sys

from hypothesis import strategies as st

from kmlab.gcm import GCM, parse_gcm

A2 = parse_gcm("2,-1;-1,2")
AFF = parse_gcm("2,-2;-2,2")
HYP = parse_gcm("2,-3;-3,2")
HYP43 = parse_gcm("2,-4;-3,2")


@st.composite
def gcms(draw, min_rank=2, max_rank=4, low=-4):
    n = draw(st.integers(min_rank, max_rank))
    rows = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i, j in itertools.combinations(range(n), 2):
        if draw(st.booleans()):
            rows[i][j] = draw(st.integers(low, -1))
            rows[j][i] = draw(st.integers(low, -1))
    return GCM(tuple(map(tuple, rows)))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.LINES:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(mod.LINES):
        terminalreporter.write_line(mod.LINES[num])
