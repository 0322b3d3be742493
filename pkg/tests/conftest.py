import pytest

from gearsynth import SynthesisSpec

# Frozen from an independent pure-Python triple loop over the full box
# (Fraction arithmetic throughout, no shared code with the package).
# key: (target_ratio, n_planets, floor(D/M)) -> (feasible count, rank-1 (zs, zp1, zp2))
GRID_FIXTURES = {
    (8, 2, 80): (0, None),
    (8, 4, 80): (0, None),
    (8, 5, 80): (0, None),
    (12, 2, 80): (0, None),
    (12, 4, 80): (0, None),
    (12, 5, 80): (0, None),
    (16, 2, 80): (1, (21, 28, 17)),
    (16, 4, 80): (0, None),
    (16, 5, 80): (0, None),
    (20, 2, 80): (1, (28, 24, 18)),
    (20, 4, 80): (1, (28, 24, 18)),
    (20, 5, 80): (0, None),
    (24, 2, 80): (3, (21, 24, 18)),
    (24, 4, 80): (1, (26, 26, 20)),
    (24, 5, 80): (0, None),
    (8, 2, 132): (3, (51, 34, 17)),
    (8, 4, 132): (2, (56, 32, 17)),
    (8, 5, 132): (2, (51, 34, 17)),
    (12, 2, 132): (21, (36, 27, 17)),
    (12, 4, 132): (13, (30, 36, 19)),
    (12, 5, 132): (3, (35, 35, 20)),
    (16, 2, 132): (30, (17, 34, 17)),
    (16, 4, 132): (16, (20, 32, 18)),
    (16, 5, 132): (3, (30, 30, 20)),
    (20, 2, 132): (19, (28, 24, 18)),
    (20, 4, 132): (11, (28, 24, 18)),
    (20, 5, 132): (2, (45, 25, 20)),
    (24, 2, 132): (15, (18, 27, 19)),
    (24, 4, 132): (6, (26, 26, 20)),
    (24, 5, 132): (2, (55, 30, 25)),
}

# All 11 feasible designs of the paper instance, in rank order, same source.
PAPER_FEASIBLE = [
    (28, 24, 18, 76, 70),
    (21, 35, 22, 91, 78),
    (45, 25, 20, 95, 90),
    (33, 33, 24, 99, 90),
    (30, 42, 28, 114, 100),
    (48, 32, 25, 112, 105),
    (34, 40, 28, 114, 102),
    (42, 36, 27, 114, 105),
    (66, 24, 20, 114, 110),
    (54, 30, 24, 114, 108),
    (44, 44, 32, 132, 120),
]

PAPER_TEETH = (44, 44, 32, 132, 120)

# (D, M) giving floor(D/M) = 80 or 132
GRID_GEOMETRY = {80: ("48", "0.6"), 132: ("79.4", "0.6")}


def grid_spec(ratio, n_planets, bound, top_k=10):
    bore, module = GRID_GEOMETRY[bound]
    return SynthesisSpec(target_ratio=ratio, rotor_bore_mm=bore, module_mm=module,
                         n_planets=n_planets, alpha_min_rad=0.1, top_k=top_k)


@pytest.fixture
def paper_spec():
    return SynthesisSpec(target_ratio=20, rotor_bore_mm="79.4", module_mm="0.6",
                         n_planets=4, alpha_min_rad=0.1, top_k=5)


@pytest.fixture
def paper_design(paper_spec):
    return paper_spec.design(*PAPER_TEETH)


# -- acceptance summary -------------------------------------------------------

_acceptance = []


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and report.when == "call":
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        mark = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{mark}] {name}")
