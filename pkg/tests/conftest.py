import pytest

from concrete_sheaves.simplicial import (build_site_F, build_site_F2_sep, complex_to_sheaf,
                                         edge_complex, point_complex, triangle_boundary,
                                         two_points_complex)


@pytest.fixture(scope="session")
def F2():
    return build_site_F(2)


@pytest.fixture(scope="session")
def F2sep():
    return build_site_F2_sep()


@pytest.fixture(scope="session")
def F3():
    return build_site_F(3)


@pytest.fixture(scope="session")
def E(F2):
    return complex_to_sheaf(edge_complex(), site=F2, name="E")


@pytest.fixture(scope="session")
def P2(F2):
    return complex_to_sheaf(two_points_complex(), site=F2, name="P2")


@pytest.fixture(scope="session")
def pt(F2):
    return complex_to_sheaf(point_complex(), site=F2, name="pt")


@pytest.fixture(scope="session")
def T2(F2):
    return complex_to_sheaf(triangle_boundary(), site=F2, name="T")


@pytest.fixture(scope="session")
def T3(F3):
    return complex_to_sheaf(triangle_boundary(), site=F3, name="T")


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
