import os

import pytest

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session", autouse=True)
def _isolated_cache(tmp_path_factory):
    old = os.environ.get("QRLAB_CACHE_DIR")
    os.environ["QRLAB_CACHE_DIR"] = str(tmp_path_factory.mktemp("qrlab-cache"))
    yield
    if old is None:
        os.environ.pop("QRLAB_CACHE_DIR", None)
    else:
        os.environ["QRLAB_CACHE_DIR"] = old


@pytest.fixture(scope="session")
def qr41():
    from qrlab.codes import extend, qr_code
    spec, q = qr_code(41)
    return spec, q, extend(q)


@pytest.fixture(scope="session")
def C(qr41):
    return qr41[2]


@pytest.fixture(scope="session")
def D(C):
    from qrlab.codes import codewords_of_weight
    from qrlab.designs import design_from_codewords
    return design_from_codewords(codewords_of_weight(C, 10), 42)


@pytest.fixture(scope="session")
def aut_D(D):
    from qrlab.automorphism import design_automorphism_group
    return design_automorphism_group(D)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
