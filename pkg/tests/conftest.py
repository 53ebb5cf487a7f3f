from __future__ import annotations

from pathlib import Path

import pytest

from nonadditive.classical import CodeParams
from nonadditive.lift import QuantumCodeBasis, SparseKet, build_basis

FIXTURES = Path(__file__).parent / "fixtures"

# (k, l) in increasing n: 3, 5, 7, 9, 11, 13
FAMILY = [(0, 0), (0, 1), (1, 0), (1, 1), (2, 0), (2, 1)]


@pytest.fixture(scope="session")
def fixtures() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def basis5() -> QuantumCodeBasis:
    return build_basis(CodeParams(0, 1))


@pytest.fixture(scope="session")
def bad_basis() -> QuantumCodeBasis:
    kets = [SparseKet.from_strings({"00000": 1, "11111": 1}), SparseKet.from_strings({"10000": 1, "01111": 1})]
    return QuantumCodeBasis.from_kets(kets)


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    lines = test_acceptance.summary_lines()
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
