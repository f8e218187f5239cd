"""Shared fixtures: the acceptance board is expensive enough to run only once."""

import pytest

_board = None


def _get_board():
    global _board
    if _board is None:
        from plap import verify
        _board = verify.run_all()
    return _board


@pytest.fixture(scope="session")
def acceptance_board():
    return _get_board()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _board is None:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for res in _board:
        terminalreporter.write_line(res.line())
