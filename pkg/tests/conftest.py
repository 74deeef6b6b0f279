import os

import pytest

ACCEPTANCE: dict = {}


@pytest.fixture(autouse=True, scope="session")
def _table_dir(tmp_path_factory):
    # keep the on-disk Witt table cache out of the user's home directory
    old = os.environ.get("WITTLAB_TABLE_DIR")
    os.environ["WITTLAB_TABLE_DIR"] = str(tmp_path_factory.mktemp("witt_tables"))
    yield
    if old is None:
        os.environ.pop("WITTLAB_TABLE_DIR", None)
    else:
        os.environ["WITTLAB_TABLE_DIR"] = old


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, title, detail = ACCEPTANCE[k]
        line = f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {title}"
        terminalreporter.write_line(line + (f"  ({detail})" if detail else ""))
