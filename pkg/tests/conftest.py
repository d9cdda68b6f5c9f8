from __future__ import annotations

import sys
from collections import defaultdict
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None)
settings.load_profile("default")

_ACCEPTANCE: dict[int, dict] = defaultdict(lambda: {"title": "", "items": []})


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        number, title = marker.args
        entry = _ACCEPTANCE[number]
        entry["title"] = title
        detail = dict(item.user_properties).get("detail", "")
        entry["items"].append((item.name, rep.passed, detail))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        entry = _ACCEPTANCE[number]
        ok = all(passed for _, passed, _ in entry["items"])
        tr.write_line(f"criterion {number} [{'PASS' if ok else 'FAIL'}] {entry['title']}")
        for name, passed, detail in entry["items"]:
            tail = f": {detail}" if detail else ""
            tr.write_line(f"    {'ok  ' if passed else 'FAIL'} {name}{tail}")
