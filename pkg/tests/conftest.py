import functools
import os

from hypothesis import settings

from arcover import textformat as tf

FIXTURES = os.path.join(os.path.dirname(__file__), "..", "fixtures")

settings.register_profile("repo", max_examples=25, deadline=None, derandomize=True)
settings.load_profile("repo")


def fixture_path(name: str) -> str:
    return os.path.join(FIXTURES, name)


@functools.lru_cache(maxsize=None)
def workspace(name: str) -> tf.Workspace:
    return tf.load(fixture_path(name))


@functools.lru_cache(maxsize=None)
def algebra(name: str, block: str | None = None):
    ws = workspace(name)
    spec = ws.algebras[block] if block else ws.first("algebra")
    return spec.build()


@functools.lru_cache(maxsize=None)
def component(name: str):
    return workspace(name).first("tq")


_CRITERIA: dict[int, tuple[str, bool]] = {}


def record_criterion(n: int, title: str, ok: bool) -> None:
    _CRITERIA[n] = (title, ok)
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'} - {title}")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        title, ok = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} - {title}")
