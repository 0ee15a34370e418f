import os
import sys
import warnings
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT))
warnings.filterwarnings("ignore", category=DeprecationWarning)

FIXTURES = Path(__file__).parent / "fixtures"

# Eight short chunked sentences (word POS chunk), BIO2.
TOY_CHUNKS = """\
He PRP B-NP
reckons VBZ B-VP

the DT B-NP
deficit NN I-NP
will MD B-VP
narrow VB I-VP

prices NNS B-NP
rose VBD B-VP

the DT B-NP
dog NN I-NP
sat VBD B-VP

He PRP B-NP
sat VBD B-VP

prices NNS B-NP
will MD B-VP
narrow VB I-VP

the DT B-NP
prices NNS I-NP
rose VBD B-VP

dog NN B-NP
reckons VBZ B-VP
"""


def pytest_configure(config: pytest.Config) -> None:  # pragma: no cover - test hook
    """Apply global warning suppression for the default test suite."""
    warnings.filterwarnings("ignore", category=DeprecationWarning)


def _load_quarantine():
    """Load flaky test quarantine list from YAML file."""
    import yaml
    p = Path(__file__).parent / "flaky_quarantine.yaml"
    if not p.exists():
        return {}
    try:
        return yaml.safe_load(p.read_text(encoding="utf-8")) or {}
    except Exception:
        return {}


def pytest_collection_modifyitems(session, config, items):
    """Automatically mark quarantined flaky tests as xfail."""
    quarantine = _load_quarantine()
    if not quarantine:
        return

    for item in items:
        # Exact nodeid match
        reason = quarantine.get(item.nodeid)
        if reason:
            item.add_marker(pytest.mark.xfail(reason=f"quarantined: {reason}", strict=False))
            continue

        # Partial match for flexibility
        for quarantine_pattern, reason in quarantine.items():
            if quarantine_pattern in item.nodeid:
                item.add_marker(pytest.mark.xfail(reason=f"quarantined: {reason}", strict=False))
                break


@pytest.fixture(autouse=True)
def _restore_root_logging():
    """cli.main() reconfigures the root logger; put pytest's handlers back."""
    import logging
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)


@pytest.fixture
def rng():
    from chaintag.numerics import make_rng
    return make_rng(0)


@pytest.fixture
def write_file(tmp_path):
    """Write ``text`` to ``tmp_path/name`` and return the path as a string."""
    def _write(name: str, text: str) -> str:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return os.fspath(path)
    return _write


@pytest.fixture
def toy_corpus_path(write_file):
    return write_file("toy.txt", TOY_CHUNKS)


@pytest.fixture
def toy_corpus(toy_corpus_path):
    from chaintag.data import read_conll
    return read_conll(toy_corpus_path, scheme="BIO2")
