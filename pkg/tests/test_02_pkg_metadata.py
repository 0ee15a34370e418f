import importlib, importlib.metadata as md

def test_can_import_top_level():
    pkg = importlib.import_module("chaintag")
    assert pkg is not None

def test_version_metadata_present_or_absent_but_safe():
    # installed distributions report a version; a bare checkout falls back to __version__
    try:
        v = md.version("chaintag")
        assert isinstance(v, str)
        return
    except md.PackageNotFoundError:
        pass
    pkg = importlib.import_module("chaintag")
    assert isinstance(pkg.__version__, str)

def test_errors_share_one_root():
    from chaintag import errors
    for name in errors.__all__:
        assert issubclass(getattr(errors, name), errors.ChainTagError)
