import pathlib, pkgutil, importlib, re, types

SKIP_PAT = re.compile(r"\b(__main__)\b")

def iter_submodules():
    import chaintag as pkg
    pkg_dir = pathlib.Path(pkg.__file__).parent
    for mod in pkgutil.walk_packages([str(pkg_dir)], prefix=pkg.__name__ + "."):
        if SKIP_PAT.search(mod.name):
            continue
        yield mod.name

def test_import_all_submodules():
    names = list(iter_submodules())
    assert "chaintag.chain.inference" in names
    for name in names:
        m = importlib.import_module(name)
        assert isinstance(m, types.ModuleType)

def test_subpackages_export_what_they_list():
    for name in ("numerics", "embeddings", "encoder", "potentials", "chain",
                 "model", "data", "training", "evaluation"):
        m = importlib.import_module(f"chaintag.{name}")
        for exported in m.__all__:
            assert hasattr(m, exported), f"chaintag.{name} lists missing {exported}"
