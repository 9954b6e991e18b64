import importlib.metadata

PLUGIN = "hopf_cohomology.pytest_plugin"


def _plugin_installed():
    eps = importlib.metadata.entry_points()
    group = eps.select(group="pytest11") if hasattr(eps, "select") else eps.get("pytest11", [])
    return any(ep.value == PLUGIN for ep in group)


PLUGIN_INSTALLED = _plugin_installed()
pytest_plugins = ["pytester"] if PLUGIN_INSTALLED else ["pytester", PLUGIN]
