# -*- coding: utf-8 -*-
#
# hopf-cohomology documentation build configuration file.
#
# This file is execfile()d with the current directory set to its
# containing dir.

import pathlib


def read_version():
    manifest = pathlib.Path(__file__).parent.parent.parent / "pyproject.toml"
    with manifest.open("r") as f:
        version_read = [line.strip() for line in f if line.startswith("version")]
    if len(version_read) > 1:
        raise ValueError('Multiple version found in "pyproject.toml"!')
    if not version_read:
        raise ValueError('No version found in "pyproject.toml"!')
    return version_read[0].split("=", 1)[1].strip("\" '")


# -- General configuration ------------------------------------------------

extensions = [
    "sphinx.ext.ifconfig",
    "sphinx.ext.todo",
    "sphinx.ext.mathjax",
    "releases",
]

templates_path = ["_templates"]
source_suffix = ".rst"
master_doc = "index"

project = "hopf-cohomology"
copyright = "2026, the hopf-cohomology developers"  # noqa A001
author = "the hopf-cohomology developers"

# The short X.Y version.
version = read_version()
# The full version, including alpha/beta/rc tags.
release = f"hopf-cohomology v{version}"

language = "en"
exclude_patterns = ["_build"]
pygments_style = "sphinx"

todo_include_todos = True
todo_emit_warnings = True

# -- Options for HTML output ----------------------------------------------

html_theme = "sphinx_rtd_theme"
html_static_path = []

# Output file base name for HTML help builder.
htmlhelp_basename = "hopfcohomology-doc"
