"""Build script: compiles the optional search-kernel extension.

The package is fully functional without the extension; a pure-Python
kernel with identical semantics is selected at import when the compiled
module is missing (see ethiplan.planner.search).
"""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("ETHIPLAN_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/ethiplan/planner/_csearch.pyx"],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
