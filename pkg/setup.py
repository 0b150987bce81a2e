"""Build script: compiles the optional frontier kernel.

The package is fully functional without the extension (a pure-Python
implementation with the same interface is selected at import time), so a
failed compile only costs speed. Set HYPERCROSS_NO_EXT=1 to skip the build.
"""
import os

from setuptools import setup

ext_modules = []
if not os.environ.get("HYPERCROSS_NO_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/hypercross/_frontier.pyx"],
            compiler_directives={"language_level": "3"},
        )
    except Exception as exc:  # pragma: no cover - build-environment dependent
        print(f"frontier kernel not built ({exc}); using pure-Python fallback")

setup(ext_modules=ext_modules)
