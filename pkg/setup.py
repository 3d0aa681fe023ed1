"""Build script: compiles the optional Cython term-map kernel.

The package is fully functional without the extension (a pure-Python
fallback is selected at import time), so any compilation failure is
downgraded to a warning.
"""

import warnings

from setuptools import setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:
            warnings.warn(f"skipping affhecke._termops_c build: {exc}")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"skipping {ext.name}: {exc}")


try:
    from Cython.Build import cythonize

    extensions = cythonize(
        ["src/affhecke/_termops_c.pyx"], language_level="3"
    )
except ImportError:
    extensions = []

setup(
    ext_modules=extensions,
    cmdclass={"build_ext": optional_build_ext},
)
