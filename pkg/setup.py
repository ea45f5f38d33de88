"""Build the optional compiled kernel.

The package works without it (a pure NumPy/Python fallback is selected at
import time), so any build failure here downgrades to a warning instead of
aborting the install.
"""
import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler, etc.
            print(f"warning: compiled kernels skipped ({exc}); "
                  "falling back to the pure-Python implementation", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: building {ext.name} failed ({exc}); "
                  "falling back to the pure-Python implementation", file=sys.stderr)


try:
    from Cython.Build import cythonize
    ext_modules = cythonize(
        ["src/beztopo/_kernels/speedups.pyx"],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
