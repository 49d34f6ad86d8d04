"""Build script for the optional compiled kernel.

The package is fully functional without the extension (a pure-Python
kernel is selected at import time), so a failed compile downgrades to
a warning instead of aborting the install.
"""

import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler, etc.
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print(f"WARNING: compiled kernel skipped ({exc}); "
              "falling back to the pure-Python kernel", file=sys.stderr)


try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "hecache._kernel._core",
                ["src/hecache/_kernel/_core.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    print("WARNING: Cython not available; building without the compiled kernel",
          file=sys.stderr)
    extensions = []

setup(ext_modules=extensions, cmdclass={"build_ext": optional_build_ext})
