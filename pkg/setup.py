"""Build script for the compiled arithmetic kernels.

The extension is a speedup only: if Cython or a C compiler is missing the
install still succeeds and the package falls back to the pure-Python kernels
at import time.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Never fail the install because the speedup extension would not build."""

    def run(self):
        try:
            super().run()
        except Exception as exc:
            print(f"warning: skipping compiled kernels ({exc}); "
                  "the pure-Python fallback will be used")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: could not build {ext.name} ({exc}); "
                  "the pure-Python fallback will be used")


def extensions():
    if os.environ.get("ROOT_ENCLOSE_NO_EXT"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "root_enclose._kernels._speedup",
        ["src/root_enclose/_kernels/_speedup.pyx"],
        # -ffp-contract=off keeps the float loop bitwise identical to the
        # pure-Python twin (no fused multiply-add contraction)
        extra_compile_args=["-O3", "-ffp-contract=off"],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(cmdclass={"build_ext": optional_build_ext}, ext_modules=extensions())
