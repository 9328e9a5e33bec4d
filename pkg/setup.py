"""Build script: compiles the optional Cython drift kernel for the DBM integrator.

The package works without the extension (a numpy fallback is selected at
import time), so a missing compiler only costs speed, not functionality.
"""
import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Build the extension if we can; fall back to pure Python otherwise."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler / headers
            print(f"warning: C extension build skipped ({exc}); "
                  "using the pure-numpy DBM kernel")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: build of {ext.name} failed ({exc}); "
                  "using the pure-numpy DBM kernel")


def extensions():
    if os.environ.get("SPECRAD_NO_EXT"):
        return []
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "specrad._dbm_cy",
        ["src/specrad/_dbm_cy.pyx"],
        include_dirs=[numpy.get_include()],
        extra_compile_args=["-O3"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], language_level=3)


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
