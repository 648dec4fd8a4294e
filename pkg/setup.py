"""Build script for the optional Cython kernels.

The extension is optional: if Cython or a C++ compiler is missing, the package
installs without it and falls back to trajcluster._pykernels at import time.
"""
import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001
            print(f"warning: skipping compiled kernels ({exc})")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            print(f"warning: failed to build {ext.name} ({exc})")


def extensions():
    if os.environ.get("TRAJCLUSTER_NO_EXT"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "trajcluster._kernels",
        ["src/trajcluster/_kernels.pyx"],
        language="c++",
        # no -ffast-math / -march=native: results must match the Python kernels bit for bit
        extra_compile_args=["-O3", "-ffp-contract=off", "-std=c++17"],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
