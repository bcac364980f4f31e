"""Build script: compiles the optional Cython kernel extension.

The package works without the extension (a NumPy fallback is selected at
import time); the extension is a fused-loop speedup for the pairwise
distortion kernels.  Build in place with:

    python setup.py build_ext --inplace
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Let installation proceed if the extension fails to compile."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # pragma: no cover - build environment specific
            print(f"warning: kernel extension not built ({exc}); "
                  f"pure-NumPy fallback will be used")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # pragma: no cover
            print(f"warning: building {ext.name} failed ({exc}); "
                  f"pure-NumPy fallback will be used")


def extensions():
    try:
        import numpy as np
        from Cython.Build import cythonize
    except ImportError:  # pragma: no cover
        return []
    omp = os.environ.get("SPHEREGH_NO_OPENMP") is None
    compile_args = ["-O3"]
    link_args = []
    if omp:
        compile_args.append("-fopenmp")
        link_args.append("-fopenmp")
    ext = Extension(
        "spheregh.kernels._core",
        ["src/spheregh/kernels/_core.pyx"],
        include_dirs=[np.get_include()],
        extra_compile_args=compile_args,
        extra_link_args=link_args,
    )
    return cythonize([ext], language_level=3)


setup(ext_modules=extensions(), cmdclass={"build_ext": optional_build_ext})
