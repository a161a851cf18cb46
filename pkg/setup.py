"""Build script for the optional compiled kernels.

The package is pure Python except for droplets._speedups, a Cython module
holding the per-pixel iteration loops (Julia basin classification and the
batched Newton inversion used by the Schwarz rank renderer).  If Cython or
a C compiler is unavailable the build falls back to the pure-numpy kernels
selected at import time in droplets.kernels.
"""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("DROPLETS_NO_EXT") != "1":
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "droplets._speedups",
                    ["src/droplets/_speedups.pyx"],
                    include_dirs=[numpy.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
