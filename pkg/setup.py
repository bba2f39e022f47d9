"""Build script.

The compiled kernel extension is optional: if Cython is unavailable or the
build is vetoed via MOMENTFLOW_PURE=1, the package installs pure Python and
falls back to the NumPy kernels at import time.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("MOMENTFLOW_PURE", "") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "momentflow._kernels_c",
                    ["src/momentflow/_kernels_c.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
