"""Build script for the optional compiled kernels.

The package works without the extension (a pure-numpy fallback is selected
at import time).  Set ISACSIM_NO_EXT=1 to skip the Cython build entirely,
e.g. on machines without a C compiler.
"""

import os

from setuptools import Extension, setup

extensions = []
if not os.environ.get("ISACSIM_NO_EXT"):
    try:
        from Cython.Build import cythonize

        extensions = cythonize(
            [
                Extension(
                    "isacsim._kernels_c",
                    ["src/isacsim/_kernels_c.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        extensions = []

setup(ext_modules=extensions)
