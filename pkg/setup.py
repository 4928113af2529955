"""Build the optional Cython kernels; the package falls back to numpy if they are missing."""
import os

import numpy as np
from setuptools import setup
from setuptools.extension import Extension

ext_modules = []
if os.environ.get("PKREPS_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext = Extension(
            "pkreps._core",
            ["src/pkreps/_core.pyx"],
            include_dirs=[np.get_include()],
            extra_compile_args=["-O3"],
            define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            optional=True,
        )
        ext_modules = cythonize(
            [ext],
            compiler_directives={"language_level": "3", "boundscheck": False, "wraparound": False, "cdivision": True},
        )

setup(ext_modules=ext_modules)
