import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("ECCENSUS_PURE"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("eccensus.kernels._fast", ["src/eccensus/kernels/_fast.pyx"])],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
                "initializedcheck": False,
            },
        )
    except ImportError:
        # No Cython available: install the pure-Python package, the numpy
        # fallback backend is selected automatically at import time.
        ext_modules = []

setup(ext_modules=ext_modules)
