import os

from setuptools import Extension, setup

# The compiled kernels are an optimization, not a requirement: if Cython or a
# C toolchain is missing the install proceeds and charsum falls back to the
# numpy implementations at import time.
ext_modules = []
if os.environ.get("CHARSUM_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "charsum._kernels",
                    ["src/charsum/_kernels.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
                "initializedcheck": False,
            },
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
