"""Builds the optional compiled kernel extension.

The package works without it (a pure-Python kernel backend is selected at
import time), but the compiled core is what makes full planning runs fast.
Floating-point contraction is disabled so that both backends produce
bit-identical results.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "cellplan._kernel._core",
                sources=["src/cellplan/_kernel/_core.pyx"],
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
