"""Build script.

The package is pure Python; an optional Cython extension accelerates the
integer lattice kernels (point enumeration, monomial membership).  When
Cython or a C compiler is unavailable the build silently falls back to the
pure-Python kernel module, which implements the identical interface.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/fanokit/_kernel.pyx"],
        compiler_directives={"language_level": 3},
    )
except Exception:
    ext_modules = []

setup(ext_modules=ext_modules)
