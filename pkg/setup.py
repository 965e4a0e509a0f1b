"""Build script for the optional compiled simplex pivot kernel.

The package is pure Python except for ``gmprelax.solvers._simplex_cy``,
a Cython translation of the revised-simplex pivot loop.  If the
extension cannot be built the package still works: the solver falls
back to the NumPy implementation of the same kernel at import time.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        "src/gmprelax/solvers/_simplex_cy.pyx",
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    print("Cython not available; skipping compiled simplex kernel")

setup(ext_modules=ext_modules)
