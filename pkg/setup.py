"""Build script: compiles the optional C kernel.

The package works without the extension (a pure-Python kernel is selected
at import time), so the build is marked optional and a compile failure
degrades to the fallback instead of breaking the install.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "treegrp._ckernel",
                ["src/treegrp/_ckernel.pyx"],
                optional=True,
            )
        ],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
else:
    ext_modules = []

setup(ext_modules=ext_modules)
