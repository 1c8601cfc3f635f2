"""Build script for the optional compiled modulus kernels.

The package works without the extension: kspacings.modulus falls back to
the pure-Python twin in _modcore_py if the build is unavailable.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("kspacings._modcore", ["src/kspacings/_modcore.pyx"])],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )

setup(ext_modules=ext_modules)
