"""Build script for the optional compiled kernel.

The package works without the extension: `constel.kernels` falls back to the
NumPy implementations when `constel._kernels` is missing, so a plain install
on a box without Cython or a C compiler still yields a working package.
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
                "constel._kernels",
                ["src/constel/_kernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
