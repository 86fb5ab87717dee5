"""Build script: compiles the optional Cython search kernel.

The package works without the extension (a pure-Python kernel is selected at
import time), so any build failure here degrades to the slow lane instead of
breaking the install.
"""

import os
import sys

from setuptools import Extension, setup


def _extensions():
    if os.environ.get("ZEROSUM_SKIP_EXT"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        print("zerosum: Cython not available, building without compiled kernel",
              file=sys.stderr)
        return []
    ext = Extension(
        "zerosum._kernel",
        ["src/zerosum/_kernel.pyx"],
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=_extensions())
