"""Build script for the optional compiled kernel.

The package works without the extension (a pure-Python fallback is selected
at import time), so a failed build is downgraded to a warning.
"""

import warnings

from setuptools import setup

try:
    from Cython.Build import cythonize
    from setuptools import Extension

    extensions = cythonize(
        [Extension("rcskit._kernels._core", ["src/rcskit/_kernels/_core.pyx"])],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "initializedcheck": False,
        },
    )
except ImportError as exc:  # pragma: no cover - build environment dependent
    warnings.warn(f"Cython unavailable ({exc}); installing with pure-Python kernels only")
    extensions = []

setup(ext_modules=extensions)
