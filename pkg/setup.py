"""Build script: compiles the Cython fast path when possible.

The package works without the extension (a pure-numpy twin of every kernel
is selected at import time), so a failed compile downgrades to a warning
instead of breaking the install.
"""

import warnings

from setuptools import setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "gikin._kernels",
                ["src/gikin/_kernels.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:  # pragma: no cover - environment without a toolchain
    warnings.warn(f"building without compiled kernels: {exc}")

setup(ext_modules=ext_modules)
