"""Build script for the optional compiled kernel extension.

The package is fully functional without the extension (the numpy fallback
in ``aqogap._kernels.pykern`` is selected at import time), so compilation
failures are tolerated unless AQOGAP_REQUIRE_EXT=1 is set.  Set
AQOGAP_NO_EXT=1 to skip the extension build entirely.
"""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("AQOGAP_NO_EXT", "") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext = Extension(
            "aqogap._kernels._ckern",
            sources=["src/aqogap/_kernels/_ckern.pyx"],
            include_dirs=[np.get_include()],
            extra_compile_args=["-O3"],
            define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        )
        ext_modules = cythonize([ext], language_level=3)
    except Exception:
        if os.environ.get("AQOGAP_REQUIRE_EXT", "") == "1":
            raise
        ext_modules = []

setup(ext_modules=ext_modules)
