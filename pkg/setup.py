"""Build the optional compiled sweep kernel.

The package works without it: ``echotrack.community.kernels`` falls back to the
pure-Python sweep when the extension is not importable.
"""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("ECHOTRACK_NO_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "echotrack.community._sweep",
                    ["src/echotrack/community/_sweep.pyx"],
                    include_dirs=[np.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    # bitwise agreement with the Python fallback needs no FMA contraction
                    extra_compile_args=["-O3", "-ffp-contract=off"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
