import os

from setuptools import setup

ext_modules = []
if os.environ.get("TOMOCAUSAL_NO_EXT", "") in ("", "0"):
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "tomocausal._kernels",
                    ["src/tomocausal/_kernels.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        # no Cython at build time: the package runs on the pure-Python kernels
        ext_modules = []

setup(ext_modules=ext_modules)
