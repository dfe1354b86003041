import os

from setuptools import setup

ext_modules = []
if os.environ.get("SYMDYN_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
        import numpy as np
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "symdyn._kernels._ckernels",
                    ["src/symdyn/_kernels/_ckernels.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        # no Cython: the pure-Python kernels are used at import time
        ext_modules = []

setup(ext_modules=ext_modules)
