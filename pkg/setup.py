import os

from setuptools import setup

ext_modules = []
if os.environ.get("QDARWIN_NO_EXT", "") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "qdarwin._kernels",
                    ["src/qdarwin/_kernels.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        # no Cython/numpy at build time: the pure-Python kernels are used
        ext_modules = []

setup(ext_modules=ext_modules)
