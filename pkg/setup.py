import os

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # the pure-Python kernels take over at import time
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "biasedclique._ckernels",
                [os.path.join("src", "biasedclique", "_ckernels.pyx")],
                language="c++",
                extra_compile_args=["-O3", "-std=c++11"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
