import os

import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python install; kernels fall back at import
    cythonize = None

extensions = []
if cythonize is not None and not os.environ.get("LATTICEKNOTS_NO_EXT"):
    extensions = cythonize(
        [
            Extension(
                "latticeknots._ckernel",
                ["src/latticeknots/_ckernel.pyx"],
                include_dirs=[np.get_include()],
                language="c++",
                extra_compile_args=["-O3", "-std=c++17"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=extensions)
