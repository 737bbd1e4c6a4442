import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

# The compiled kernels are an optimization, not a requirement: voikit falls
# back to the numpy implementations in voikit._kernels.numpy_backend when the
# extension is absent (see benchmarks/bench_kernels.py for the comparison).
extensions = [
    Extension(
        "voikit._kernels._core",
        ["src/voikit/_kernels/_core.pyx"],
        include_dirs=[np.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "language_level": "3",
        },
    )
)
