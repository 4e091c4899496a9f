import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "bubbleflow.kernels._corekernels",
                ["src/bubbleflow/kernels/_corekernels.pyx"],
                include_dirs=[numpy.get_include()],
                # fast-math enables the vectorized libm (pow dominates the
                # per-cell cost); backend parity is pinned by tests
                extra_compile_args=["-O3", "-march=native", "-ffast-math"],
                extra_link_args=["-lmvec", "-lm"],
            )
        ],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
else:
    # package still works through the pure numpy backend
    ext_modules = []

setup(ext_modules=ext_modules)
