from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize
except ImportError:
    # Pure-Python fallback kernels are selected at import time.
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "driftcache._kernels_ext",
                ["src/driftcache/_kernels_ext.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level="3",
    )

setup(ext_modules=ext_modules)
