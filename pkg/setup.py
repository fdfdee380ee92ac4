from setuptools import setup

try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [Extension("finmode._kernels._ckernels", ["src/finmode/_kernels/_ckernels.pyx"],
                   extra_compile_args=["-O3"], optional=True)],
        compiler_directives={"language_level": 3},
    )
except ImportError:  # no Cython: the NumPy fallback is used
    ext_modules = []

setup(ext_modules=ext_modules)
