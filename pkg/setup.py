from Cython.Build import cythonize
from setuptools import Extension, setup

ext = Extension(
    "algcensus._ckernel",
    ["src/algcensus/_ckernel.pyx"],
    extra_compile_args=["-O3"],
    optional=True,
)

setup(ext_modules=cythonize([ext], language_level=3, quiet=True))
