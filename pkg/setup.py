import os

from setuptools import setup

ext_modules = []
if os.environ.get("ROTORLIN_NO_EXT", "") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            Extension("rotorlin._kernels", ["src/rotorlin/_kernels.pyx"]),
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules)
