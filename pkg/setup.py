"""Build the optional compiled kernels.

If Cython or a C compiler is missing the package installs without the
extension and falls back to the numpy kernels at import time.
"""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("ACTIFLUX_NO_EXTENSION", "") not in ("1", "true", "yes"):
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [Extension("actiflux._kernels", ["src/actiflux/_kernels.pyx"],
                       include_dirs=[numpy.get_include()],
                       extra_compile_args=["-O3"])],
            compiler_directives={"language_level": "3"})

setup(ext_modules=ext_modules)
