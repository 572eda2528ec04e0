"""Build script for the compiled kernel extension.

The package works without it (a pure-numpy fallback is selected at
import time); building the extension just makes the chart/metric
kernels fast.
"""

from Cython.Build import cythonize
from setuptools import setup

setup(ext_modules=cythonize("src/nks3x3/_core/_fast.pyx",
                            compiler_directives={"language_level": "3"}))
