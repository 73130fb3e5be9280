import os

from setuptools import setup

ext_modules = []
if os.environ.get("CNCERT_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/cncert/_termops_c.pyx"],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        # No Cython: install with the pure-Python kernel only.
        pass

setup(ext_modules=ext_modules)
