"""Build the optional compiled core; the package works without it."""

import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("FRACOPS_NO_EXTENSION"):
    try:
        import numpy as np
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "fracops._kernels",
                    ["src/fracops/_kernels.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
