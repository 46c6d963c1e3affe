"""Build script for the optional compiled kernels.

Project metadata lives in pyproject.toml. When Cython is unavailable the
package installs without the extension and falls back to pure Python.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension
except ImportError:
    pass
else:
    ext_modules = cythonize(
        [Extension("imtw._ckernels", ["src/imtw/_ckernels.pyx"], extra_compile_args=["-O3"])],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
