"""Build the optional compiled kernels; the package still works without them."""
import sys

from setuptools import setup

ext_modules = []
try:
    import numpy  # noqa: F401
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "rainbowmatch._kernels",
                ["src/rainbowmatch/_kernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:  # no Cython / compiler: pure-Python fallback only
    print(f"rainbowmatch: skipping compiled kernels ({exc})", file=sys.stderr)

setup(ext_modules=ext_modules)
