"""Build the optional Cython kernels; the package falls back to numpy when they are absent."""
import os

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # no compiler, no Cython, ...
            print(f"warning: compiled kernels not built ({exc}); using numpy fallback")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: failed to build {ext.name} ({exc}); using numpy fallback")


def extensions():
    if os.environ.get("LINDECOMP_NO_EXT"):
        return []
    try:
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        return []
    return cythonize(
        [Extension("lindecomp._kernels", ["src/lindecomp/_kernels.pyx"],
                   define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")])],
        compiler_directives={"language_level": 3, "boundscheck": False, "wraparound": False},
    )


exts = extensions()
if exts:
    import numpy

    for ext in exts:
        ext.include_dirs.append(numpy.get_include())

setup(ext_modules=exts, cmdclass={"build_ext": OptionalBuildExt})
