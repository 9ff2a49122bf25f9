"""Build script.  The compiled kernel extension is optional: if Cython or a
C compiler is missing the package installs anyway and falls back to the
pure numpy kernels at import time."""

from setuptools import setup, Extension
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Give up on the extension instead of failing the whole install."""

    def run(self):
        try:
            build_ext.run(self)
        except Exception as exc:  # noqa: BLE001
            print(f"warning: compiled kernels skipped ({exc}); "
                  "pure-python backend will be used")

    def build_extension(self, ext):
        try:
            build_ext.build_extension(self, ext)
        except Exception as exc:  # noqa: BLE001
            print(f"warning: building {ext.name} failed ({exc}); "
                  "pure-python backend will be used")


def extensions():
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "qdho._kernels",
        sources=["src/qdho/_kernels.pyx"],
        include_dirs=[numpy.get_include()],
        extra_compile_args=["-O3"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(
    ext_modules=extensions(),
    cmdclass={"build_ext": OptionalBuildExt},
)
