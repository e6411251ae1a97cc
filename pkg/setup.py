"""Build script for the optional compiled search kernel.

The package is fully functional without the extension: ``arrows.kernel``
falls back to the pure-Python implementation when ``arrows._kernel_c`` is
missing, so any build failure here is downgraded to a warning.
"""

import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        print("arrows-solver: Cython not available, skipping compiled kernel", file=sys.stderr)
        return []
    ext = Extension(
        "arrows._kernel_c",
        ["src/arrows/_kernel_c.pyx"],
        language="c++",
        extra_compile_args=["-O2", "-std=c++11"],
    )
    return cythonize([ext], language_level=3)


class OptionalBuildExt(build_ext):
    """Build the kernel if possible; never fail the install over it."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            print(f"arrows-solver: compiled kernel skipped ({exc})", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"arrows-solver: building {ext.name} failed ({exc}); "
                  "falling back to the pure-Python kernel", file=sys.stderr)


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
