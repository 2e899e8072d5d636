"""Build script: compiles the optional fast kernel extension.

The package works without the extension (a pure-Python kernel module is
selected at import time), so any compiler or Cython failure downgrades to a
warning instead of breaking the install. Set HOVERNAV_PURE_PYTHON=1 to skip
the extension build entirely.

-ffp-contract=off matters: the compiled kernels must produce bit-identical
doubles to the pure-Python reference, and fused multiply-add would break
that on FMA-capable hardware.
"""

import os
import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            print(f"warning: skipping fast kernels ({exc}); using pure-Python fallback",
                  file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: failed to build {ext.name} ({exc}); "
                  "using pure-Python fallback", file=sys.stderr)


def extensions():
    if os.environ.get("HOVERNAV_PURE_PYTHON"):
        return []
    try:
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        print("warning: Cython not available; using pure-Python kernels",
              file=sys.stderr)
        return []
    compile_args = []
    if not sys.platform.startswith("win"):
        compile_args = ["-O2", "-ffp-contract=off"]
    ext = Extension(
        "hovernav._kernels._native",
        ["src/hovernav/_kernels/_native.pyx"],
        extra_compile_args=compile_args,
    )
    return cythonize([ext], language_level=3)


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
