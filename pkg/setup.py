"""Build script: compiles the optional GF(2) kernel extension.

The package is fully functional without the extension (a pure-Python
fallback is selected at import time), so any failure to build it is
downgraded to a warning rather than aborting the install.
"""

import warnings

from setuptools import setup
from setuptools.command.build_ext import build_ext


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        warnings.warn("Cython not available; skipping the compiled GF(2) kernel")
        return []
    from setuptools import Extension

    ext = Extension(
        "annsss.gf2._speed",
        sources=["src/annsss/gf2/_speed.pyx"],
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], language_level=3)


class optional_build_ext(build_ext):
    """Build extensions, tolerating compiler failures."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # pragma: no cover
            warnings.warn(f"compiled GF(2) kernel skipped: {exc}")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # pragma: no cover
            warnings.warn(f"compiled GF(2) kernel skipped: {exc}")


setup(ext_modules=extensions(), cmdclass={"build_ext": optional_build_ext})
