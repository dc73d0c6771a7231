"""Setuptools shim that drives the CMake build for the `_core` extension.

scikit-build-core is the intended backend (see pyproject.toml), but when it is
unavailable this fallback lets `pip install -e . --no-build-isolation` work with
plain setuptools.
"""

import pathlib
import shutil
import subprocess
import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext):
        source_dir = pathlib.Path(__file__).parent.resolve()
        build_dir = pathlib.Path(self.build_temp).resolve()
        build_dir.mkdir(parents=True, exist_ok=True)
        subprocess.run(
            [
                "cmake",
                "-S", str(source_dir),
                "-B", str(build_dir),
                "-DCMAKE_BUILD_TYPE=Release",
                "-DFLSPEC_BUILD_PYTHON=ON",
                "-DFLSPEC_BUILD_TESTS=OFF",
                f"-DPYTHON_EXECUTABLE={sys.executable}",
            ],
            check=True,
        )
        subprocess.run(
            ["cmake", "--build", str(build_dir), "--target", "_core"],
            check=True,
        )
        built = next((build_dir / "python" / "flspectrum").glob("_core*.so"))
        dest = pathlib.Path(self.get_ext_fullpath(ext.name))
        dest.parent.mkdir(parents=True, exist_ok=True)
        shutil.copy2(built, dest)


setup(
    packages=["flspectrum"],
    package_dir={"": "python"},
    ext_modules=[CMakeExtension("flspectrum._core")],
    cmdclass={"build_ext": CMakeBuild},
)
