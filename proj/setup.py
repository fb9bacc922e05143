"""Build the curvop python package by driving the CMake project (the
pybind11 cmake_example pattern). Use `pip install -e . --no-build-isolation`
for development installs."""

import os
import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name, sourcedir=""):
        super().__init__(name, sources=[])
        self.sourcedir = str(Path(sourcedir).resolve())


class CMakeBuild(build_ext):
    def build_extension(self, ext):
        extdir = Path(self.get_ext_fullpath(ext.name)).parent.resolve()
        build_temp = Path(self.build_temp) / ext.name
        build_temp.mkdir(parents=True, exist_ok=True)
        cfg = "Release"
        cmake_args = [
            f"-DCMAKE_BUILD_TYPE={cfg}",
            f"-DPython3_EXECUTABLE={sys.executable}",
        ]
        subprocess.run(["cmake", ext.sourcedir, *cmake_args], cwd=build_temp, check=True)
        subprocess.run(
            ["cmake", "--build", ".", "--target", "_core", "-j", str(os.cpu_count() or 2)],
            cwd=build_temp,
            check=True,
        )
        built = build_temp / "python" / "curvop"
        extdir.mkdir(parents=True, exist_ok=True)
        for so in built.glob("_core*.so"):
            self.copy_file(str(so), str(extdir / so.name))


setup(
    ext_modules=[CMakeExtension("curvop._core")],
    cmdclass={"build_ext": CMakeBuild},
)
