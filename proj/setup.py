import shutil
import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext):
        source_dir = Path(__file__).resolve().parent
        build_dir = Path(self.build_temp).resolve()
        build_dir.mkdir(parents=True, exist_ok=True)

        out_path = Path(self.get_ext_fullpath(ext.name)).resolve()
        out_path.parent.mkdir(parents=True, exist_ok=True)

        cfg = "Debug" if self.debug else "Release"
        configure = [
            "cmake",
            "-S", str(source_dir),
            "-B", str(build_dir),
            f"-DCMAKE_BUILD_TYPE={cfg}",
            "-DSNF_BUILD_TESTS=OFF",
            "-DSNF_BUILD_PYTHON=ON",
            f"-DPYTHON_EXECUTABLE={sys.executable}",
        ]
        subprocess.run(configure, check=True)
        subprocess.run(
            ["cmake", "--build", str(build_dir), "--target", "snfsim", "-j"],
            check=True,
        )

        built = list(build_dir.glob("snfsim*.so")) + list(
            build_dir.glob("**/snfsim*.so")
        )
        if not built:
            raise RuntimeError("could not locate built snfsim module")
        shutil.copy2(built[0], out_path)


setup(
    ext_modules=[CMakeExtension("snfsim")],
    cmdclass={"build_ext": CMakeBuild},
)
