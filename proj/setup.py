import glob
import os

from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

include_dirs = ["include", "vendor"]
for eigen in (os.environ.get("EIGEN3_INCLUDE_DIR"), "/usr/include/eigen3", "/usr/local/include/eigen3"):
    if eigen and os.path.isdir(eigen):
        include_dirs.append(eigen)
        break

ext = Pybind11Extension(
    "bingham2d._core",
    sorted(glob.glob("src/*.cpp")) + ["python/module.cpp"],
    include_dirs=include_dirs,
    cxx_std=20,
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
