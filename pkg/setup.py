import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "dwdenoise.backends._convkern",
                [
                    "src/dwdenoise/backends/_convkern.pyx",
                    "src/dwdenoise/backends/convrows.c",
                ],
                include_dirs=[numpy.get_include(), "src/dwdenoise/backends"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3", "-march=native", "-fopenmp"],
                extra_link_args=["-fopenmp"],
                optional=True,
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
