from setuptools import setup

try:
    from Cython.Build import cythonize
except ImportError:  # fall back to the pure-Python kernels
    ext_modules = []
else:
    ext_modules = cythonize(
        ["src/maxentstate/_ckernels.pyx"],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
