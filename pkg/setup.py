from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    try:
        ext_modules = cythonize(
            [
                Extension(
                    "concrete_sheaves._ckernels",
                    ["src/concrete_sheaves/_ckernels.pyx"],
                    extra_compile_args=["-O3"],
                    optional=True,
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except Exception as exc:  # fall back to the pure-Python kernels
        print(f"warning: not building the compiled kernels: {exc}")
        ext_modules = []

setup(ext_modules=ext_modules)
