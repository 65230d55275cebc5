from setuptools import Extension, setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "grasschannel._kernels._contact_cy",
                ["src/grasschannel/_kernels/_contact_cy.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                optional=True,
            )
        ],
        language_level=3,
    )
except ImportError:
    # Pure-Python fallback kernel is selected at import time.
    pass

setup(ext_modules=ext_modules)
