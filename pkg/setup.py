import os

from setuptools import Extension, setup

# The compiled kernel is optional: the package falls back to the pure-Python
# implementation in cob3._kernel_py when the extension is absent or when
# COB3_PURE_KERNEL=1 is set at build time.
extensions = []
pyx = os.path.join("src", "cob3", "_kernel_cy.pyx")
if os.environ.get("COB3_PURE_KERNEL") != "1" and os.path.exists(pyx):
    try:
        from Cython.Build import cythonize

        extensions = cythonize(
            [Extension("cob3._kernel_cy", [pyx])],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        extensions = []

setup(ext_modules=extensions)
