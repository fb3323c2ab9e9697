import os

from setuptools import setup
from setuptools.command.build_py import build_py

with open("README.md", "rt") as fh:
    long_description = fh.read()

with open("requirements.txt", "rt") as f:
    requirements = [r.strip() for r in f.readlines()]


class CoverageCommand(build_py):
    """Run all unittests and generate a coverage report."""
    def run(self):
        os.system("python3 -m coverage run --omit='*/site-packages/*,*tests.py,setup.py,*__init__.py' "
                  "-m unittest discover -p '*tests.py' "
                  "&& python3 -m coverage html --include=*.py "
                  "&& open htmlcov/index.html")


setup(
    name='polyjacobi_analysis',
    version="0.1.0",
    description="Eigenvalue bounds for higher-order discrete Laplacians and polydiagonal Jacobi-type matrices",
    install_requires=requirements,
    cmdclass={
        'coverage': CoverageCommand,
    },
    entry_points = {
        'console_scripts': [
            'polyjacobi = polyjacobi_analysis.polyjacobi:main',
            'polyjacobi_stencil = polyjacobi_analysis.print_laplacian_stencil:main',
            'polyjacobi_symbol = polyjacobi_analysis.compute_symbol_table:main',
            'polyjacobi_spectrum = polyjacobi_analysis.compute_discrete_spectrum:main',
            'polyjacobi_verify = polyjacobi_analysis.verify_spectral_bounds:main',
            'polyjacobi_sweep = polyjacobi_analysis.sweep_spectral_bounds:main',
            'polyjacobi_selftest = polyjacobi_analysis.run_selftest:main',
        ],
    },
    long_description_content_type="text/markdown",
    long_description=long_description,
    packages=["polyjacobi_analysis", "polyjacobi_analysis.utils"],
    include_package_data=True,
    python_requires=">=3.8",
    license="MIT",
    keywords='',
    classifiers=[
        'Development Status :: 4 - Beta',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Natural Language :: English',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: Implementation :: CPython',
    ],
)
