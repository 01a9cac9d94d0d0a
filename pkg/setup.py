from setuptools import setup, find_packages

setup(
    name="glt-spectra",
    version="0.1.0",
    packages=find_packages(exclude=["tests", "tests.*"]),
    python_requires=">=3.9",
    install_requires=[
        "numpy",
        "scipy>=1.8",
        "pandas",
        "pydantic>=2",
    ],
    extras_require={
        "dev": [
            "pytest",
            "pytest-cov",
        ],
    },
    entry_points={
        "console_scripts": [
            # spectra, rearrangements, tables and figure data as CSV
            "glt-spectra = glt_spectra.cli:main",
        ],
    },
)
