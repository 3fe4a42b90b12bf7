from setuptools import setup, find_packages

setup(
    name="gsorlab",
    version="0.1.0",
    description="Three-parameter GSOR iteration and preconditioning for double saddle-point systems.",
    packages=find_packages(exclude=["tests", "tests.*"]),
    package_data={"gsorlab.experiments": ["sample_plans/*.yaml"]},
    install_requires=[
        "numpy",
        "scipy",
        "python-dotenv",
        "pandas",
        "pyyaml",
    ],
    entry_points={"console_scripts": ["gsorlab = gsorlab.cli:main"]},
    python_requires=">=3.10",
)
