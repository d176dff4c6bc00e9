#!/usr/bin/env python3
"""
Setup script for chsh-toolkit
"""
from setuptools import setup, find_packages

# Read the README file
def read_readme():
    with open("README.md", "r", encoding="utf-8") as fh:
        return fh.read()

# Read requirements
def read_requirements():
    with open("requirements.txt", "r", encoding="utf-8") as fh:
        return [line.strip() for line in fh if line.strip() and not line.startswith("#")]

setup(
    name="chsh-toolkit",
    version="1.0.0",
    author="chsh-toolkit developers",
    description="Entanglement, maximal CHSH violation and local-filtering normal forms of two-qubit states",
    long_description=read_readme(),
    long_description_content_type="text/markdown",
    packages=find_packages(include=["chsh_toolkit", "chsh_toolkit.*"]),
    python_requires=">=3.9",
    install_requires=read_requirements(),
    extras_require={
        "dev": ["pytest>=7.0.0"],
    },
    entry_points={
        "console_scripts": [
            "chsh-toolkit=chsh_toolkit.app:main",
        ],
    },
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Topic :: Scientific/Engineering :: Physics",
    ],
    include_package_data=True,
    package_data={
        "chsh_toolkit": ["models/*.json"],
    },
)
