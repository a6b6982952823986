#!/usr/bin/env python
# -*- coding: utf-8 -*-
from setuptools import find_namespace_packages
from setuptools import setup


with open("README.rst") as readme_file:
    readme = readme_file.read()

with open("HISTORY.rst") as history_file:
    history = history_file.read()

requirements = [
    "appdirs",
    "Click>=7.0,<8.2",
    "click_plugins",
    "importlib_metadata<5",
    "numpy>=1.17",
    "pluggy",
    "pyyaml",
    "rich",
    "scipy>=1.4",
]

setup_requirements = ["setuptools"]

test_requirements = ["hypothesis", "pytest", "pytest-mock>=v3.1.0"]

extras_requirements = {
    "test": test_requirements,
}

setup(
    author="Silvio Tomatis",
    author_email="silviot@gmail.com",
    classifiers=[
        "Development Status :: 2 - Pre-Alpha",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: GNU General Public License v3 (GPLv3)",
        "Natural Language :: English",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    entry_points={"console_scripts": ["massive=stablewalk.massive.cli:massive"]},
    description="Massive sets of alpha-stable random walks on Z and Z^2",
    install_requires=requirements,
    license="GNU General Public License v3",
    long_description=readme + "\n\n" + history,
    include_package_data=True,
    keywords="stablewalk.massive",
    name="stablewalk.massive",
    packages=find_namespace_packages(include=["stablewalk.*"]),
    namespace_packages=["stablewalk"],
    python_requires=">=3.8",
    setup_requires=setup_requirements,
    test_suite="tests",
    tests_require=test_requirements,
    extras_require=extras_requirements,
    version="0.1.0",
    zip_safe=False,
)
