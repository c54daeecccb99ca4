#!/usr/bin/env python
# -*- coding: utf-8 -*-
import os
import re
from io import open

from setuptools import setup


def get_version(package):
    """
    Return package version as listed in `__version__` in `init.py`.
    """
    init_py = open(os.path.join(package, '__init__.py')).read()
    return re.search("__version__ = ['\"]([^'\"]+)['\"]", init_py).group(1)


version = get_version('subnyquist_doa')
with open('README.md') as f:
    long_description = f.read()


setup(
    name='subnyquist-doa',
    version=version,
    license='BSD',
    description=(
        'Joint carrier frequency and DOA estimation for a two-element '
        'array with multi-coset sub-Nyquist sampling'),
    long_description=long_description,
    long_description_content_type='text/markdown',
    keywords=('music doa direction-of-arrival sub-nyquist multi-coset '
              'spectrum-sensing'),
    author='subnyquist-doa developers',
    packages=['subnyquist_doa'],
    package_data={
        'subnyquist_doa': ['py.typed'],
    },
    include_package_data=True,
    zip_safe=False,
    python_requires='>=3.7',
    install_requires=[
        'Django>=2.2',
        'djangorestframework>=3.10',
        'numpy>=1.17',
        'scipy>=1.4',
    ],
    entry_points={
        'console_scripts': [
            'subnyquist-doa = subnyquist_doa.cli:main',
        ],
    },
    classifiers=[
        'Development Status :: 4 - Beta',
        'Environment :: Console',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: BSD License',
        'Operating System :: OS Independent',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3 :: Only',
        'Programming Language :: Python :: 3.7',
        'Programming Language :: Python :: 3.8',
        'Topic :: Scientific/Engineering',
    ]
)
