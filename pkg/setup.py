#!/usr/bin/env python3
# Copyright 2026 The wg-fem Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0+

import yaml

from setuptools import setup
from setuptools import find_packages


with open('project.yml') as file:
    metadata = yaml.safe_load(file)

with open('requirements.txt') as file:
    requirements = [line.strip() for line in file if line.strip() and not line.startswith('#')]

setup(
    name=metadata['name'],
    version=metadata['version'],
    description=metadata['display_name'],
    author=metadata['author'],
    url=metadata['homepage'],

    packages=find_packages(exclude=['tests']),
    include_package_data=True,
    install_requires=requirements,
    python_requires='>=3.9',
    entry_points={
        'console_scripts': [
            'wg = wg_fem.cli:main',
        ]
    }
)
