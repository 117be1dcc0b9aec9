#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""The setup script."""

from setuptools import setup, find_packages

with open('README.rst') as readme_file:
    readme = readme_file.read()

with open('HISTORY.rst') as history_file:
    history = history_file.read()


def parse_requirements(path):
    """Parse ``requirements.txt`` at ``path``."""
    requirements = []
    with open(path, 'rt') as reqs_f:
        for line in reqs_f:
            line = line.strip()
            if line and not line.startswith(('#', '-r')):
                requirements.append(line)
    return requirements


requirements = parse_requirements('requirements/base.txt')

setup_requirements = ['pytest-runner', ]

test_requirements = ['pytest', 'hypothesis', ]

setup(
    author="dmm_vm developers",
    classifiers=[
        'Development Status :: 2 - Pre-Alpha',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Natural Language :: English',
        'Programming Language :: Python :: 3.6',
    ],
    entry_points={
        'console_scripts': [
            'dmm-vm = dmm_vm.app:main',
        ],
    },
    description=("Virtual machine for dataflow matrix machines: networks "
                 "of neurons over heterogeneous streams that can rewrite "
                 "their own connectivity."),
    install_requires=requirements,
    license="MIT license",
    long_description=readme + '\n\n' + history,
    include_package_data=True,
    keywords='dmm_vm',
    name='dmm_vm',
    packages=find_packages(include=['dmm_vm']),
    setup_requires=setup_requirements,
    test_suite='tests',
    tests_require=test_requirements,
    version='0.1.0',
    zip_safe=False,
)
