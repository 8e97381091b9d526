from setuptools import setup, find_packages

setup(
    name='packbound',
    version='0.1',
    description=(
        'Gilbert-Varshamov and Hamming bounds for packings on complex '
        'Stiefel and Grassmann manifolds'
    ),
    packages=find_packages(exclude=['tests']),
    python_requires='>=3.8',
    install_requires=[
        'docopt',
        'numpy>=1.22',
        'scipy>=1.4',
    ],
    extras_require={
        'test': ['pytest'],
    },
    entry_points={
        'console_scripts': [
            'packbound = packbound:main',
        ],
    },
)
