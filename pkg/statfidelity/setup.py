from setuptools import setup, find_packages

setup(
    name='statfidelity',
    version='0.1',
    packages=find_packages(exclude=['tests']),
    include_package_data=True,
    install_requires=[
        'numpy',
        'pandas',
        'scipy',
        'matplotlib',
        'tqdm',
        'loguru',
        'pydantic>=2.0',
        'statfidelity_common',
    ],
    entry_points={
        'console_scripts': [
            'statfidelity = statfidelity.__main__:main',
        ],
    },
)
