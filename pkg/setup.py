from setuptools import setup

# Installs both packages from the repository root; each also has its own setup.py
setup(
    name='statfidelity-suite',
    version='0.1',
    package_dir={
        'statfidelity_common': 'statfidelity_common/statfidelity_common',
        'statfidelity': 'statfidelity/statfidelity',
    },
    packages=[
        'statfidelity_common',
        'statfidelity_common.models',
        'statfidelity_common.utils',
        'statfidelity',
        'statfidelity.kernel',
        'statfidelity.extract',
        'statfidelity.check',
        'statfidelity.analysis',
        'statfidelity.regression',
        'statfidelity.cli',
    ],
    include_package_data=True,
    package_data={
        'statfidelity_common': ['*.yaml'],
    },
    install_requires=[
        'numpy',
        'pandas',
        'scipy',
        'matplotlib',
        'tqdm',
        'loguru',
        'PyYAML>=6.0',
        'pydantic>=2.0',
    ],
    python_requires='>=3.9',
    entry_points={
        'console_scripts': [
            'statfidelity = statfidelity.__main__:main',
        ],
    },
)
