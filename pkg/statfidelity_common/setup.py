from setuptools import setup, find_packages

setup(
    name="statfidelity_common",
    version="0.1.0",
    packages=find_packages(exclude=["tests"]),
    include_package_data=True,
    package_data={
        'statfidelity_common': [
            'models/**/*',
            '*.yaml',
        ],
    },
    install_requires=[
        "loguru>=0.6.0",
        "PyYAML>=6.0",
        "pydantic>=2.0",
    ],
    python_requires=">=3.9",
)
