from setuptools import setup

__version__ = "1.0.20261018120000"

setup(
    name="llgpq",
    version=__version__,
    packages=[
        "llgpq",
        "llgpq.util",
        "llgpq.analysis",
        "llgpq.study",
        "llgpq.cli",
    ],
    url="https://github.com/qdbp/llgpq.git",
    license="",
    author="Evgeny Naumov",
    author_email="",
    description="pivotal-quantity reliability inference for log-logistic data",
    entry_points={"console_scripts": ["llgpq = llgpq.cli:main"]},
)
