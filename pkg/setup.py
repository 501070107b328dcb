from setuptools import setup

setup(
    name="coxfix",
    version="0.1.0",
    description="Coxeter groups, Bruhat order, twisted involutions and Z2 poset topology, machine-checked",
    py_modules=["errors", "coxeter", "catalog", "orders", "topology", "twisted", "folding", "suites", "main"],
    python_requires=">=3.10",
    install_requires=["numpy>=1.21.0", "pandas>=1.5.0", "pydantic>=2.0", "networkx>=2.8"],
    extras_require={"test": ["pytest>=7.0", "hypothesis>=6.0"]},
    entry_points={"console_scripts": ["coxfix=main:main"]},
)
