from setuptools import setup, find_packages

setup(
    name="kf-modal-toolkit",
    version="1.0.0",
    description="Decision procedures, sequent calculi and Kripke fixed points for modal logics of KF truth",
    author="KF Modal Toolkit Developers",
    packages=find_packages(exclude=["tests"]),
    py_modules=["main"],
    install_requires=[
        "pydantic>=2.5.0",
        "numpy>=1.24.4",
        "pandas>=2.0.3",
        "pyparsing>=3.0.9",
    ],
    extras_require={
        "dev": [
            "pytest>=7.4.3",
            "hypothesis>=6.90.0",
            "black>=23.11.0",
            "flake8>=6.1.0",
        ],
    },
    python_requires=">=3.8",
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    entry_points={
        'console_scripts': [
            'kf-modal=main:main',
        ],
    },
)
