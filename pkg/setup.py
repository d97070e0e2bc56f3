import setuptools

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setuptools.setup(
    name="pymiblp",
    version="1.0.0",
    description="Branch-and-cut solver for optimistic mixed integer bilevel linear programs.",
    long_description=long_description,
    long_description_content_type="text/markdown",
    keywords=['bilevel optimization', 'MIBLP', 'branch and cut', 'interdiction'],
    packages=setuptools.find_packages(exclude=["tests"]),
    install_requires=['numpy', 'scipy'],
    entry_points={
        "console_scripts": ["miblp=miblp.cli:main"],
    },
    classifiers=[
        "Development Status :: 4 - Beta",
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    python_requires='>=3.8',
)
