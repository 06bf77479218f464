import re
import setuptools


classifiers = [
    "Development Status :: 2 - Pre-Alpha",
    "Intended Audience :: Education",
    "Intended Audience :: Science/Research",
    "License :: OSI Approved :: Apache Software License",
    "Natural Language :: English",
    "Operating System :: OS Independent",
    "Programming Language :: Python",
    "Programming Language :: Python :: 3",
    "Programming Language :: Python :: 3 :: Only",
    "Programming Language :: Python :: 3.9",
    "Programming Language :: Python :: 3.10",
    "Programming Language :: Python :: 3.11",
    "Programming Language :: Python :: Implementation :: CPython",
    "Topic :: Education :: Computer Aided Instruction (CAI)",
    "Topic :: Scientific/Engineering :: Information Analysis",
    "Topic :: Software Development :: Libraries",
    "Topic :: Software Development :: Libraries :: Python Modules",
]

install_requires = [
    "numpy>=1.21",
    "pandas>=1.5",
    "scikit-learn>=1.0",
    "scipy>=1.7",
]

extras_require = {
    "docs": [
        "sphinx",
        "sphinxcontrib_trio",
        "sphinx-rtd-theme",
    ],
    "test": [
        "pytest",
    ],
}

entry_points = {
    "console_scripts": [
        "ckspace = ckspace.cli:main",
    ],
}

package_data = {
    "ckspace": ["data/*.json"],
}

packages = [
    "ckspace",
    "ckspace.config",
    "ckspace.engagement",
    "ckspace.events",
    "ckspace.knowledge",
    "ckspace.pedagogy",
    "ckspace.reports",
    "ckspace.screener",
    "ckspace.simulation",
    "ckspace.spelling",
    "ckspace.temporal",
    "ckspace.traits",
    "ckspace.utils",
]

_version_regex = r"^version = ('|\")((?:[0-9]+\.)*[0-9]+(?:\.?([a-z]+)(?:\.?[0-9])?)?)\1$"

with open("ckspace/__init__.py") as stream:
    match = re.search(_version_regex, stream.read(), re.MULTILINE)

version = match.group(2)

if match.group(3) is not None:
    try:
        import subprocess

        process = subprocess.Popen(["git", "rev-list", "--count", "HEAD"], stdout=subprocess.PIPE)
        out, _ = process.communicate()
        if out:
            version += out.decode("utf-8").strip()

        process = subprocess.Popen(["git", "rev-parse", "--short", "HEAD"], stdout=subprocess.PIPE)
        out, _ = process.communicate()
        if out:
            version += "+g" + out.decode("utf-8").strip()
    except (Exception) as e:
        pass


setuptools.setup(
    classifiers=classifiers,
    description="Student modelling for adaptive learning: knowledge tracing, error models, engagement, clustering and screening.",
    entry_points=entry_points,
    extras_require=extras_require,
    install_requires=install_requires,
    license="Apache Software License",
    name="ckspace",
    package_data=package_data,
    packages=packages,
    python_requires=">=3.9.0",
    version=version,
)
