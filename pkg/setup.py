# ----------------------------------------------------------------------------
# Distributed under the terms of the Modified BSD License.
# ----------------------------------------------------------------------------

from setuptools import setup, find_packages

from bitparticle_sim import __version__

setup(
    name="bitparticle-sim",
    packages=find_packages(exclude=['examples', 'examples.*']),
    version=__version__,
    description="Bit-true and cycle-accurate simulation of a dual-factor "
                "bit-sparsity MAC unit and a quasi-synchronous MAC array",
    license='BSD-3-Clause',
    python_requires='>=3.8',
    install_requires=[
        'pyyaml',
        'pandas',
        'numpy',
        'jsonschema',
    ],
    package_data={'bitparticle_sim':
                  [
                     'sim_config.yml',
                     'workload/profiles/*.csv',
                  ]},
    entry_points={
        'console_scripts': [
            'bpsim = bitparticle_sim.cli:main',
        ],
    },
)
