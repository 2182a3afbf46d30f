from setuptools import setup

with open("README.md") as f:
    README = f.read()

setup(
    name='survmed',
    version='0.1.0',
    description='Survival-incorporated quantiles for outcomes truncated by '
                'death',
    long_description=README,
    long_description_content_type='text/markdown',
    license='MIT',
    python_requires='>=3.8',
    install_requires=['numpy>=1.17', 'pandas>=1.5', 'matplotlib>=3.1'],
    packages=['survmed'],
    package_data={'survmed': ['data/*.csv', 'data/*.json']},
    entry_points={'console_scripts': ['survmed = survmed.cli:main']},
    test_suite='test',
    platforms=['Windows', 'OS X', 'Linux']
)
