from setuptools import setup, find_packages

setup(
    name='pseudosched',
    version='1.0.0',
    description='Broadcast pseudo-scheduling: twice-degree and d-band schedulers, verifiers and bench',
    packages=find_packages(include=['pseudosched', 'pseudosched.*']),
    python_requires='>=3.10',
    install_requires=[
        'blinker==1.9.0',
        'click==8.2.1',
        'Flask==3.1.1',
        'flask-cors==6.0.0',
        'itsdangerous==2.2.0',
        'Jinja2==3.1.6',
        'joblib==1.5.1',
        'MarkupSafe==3.0.2',
        'networkx>=3.4',
        'numpy>=2.2',
        'pandas==2.3.0',
        'python-dateutil==2.9.0.post0',
        'pytz==2025.2',
        'scipy>=1.15',
        'six==1.17.0',
        'tzdata==2025.2',
        'Werkzeug==3.1.3',
    ],
    extras_require={
        'test': ['pytest==8.4.1'],
    },
    entry_points={
        'console_scripts': [
            'pseudosched=pseudosched.cli:cli',
        ],
    },
)
