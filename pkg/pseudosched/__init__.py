"""Broadcast pseudo-scheduling: verifiers, centralized and decentralized schedulers, bench harness."""

__version__ = '1.0.0'
