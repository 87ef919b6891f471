"""
nanoexpand

Phase-space expansion of a levitated nanoparticle by trap-frequency jumps:
stochastic simulation, exact linear predictions and the measurement chain.
"""

__version__ = "0.1.0"
