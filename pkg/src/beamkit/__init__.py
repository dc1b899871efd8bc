"""beamkit: design and simulation of passive RF beamforming networks."""

__version__ = "0.1.0"
