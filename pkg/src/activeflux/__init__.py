"""Semi-discrete Active Flux solver and Fourier analyzer on Cartesian grids."""

__version__ = "0.1.0"
