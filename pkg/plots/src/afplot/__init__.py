"""CSV-to-image rendering for the solver's delimited artifacts."""

__version__ = "0.1.0"
