"""ftlab: exact q-series and numerical checks for false theta functions of rank two."""

__version__ = "0.1.0"
