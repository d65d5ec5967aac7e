__version__ = "v0.4.1"
