"""Three-parameter GSOR iteration and preconditioning for double saddle-point systems."""

__version__ = "0.1.0"
