"""Parent Hamiltonians from entanglement-bootstrap reference states."""

__version__ = "0.1.0"
