"""grakos: exact chain-level homological algebra for partition species,
red-and-black graph complexes, symplectic characters, and the Torelli
quadratic presentation."""

__version__ = "0.1.0"
