"""Multi-threaded quantum-classical runtime."""
