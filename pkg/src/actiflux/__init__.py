"""Active Flux for hyperbolic balance laws."""
