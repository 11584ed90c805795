"""Services package for the chain search, baselines and benchmarks."""
