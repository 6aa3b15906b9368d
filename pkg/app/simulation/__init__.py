"""
Simulation package.
Discrete spacetime network: lab timeline, space lattice, synchronization,
particle mechanics, the node loop, analytic oracles and scripted experiments.
"""
