"""
srtsim components package.
Contains run configuration intake and validation.
"""
