"""
srtsim utilities package.
Contains output formatting, report building, PDF export, and logging.
"""
