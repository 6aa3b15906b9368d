"""
Command handlers behind the srtsim subcommands.
"""
