# Make infrastructure a Python package
