# Make core a Python package
