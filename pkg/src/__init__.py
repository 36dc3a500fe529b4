# Make src a Python package
