# Command line interface for the outer billiard toolkit
