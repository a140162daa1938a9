# Configuration package for the outer billiard toolkit
