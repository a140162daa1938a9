# Core computation packages for the outer billiard toolkit
