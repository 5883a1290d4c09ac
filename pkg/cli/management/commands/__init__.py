# Simulation commands
