# Subspace SAT Solver Package
