# Computational Services