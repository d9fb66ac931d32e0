# Utility Functions 