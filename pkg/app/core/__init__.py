# Core Configuration, Errors and Logging