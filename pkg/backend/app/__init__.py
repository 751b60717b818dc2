"""Application package: run configuration and CLI command implementations."""
