"""E2E tests for the span command line and toy-scale training."""
