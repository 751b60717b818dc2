"""Unit tests for the span_localization library and run configuration."""
