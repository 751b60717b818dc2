"""Library package containing the span_localization framework."""
