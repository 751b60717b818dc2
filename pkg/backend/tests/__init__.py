"""Test suite for the SPAN localization backend."""
