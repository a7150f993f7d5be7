"""Tests for uirisk."""
