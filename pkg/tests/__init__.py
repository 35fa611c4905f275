"""Tests for regsubmod."""
