"""Tests for the lptype-nets package."""
