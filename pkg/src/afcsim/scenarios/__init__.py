"""Bundled scenario configs, runnable by name via ``afcsim run <name>``."""
