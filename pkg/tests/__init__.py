"""nanoexpand test suite."""
