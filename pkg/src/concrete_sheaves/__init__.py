"""Concrete sheaves on finite concrete sites."""
