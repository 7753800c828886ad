"""Batch plot scripts for the bosefold CSV outputs.

Each script takes positional CSV paths and an ``--out`` flag, writes one PNG,
and exits 0 exactly when the image was written.  CSV inputs are never
modified.
"""

__version__ = "0.1.0"
