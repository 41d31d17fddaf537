"""Exact arithmetic for Kac-Moody root systems, Weyl groups and pro-unipotent groups."""

__version__ = "0.1.0"

MODULE_VERSIONS = {
    name: __version__
    for name in ("gcm", "rootsys", "weyl", "dynamics", "liealg", "fields", "prounip", "cli")
}
