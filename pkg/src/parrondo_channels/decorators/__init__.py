from .caching import cache_ensemble

__all__ = ["cache_ensemble"]
