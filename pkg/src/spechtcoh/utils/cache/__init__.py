from .cache_interface import record_key
from .spechtcoh_cache import SpechtcohCache

__all__ = ["SpechtcohCache", "record_key"]
