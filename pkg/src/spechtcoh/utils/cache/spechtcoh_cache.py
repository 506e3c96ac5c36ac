from spechtcoh.utils.cache.cache_factory import get_cache


class SpechtcohCache:
    """
    Unified public interface to the result cache, regardless of backend.
    """

    def __init__(self, type, uri, create=True):
        """
        Args:
            type (str): One of ['directory', 'json'].
            uri (str): Cache directory, or path to the TinyDB .json file.
            create (bool): Create the cache location if it is missing.
        """
        self._backend = get_cache(type, uri, create)

    def __getattr__(self, name):
        # delegate method calls to the backend
        return getattr(self._backend, name)
