from spechtcoh.utils.cache.directory_backend import DirectoryBackend
from spechtcoh.utils.cache.tinydb_backend import TinyDBBackend


# type based loader
def get_cache(type, uri, create=True):
    if not uri or "${" in str(uri):
        raise ValueError(
            f"No cache location configured (got '{uri}'); set SPECHTCOH_CACHE_DIR or pass --cache."
        )
    if type == "directory":
        return DirectoryBackend(uri, create=create)
    elif type == "json":
        return TinyDBBackend(uri, create=create)
    else:
        raise ValueError(f"unsupported cache type '{type}'")
