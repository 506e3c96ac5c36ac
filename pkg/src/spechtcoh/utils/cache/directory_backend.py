import json
import os

from spechtcoh.utils.cache.cache_interface import AbstractResultCache
from spechtcoh.utils.file_utils import write_json_atomic


class DirectoryBackend(AbstractResultCache):
    """
    One human-readable JSON file per record at
    ``<root>/<config_hash>/<p>/<d>/<lambda-dashes>.json``. Writes go to a
    temporary file in the target directory and are renamed into place.
    """

    def __init__(self, root, create=True):
        self.root = root
        if create:
            os.makedirs(self.root, exist_ok=True)
        self.is_connected()

    def is_connected(self):
        if not os.path.isdir(self.root):
            raise FileNotFoundError(f"The cache directory {self.root} does not exist.")

    def _path(self, key):
        return os.path.join(self.root, *key.split("/")) + ".json"

    def _read(self, path):
        with open(path, "r") as file:
            return json.load(file)

    def get_all_records(self):
        records = []
        for dirpath, _, filenames in os.walk(self.root):
            for name in filenames:
                if name.endswith(".json"):
                    records.append(self._read(os.path.join(dirpath, name)))
        return sorted(records, key=lambda r: r["key"])

    def upsert_record(self, record):
        write_json_atomic(record, self._path(record["key"]))

    def contains_record(self, key):
        return os.path.isfile(self._path(key))

    def get_record(self, key):
        path = self._path(key)
        if not os.path.isfile(path):
            return None
        return self._read(path)

    def remove_record(self, key):
        path = self._path(key)
        if os.path.isfile(path):
            os.remove(path)

    def truncate_cache(self):
        for record in self.get_all_records():
            self.remove_record(record["key"])
        # drop the now empty namespace directories
        for dirpath, dirnames, filenames in os.walk(self.root, topdown=False):
            if dirpath != self.root and not os.listdir(dirpath):
                os.rmdir(dirpath)
