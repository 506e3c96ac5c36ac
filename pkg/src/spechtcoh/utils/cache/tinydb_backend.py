import os

from tinydb import Query, TinyDB

from spechtcoh.utils.cache.cache_interface import AbstractResultCache


class TinyDBBackend(AbstractResultCache):
    def __init__(self, database_path, create=False):
        self.database_path = database_path
        if create and not os.path.exists(database_path):
            directory = os.path.dirname(database_path)
            if directory:
                os.makedirs(directory, exist_ok=True)
        else:
            self.is_connected()
        self.db = TinyDB(database_path, sort_keys=True, indent=2)

    def __del__(self):
        if hasattr(self, "db") and self.db is not None:
            self.db.close()

    def is_connected(self):
        if not os.path.exists(self.database_path):
            raise FileNotFoundError(
                f"The cache file at {self.database_path} does not exist."
            )

    def get_all_records(self):
        return sorted((dict(r) for r in self.db.all()), key=lambda r: r["key"])

    def upsert_record(self, record):
        self.db.upsert(record, Query().key == record["key"])

    def contains_record(self, key):
        return self.db.contains(Query().key == key)

    def get_record(self, key):
        record = self.db.get(Query().key == key)
        return dict(record) if record is not None else None

    def remove_record(self, key):
        self.db.remove(Query().key == key)

    def truncate_cache(self):
        self.db.truncate()
