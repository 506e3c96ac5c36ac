from abc import ABC, abstractmethod


def record_key(config_hash, p, parts):
    """Key of a cached (lambda, p) result inside one configuration namespace."""
    dashed = "-".join(str(x) for x in parts)
    return f"{config_hash}/{p}/{sum(parts)}/{dashed}"


class AbstractResultCache(ABC):
    """
    Abstract interface for result cache backends. Every record is a dict
    carrying at least ``key`` (see ``record_key``), ``config_hash``, ``p``
    and ``lambda``.
    """

    @abstractmethod
    def is_connected(self):
        """
        Check that the cache location is usable.
        Raises:
            FileNotFoundError: If the cache location does not exist.
        """
        pass

    @abstractmethod
    def get_all_records(self):
        """
        Returns:
            list: All cached records, sorted by key.
        """
        pass

    @abstractmethod
    def upsert_record(self, record):
        """
        Insert or replace the record with the same key.
        Args:
            record (dict): The record to store; must contain ``key``.
        """
        pass

    @abstractmethod
    def contains_record(self, key):
        pass

    @abstractmethod
    def get_record(self, key):
        """
        Args:
            key (str): The record key.
        Returns:
            dict: The matched record, or None if not found.
        """
        pass

    @abstractmethod
    def remove_record(self, key):
        pass

    @abstractmethod
    def truncate_cache(self):
        """
        Remove every cached record.
        """
        pass
