class BaseRepository:
    """In-memory table of ``model`` rows, filtered by attribute equality."""

    def __init__(self, model, rows=()):
        self.model = model
        self._rows = list(rows)

    def _query(self, *_, **kwargs):
        return [row for row in self._rows if all(getattr(row, k) == v for k, v in kwargs.items())]

    def get(self, *_, **kwargs):
        rows = self._query(**kwargs)
        if len(rows) > 1:
            raise LookupError(f"{len(rows)} {self.model.__name__} rows match {kwargs}")
        return rows[0] if rows else None

    def get_many(self, *_, **kwargs):
        return self._query(**kwargs)
