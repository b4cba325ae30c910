from __future__ import annotations

import pytest

from cpfactor.factorize import CACHE_ENV


@pytest.fixture(autouse=True)
def _no_disk_cache(monkeypatch):
    # tests never touch a user cache directory unless they opt in
    monkeypatch.delenv(CACHE_ENV, raising=False)
