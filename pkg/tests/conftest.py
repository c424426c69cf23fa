import pytest

from stargray import ham_lab


@pytest.fixture(autouse=True)
def fresh_cache(monkeypatch):
    """Keep every test on its own in-memory certificate cache."""
    monkeypatch.delenv("STARGRAY_CACHE", raising=False)
    cache = ham_lab.CertificateCache()
    ham_lab.set_cache(cache)
    yield cache
    ham_lab.set_cache(None)

