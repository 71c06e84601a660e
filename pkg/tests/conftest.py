import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import support  # noqa: E402
from newsver.config import validate_config  # noqa: E402
from newsver.pipeline import verify_item  # noqa: E402
from newsver.providers.base import ProviderSet  # noqa: E402
from newsver.providers.replay import ReplayCache  # noqa: E402


@pytest.fixture(scope="session")
def default_config():
    return validate_config({})


@pytest.fixture(scope="session")
def replay_dir(tmp_path_factory, default_config):
    """Record every fixture article once with the scripted backends."""
    directory = tmp_path_factory.mktemp("replay")
    providers = ProviderSet(
        **support.scripted_backends(), cache=ReplayCache(directory), mode="record"
    )
    for slug in support.FIXTURES:
        verify_item(support.make_news(slug), default_config, providers)
    return directory


@pytest.fixture()
def replay_providers(replay_dir):
    """Fresh replay-mode provider set over the session cache."""

    def factory() -> ProviderSet:
        return ProviderSet(
            credibility=support.credibility_table(),
            cache=ReplayCache(replay_dir),
            mode="replay",
        )

    return factory


@pytest.fixture()
def scripted_providers():
    """Direct scripted backends, no cache (for unit tests)."""
    return ProviderSet(**support.scripted_backends(), mode="live")


@pytest.fixture(scope="session")
def credibility_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("cred") / "credibility.tsv"
    path.write_text(support.credibility_tsv(), encoding="utf-8")
    return path
