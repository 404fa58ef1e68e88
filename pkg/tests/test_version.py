from importlib.metadata import PackageNotFoundError
from unittest import mock

from packaging import version

from polarstar import __version__
from polarstar.cli.polarstar import get_version
from polarstar.config import schema_version


def test_package_version_parses():
    assert isinstance(version.parse(__version__), version.Version)


def test_schema_version_is_semver():
    parsed = version.parse(schema_version())
    assert (parsed.major, parsed.minor, parsed.micro) >= (1, 0, 0)
    assert not parsed.is_prerelease


def test_get_version_falls_back_when_not_installed():
    with mock.patch("polarstar.cli.polarstar.version", side_effect=PackageNotFoundError):
        assert get_version() == __version__


def test_get_version_prefers_installed_metadata():
    with mock.patch("polarstar.cli.polarstar.version", return_value="9.9.9"):
        assert get_version() == "9.9.9"
