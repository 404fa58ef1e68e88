import logging
import os
import types
from unittest import mock

import pytest

import polarstar.utils
from polarstar.utils.files import csv_text, mkdir_if_not_exist, write_atomic
from polarstar.utils.progress import show_progress


class TestWriteAtomic:
    def test_creates_parents(self, tmp_path):
        target = tmp_path / "a" / "b" / "out.txt"
        assert write_atomic(target, "hello\n") == str(target)
        assert target.read_text() == "hello\n"

    def test_replaces_and_cleans_up(self, tmp_path):
        target = tmp_path / "out.txt"
        target.write_text("old")
        write_atomic(target, "new")
        assert target.read_text() == "new"
        assert os.listdir(tmp_path) == ["out.txt"]

    def test_retries_rename(self, tmp_path):
        target = tmp_path / "out.txt"
        real_replace = os.replace
        calls = []

        def flaky(src, dst):
            calls.append(src)
            if len(calls) == 1:
                raise PermissionError("file in use")
            return real_replace(src, dst)

        with mock.patch("polarstar.utils.files.os.replace", side_effect=flaky), mock.patch(
            "polarstar.utils.files.time.sleep"
        ):
            write_atomic(target, "data")
        assert len(calls) == 2
        assert target.read_text() == "data"

    def test_removes_temp_file_on_failure(self, tmp_path):
        target = tmp_path / "out.txt"
        with mock.patch(
            "polarstar.utils.files.os.replace", side_effect=PermissionError("locked")
        ), mock.patch("polarstar.utils.files.time.sleep"):
            with pytest.raises(PermissionError):
                write_atomic(target, "data", retries=2)
        assert os.listdir(tmp_path) == []


def test_mkdir_if_not_exist(tmp_path):
    path = tmp_path / "x"
    mkdir_if_not_exist(str(path))
    mkdir_if_not_exist(str(path))
    assert path.is_dir()


def test_csv_text():
    rows = [{"a": 1, "b": "x"}, {"a": 2, "b": "y"}]
    assert csv_text(rows, ["a", "b"]) == "a,b\n1,x\n2,y\n"


def test_progress_logs_duration(caplog):
    caplog.set_level(logging.INFO, logger="polarstar")
    with mock.patch("polarstar.utils.progress.Spinner") as spinner:
        with show_progress("Counting", 3) as step:
            for i in range(3):
                step(i + 1)
    assert spinner.call_args.kwargs["total"] == 3
    assert spinner.return_value.__enter__.return_value.step.call_count == 3
    assert "Counting finished in" in caplog.text


def test_progress_module_is_not_shadowed():
    assert isinstance(polarstar.utils.progress, types.ModuleType)
    assert polarstar.utils.progress.show_progress is show_progress
