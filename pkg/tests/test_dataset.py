import io

import numpy as np
import pytest

from llgpq.analysis.estimation import Sample
from llgpq.cli.dataset import (
    BUNDLED,
    parse_dataset,
    parse_text,
    resolve,
    summarize,
    write_dataset,
)
from llgpq.util import DataError


def test_single_column_is_all_failures() -> None:
    s = parse_text("12.5\n65.55\n")
    assert np.array_equal(s.times, [12.5, 65.55])
    assert s.is_complete and s.n_failures == 2


def test_status_column() -> None:
    s = parse_text("1,1\n2,0\n")
    assert np.array_equal(s.times, [1.0, 2.0])
    assert s.failed.tolist() == [True, False]
    assert s.n_failures == 1


@pytest.mark.parametrize(
    "text",
    [
        "time;status\n1;1\n2;0\n",
        "1\t1\n2\t0\n",
        "1 1\n2   0\n",
        "\ufefftime, status\r\n1 , 1\r\n2, 0\r\n",
        "# units: hours\n\n1,1\n\n2,0\n",
    ],
)
def test_delimiters_and_headers(text: str) -> None:
    s = parse_text(text)
    assert s.times.tolist() == [1.0, 2.0]
    assert s.failed.tolist() == [True, False]


@pytest.mark.parametrize(
    "text,lineno",
    [
        ("0,1\n", 1),
        ("1,1\n-2,1\n", 2),
        ("time\n1\nabc\n", 3),
        ("1,1\n2,2\n", 2),
        ("1,1\n2,yes\n", 2),
        ("1,1,1\n", 1),
        ("1\ninf\n", 2),
    ],
)
def test_bad_rows_name_their_line(text: str, lineno: int) -> None:
    with pytest.raises(DataError, match=f"line {lineno}"):
        parse_text(text)


def test_empty_dataset() -> None:
    for text in ("", "time,status\n", "# nothing\n\n"):
        with pytest.raises(DataError):
            parse_text(text)


def test_write_then_parse(tmp_path) -> None:
    s = Sample(np.array([0.1 + 0.2, 1 / 3, 7.0]), np.array([True, False, True]))
    path = tmp_path / "s.csv"
    write_dataset(s, path)
    back = parse_dataset(path)
    assert np.array_equal(back.times, s.times)
    assert np.array_equal(back.failed, s.failed)

    buf = io.StringIO()
    write_dataset(s, buf)
    assert buf.getvalue() == path.read_text()


def test_resolve(tmp_path) -> None:
    for name in BUNDLED:
        assert resolve(name).is_file()
    own = tmp_path / "grinder"
    own.write_text("3\n")
    # an existing path wins over the bundled name
    assert resolve(own) == own
    with pytest.raises(DataError):
        resolve(tmp_path / "missing.csv")


def test_bundled_sizes(grinder: Sample, reactor: Sample) -> None:
    assert grinder.n == 12 and grinder.is_complete
    assert reactor.n == 23 and reactor.is_complete


def test_grinder_summary(grinder: Sample) -> None:
    s = summarize(grinder)
    assert s.median == pytest.approx(96.05)
    assert s.mean == pytest.approx(86.4167, abs=1e-4)
    assert s.quartiles == pytest.approx((65.55, 96.05, 116.45))
    assert s.min == 12.5


def test_reactor_summary(reactor: Sample) -> None:
    s = summarize(reactor)
    assert s.median == pytest.approx(0.614)
    assert s.mean == pytest.approx(1.578, abs=1e-3)
    assert s.q1 == pytest.approx(0.310, abs=1e-3)
    assert s.q3 == pytest.approx(2.0405, abs=1e-4)
    assert s.min == pytest.approx(0.062)

    frame = s.to_frame()
    assert list(frame.columns) == ["min", "q1", "median", "mean", "q3", "max"]
    assert len(frame) == 1


def test_single_observation_summary() -> None:
    s = summarize(parse_text("4.5\n"))
    assert s.min == s.q1 == s.median == s.mean == s.q3 == s.max == 4.5
