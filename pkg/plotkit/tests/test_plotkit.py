import os

import numpy as np
import pytest

from plotkit import PlotSpec, render
from plotkit.cli import _parse_csv_arg, main
from plotkit.csvio import CsvFormatError, read_curves, read_density
from plotkit.render import curve_series
from plotkit.stats import bootstrap_band

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")
TWO_SEED = os.path.join(FIXTURES, "curves_two_seed.csv")
ONE_SEED = os.path.join(FIXTURES, "curves_one_seed.csv")
DENSITY = os.path.join(FIXTURES, "probe_density.csv")


class TestSpec:
    def test_requires_inputs(self):
        with pytest.raises(ValueError):
            PlotSpec(inputs=[], kind="curves", out_path="x.png")

    def test_rejects_unknown_kind(self):
        with pytest.raises(ValueError):
            PlotSpec(inputs=[(TWO_SEED, "a")], kind="scatter", out_path="x.png")

    def test_rejects_bad_pairs(self):
        with pytest.raises(ValueError):
            PlotSpec(inputs=[(TWO_SEED,)], kind="curves", out_path="x.png")


class TestCsvIo:
    def test_read_curves_groups_by_seed(self):
        by_seed = read_curves(TWO_SEED)
        assert set(by_seed) == {0, 1}
        assert by_seed[0][0] == (10, 12.5, 0.004)
        assert [row[0] for row in by_seed[1]] == [10, 20, 30, 40, 50]

    def test_read_density(self):
        centers, density = read_density(DENSITY)
        assert centers[0] == -2.5
        assert len(centers) == len(density) == 6

    def test_malformed_row_names_location(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("seed,episode,steps,return,mean_kl,lr\n"
                       "0,10,1000,1.0,0.01,3e-4\n"
                       "0,twenty,2000,2.0,0.01,3e-4\n")
        with pytest.raises(CsvFormatError, match="row 3"):
            read_curves(bad)

    def test_wrong_header_rejected(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("a,b\n1,2\n")
        with pytest.raises(CsvFormatError, match="header"):
            read_curves(bad)

    def test_empty_file_rejected(self, tmp_path):
        empty = tmp_path / "empty.csv"
        empty.write_text("")
        with pytest.raises(CsvFormatError, match="empty"):
            read_density(empty)


class TestStats:
    def test_band_brackets_mean(self):
        point, lo, hi = bootstrap_band([1.0, 2.0, 3.0, 4.0])
        assert lo <= point <= hi
        assert point == pytest.approx(2.5)

    def test_single_sample_collapses(self):
        point, lo, hi = bootstrap_band([3.5])
        assert point == lo == hi == 3.5

    def test_deterministic(self):
        assert bootstrap_band([1.0, 5.0, 2.0]) == bootstrap_band([1.0, 5.0, 2.0])


class TestCurveSeries:
    def test_across_seed_mean(self):
        episodes, mean, lo, hi = curve_series(read_curves(TWO_SEED), column=1)
        assert list(episodes) == [10, 20, 30, 40, 50]
        assert mean[0] == pytest.approx((12.5 + 8.0) / 2)
        assert np.all(lo <= mean) and np.all(mean <= hi)

    def test_one_seed_band_collapses_onto_mean(self):
        episodes, mean, lo, hi = curve_series(read_curves(ONE_SEED), column=1)
        assert np.array_equal(lo, mean)
        assert np.array_equal(hi, mean)

    def test_kl_column(self):
        _, mean, _, _ = curve_series(read_curves(ONE_SEED), column=2)
        assert mean[1] == pytest.approx(0.011)


class TestRender:
    def test_curves_written_and_pixel_deterministic(self, tmp_path):
        a, b = tmp_path / "a.png", tmp_path / "b.png"
        for out in (a, b):
            render(PlotSpec(inputs=[(TWO_SEED, "run A"), (ONE_SEED, "run B")],
                            kind="curves", out_path=str(out)))
        assert a.stat().st_size > 0
        assert a.read_bytes() == b.read_bytes()

    def test_kl_trace_threshold_line(self, tmp_path):
        fig = render(PlotSpec(inputs=[(TWO_SEED, "ppo")], kind="kl_trace",
                              out_path=str(tmp_path / "kl.png"),
                              threshold=0.01))
        ax = fig.axes[0]
        dashed = [ln for ln in ax.lines
                  if ln.get_linestyle() == "--"
                  and np.allclose(ln.get_ydata(), 0.01)]
        assert len(dashed) == 1

    def test_kl_trace_pixel_deterministic(self, tmp_path):
        a, b = tmp_path / "a.png", tmp_path / "b.png"
        for out in (a, b):
            render(PlotSpec(inputs=[(TWO_SEED, "ppo")], kind="kl_trace",
                            out_path=str(out), threshold=0.01))
        assert a.read_bytes() == b.read_bytes()

    def test_identical_inputs_overlap_exactly(self, tmp_path):
        fig = render(PlotSpec(inputs=[(TWO_SEED, "first"), (TWO_SEED, "second")],
                              kind="curves", out_path=str(tmp_path / "o.png")))
        ax = fig.axes[0]
        curve_lines = [ln for ln in ax.lines if len(ln.get_ydata()) == 5]
        assert len(curve_lines) == 2
        assert np.array_equal(curve_lines[0].get_ydata(),
                              curve_lines[1].get_ydata())

    def test_action_density(self, tmp_path):
        out = tmp_path / "density.png"
        fig = render(PlotSpec(inputs=[(DENSITY, "lecun")],
                              kind="action_density", out_path=str(out)))
        assert out.stat().st_size > 0
        assert fig.axes[0].get_xlabel() == "action"

    def test_rendering_is_read_only(self, tmp_path):
        before = open(TWO_SEED, "rb").read()
        render(PlotSpec(inputs=[(TWO_SEED, "x")], kind="curves",
                        out_path=str(tmp_path / "x.png")))
        assert open(TWO_SEED, "rb").read() == before


class TestCli:
    def test_csv_arg_parsing(self):
        assert _parse_csv_arg("a.csv:Label") == ("a.csv", "Label")
        assert _parse_csv_arg("a.csv") == ("a.csv", "a.csv")

    def test_end_to_end(self, tmp_path, capsys):
        out = tmp_path / "fig.png"
        code = main(["--kind", "kl_trace", "--csv", f"{TWO_SEED}:PPO",
                     "--threshold", "0.01", "--out", str(out)])
        assert code == 0
        assert out.stat().st_size > 0
        assert "wrote" in capsys.readouterr().out
