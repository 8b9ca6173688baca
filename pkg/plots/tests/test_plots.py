"""Rendering acceptance: golden-CSV figures, color-sign law, diagnostics."""

from pathlib import Path

import numpy as np
import pytest

from banditab_plots import (
    FigureSpec,
    PlotInputError,
    diverging_colors,
    heatmap_grid,
    read_rows,
    render_heatmap,
    render_lines,
)
from banditab_plots.cli import main

DATA = Path(__file__).parent / "data"
FIG2B = DATA / "fig2b.csv"
FIG3 = DATA / "fig3_egreedy.csv"


def write_grid_csv(path, rows, axes=("alpha1", "alpha2")):
    header = [*axes, "mean_diff", "se", "prob_correct", "prob_se", "reps"]
    lines = [",".join(header)]
    for r in rows:
        lines.append(",".join(str(r[c]) for c in header))
    path.write_text("\n".join(lines) + "\n")
    return path


class TestGoldenRenders:
    def test_fig2b_lines_render(self, tmp_path):
        out = tmp_path / "fig2b.svg"
        fig = render_lines(FigureSpec(csv_path=str(FIG2B), kind="lines", out_path=str(out)))
        assert out.exists() and out.stat().st_size > 0
        # four curves: greedy/ucb x individual/joint
        assert len(fig.axes[0].get_legend().get_texts()) == 4

    def test_fig3_heatmap_render(self, tmp_path):
        out = tmp_path / "fig3.svg"
        render_heatmap(FigureSpec(csv_path=str(FIG3), kind="heatmap", out_path=str(out)))
        assert out.exists() and out.stat().st_size > 0

    def test_fig3_triangle_pattern(self):
        # comparisons from the shipped joint-run grid: above the diagonal
        # (slot-1 parameter larger) slot 1 is worse, below it is better
        spec = FigureSpec(csv_path=str(FIG3), kind="heatmap")
        _, _, v1s, v2s, matrix = heatmap_grid(spec)
        for i, a1 in enumerate(v1s):
            for j, a2 in enumerate(v2s):
                if a1 >= a2 + 0.25:
                    assert matrix[i, j] > 0, f"cell ({a1}, {a2}) should be red"
                if a2 >= a1 + 0.25:
                    assert matrix[i, j] < 0, f"cell ({a1}, {a2}) should be blue"

    def test_fig3_color_sign_law(self):
        spec = FigureSpec(csv_path=str(FIG3), kind="heatmap")
        _, _, _, _, matrix = heatmap_grid(spec)
        colors = diverging_colors(matrix.ravel(), center=0.0)
        for value, (r, g, b, _) in zip(matrix.ravel(), colors):
            if value > 0:
                assert r > b, f"value {value} should render on the red side"
            elif value < 0:
                assert b > r, f"value {value} should render on the blue side"


class TestDivergingColors:
    def test_red_iff_above_center(self):
        values = np.array([-2.0, -0.1, 0.0, 0.1, 2.0])
        colors = diverging_colors(values, center=0.0)
        assert colors[0][2] > colors[0][0]  # strongly blue
        assert colors[-1][0] > colors[-1][2]  # strongly red
        assert abs(colors[2][0] - colors[2][2]) < 0.05  # neutral center

    def test_all_center_is_uniform_neutral(self):
        colors = diverging_colors(np.zeros(6), center=0.0)
        assert np.allclose(colors, colors[0])

    def test_probability_centering(self):
        colors = diverging_colors(np.array([0.4, 0.5, 0.6]), center=0.5)
        assert colors[0][2] > colors[0][0]
        assert colors[2][0] > colors[2][2]


class TestDiagnostics:
    def test_missing_column_named(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("algo_slot,mode,policy_kind,t,se\n1,joint,greedy,1,0.1\n")
        with pytest.raises(PlotInputError, match="mean_regret"):
            render_lines(FigureSpec(csv_path=str(path), kind="lines"))

    def test_incomplete_grid_lists_cells(self, tmp_path):
        rows = [
            {"alpha1": a1, "alpha2": a2, "mean_diff": 0.1, "se": 0.01,
             "prob_correct": 0.6, "prob_se": 0.01, "reps": 10}
            for a1 in (0.0, 0.5) for a2 in (0.0, 0.5)
        ][:-1]  # drop cell (0.5, 0.5)
        path = write_grid_csv(tmp_path / "partial.csv", rows)
        with pytest.raises(PlotInputError, match=r"\(0.5, 0.5\)"):
            render_heatmap(FigureSpec(csv_path=str(path), kind="heatmap"))

    def test_single_row_curve_renders(self, tmp_path):
        path = tmp_path / "one.csv"
        path.write_text(
            "experiment_id,mode,algo_slot,policy_kind,alpha,C,m,gamma,t,mean_regret,se,reps\n"
            "x,joint,1,greedy,,,,,1,0.5,0.1,10\n"
        )
        fig = render_lines(FigureSpec(csv_path=str(path), kind="lines", out_path=str(tmp_path / "one.svg")))
        assert (tmp_path / "one.svg").exists()
        assert len(fig.axes[0].get_legend().get_texts()) == 1

    def test_empty_file_rejected(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("")
        with pytest.raises(PlotInputError, match="empty"):
            read_rows(path)


class TestDeterminism:
    def test_rerender_same_layout(self):
        spec = FigureSpec(csv_path=str(FIG2B), kind="lines")
        a, b = render_lines(spec), render_lines(spec)
        assert a.get_size_inches().tolist() == b.get_size_inches().tolist()
        assert a.axes[0].get_xlim() == b.axes[0].get_xlim()
        assert a.axes[0].get_ylim() == b.axes[0].get_ylim()


class TestCli:
    def test_lines_subcommand(self, tmp_path):
        out = tmp_path / "curves.svg"
        assert main(["lines", str(FIG2B), "-o", str(out)]) == 0
        assert out.exists()

    def test_heatmap_subcommand_prob_value(self, tmp_path):
        out = tmp_path / "grid.png"
        assert main(["heatmap", str(FIG3), "-o", str(out), "--value", "prob_correct"]) == 0
        assert out.exists()

    def test_bad_input_exits_nonzero(self, tmp_path, capsys):
        path = tmp_path / "bad.csv"
        path.write_text("a,b\n1,2\n")
        assert main(["heatmap", str(path), "-o", str(tmp_path / "x.svg")]) == 1
        assert "grid axes" in capsys.readouterr().err
