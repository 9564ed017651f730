import math

import numpy as np
import pytest

from slchaos.svgplot import (
    COMPARE_COLORS,
    Curve,
    export_svg,
    isometric_projection,
)


def _sine_curve(label="", color=None):
    x = np.linspace(0.0, 10.0, 60)
    kwargs = {} if color is None else {"color": color}
    return Curve(label, x, np.sin(x), **kwargs)


class TestCurve:
    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            Curve("", np.array([]), np.array([]))

    def test_rejects_shape_mismatch(self):
        with pytest.raises(ValueError):
            Curve("", np.array([1.0, 2.0]), np.array([1.0]))

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError, match="non-finite"):
            Curve("", np.array([1.0, 2.0]), np.array([1.0, math.inf]))


class TestProjection:
    def test_axis_images(self):
        states = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
        u, v = isometric_projection(states)
        root = math.sqrt(3.0) / 2.0
        assert u == pytest.approx([root, -root, 0.0])
        assert v == pytest.approx([0.5, 0.5, -1.0])


class TestExport:
    def test_document_shell(self, tmp_path):
        path = export_svg([_sine_curve()], tmp_path / "p.svg", x_label="t", y_label="x")
        text = path.read_text()
        assert text.startswith("<svg ")
        assert 'width="800" height="600"' in text
        assert text.rstrip().endswith("</svg>")
        assert text.count("<polyline ") == 1
        assert ">t</text>" in text
        assert ">x</text>" in text

    def test_tick_labels_span_data(self, tmp_path):
        path = export_svg([_sine_curve()], tmp_path / "p.svg", x_label="t", y_label="x")
        text = path.read_text()
        assert ">0</text>" in text
        assert ">10</text>" in text

    def test_byte_determinism(self, tmp_path):
        a = export_svg([_sine_curve("run")], tmp_path / "a.svg", x_label="t", y_label="x")
        b = export_svg([_sine_curve("run")], tmp_path / "b.svg", x_label="t", y_label="x")
        assert a.read_bytes() == b.read_bytes()

    def test_single_point_becomes_marker(self, tmp_path):
        c = Curve("", np.array([2.0]), np.array([3.0]))
        path = export_svg([c], tmp_path / "dot.svg", x_label="t", y_label="x")
        text = path.read_text()
        assert "<circle " in text
        assert "<polyline " not in text

    def test_overlay_palette_order(self, tmp_path):
        curves = [
            Curve(f"c{i}", np.linspace(0, 1, 5), np.linspace(0, 1, 5) * (i + 1), color=COMPARE_COLORS[i])
            for i in range(3)
        ]
        path = export_svg(curves, tmp_path / "m.svg", x_label="t", y_label="x")
        text = path.read_text()
        green = text.index("#008000")
        red = text.index("#d00000")
        blue = text.index("#0000cc")
        assert green < red < blue
        for c in curves:
            assert f">{c.label}</text>" in text

    def test_unlabeled_curves_get_no_legend(self, tmp_path):
        path = export_svg([_sine_curve()], tmp_path / "p.svg", x_label="t", y_label="x")
        # legend swatches are the only stroke-width="2" elements
        assert 'stroke-width="2"' not in path.read_text()

    def test_needs_a_curve(self, tmp_path):
        with pytest.raises(ValueError):
            export_svg([], tmp_path / "p.svg", x_label="t", y_label="x")
