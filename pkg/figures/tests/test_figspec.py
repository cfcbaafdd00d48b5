"""FigureSpec construction and flag validation."""

import pytest

from figures import KINDS, FigureSpec


def test_valid_specs_for_every_kind():
    for kind in KINDS:
        spec = FigureSpec(kind=kind, inputs=("a.csv",), out="fig.png")
        assert spec.kind == kind
        assert spec.inputs == ("a.csv",)


def test_unknown_kind_rejected():
    with pytest.raises(ValueError, match="unknown figure kind"):
        FigureSpec(kind="pie", inputs=("a.csv",), out="fig.png")


def test_requires_at_least_one_input():
    with pytest.raises(ValueError, match="at least one input"):
        FigureSpec(kind="profile", inputs=(), out="fig.png")


def test_label_count_must_match_inputs():
    with pytest.raises(ValueError, match="2 labels for 1 inputs"):
        FigureSpec(kind="profile", inputs=("a.csv",), labels=("x", "y"),
                   out="fig.png")


def test_output_extension_checked():
    with pytest.raises(ValueError, match=".png or .svg"):
        FigureSpec(kind="profile", inputs=("a.csv",), out="fig.pdf")


def test_normalize_only_for_heatmaps():
    FigureSpec(kind="heatmap", inputs=("a.csv",), out="f.png", normalize=True)
    with pytest.raises(ValueError, match="only valid for heatmaps"):
        FigureSpec(kind="profile", inputs=("a.csv",), out="f.png",
                   normalize=True)


def test_inset_only_for_profiles():
    FigureSpec(kind="profile", inputs=("a.csv",), out="f.png", inset="c.csv")
    with pytest.raises(ValueError, match="only valid for profile"):
        FigureSpec(kind="heatmap", inputs=("a.csv",), out="f.png",
                   inset="c.csv")


def test_every_only_for_quivers_and_positive():
    FigureSpec(kind="quiver", inputs=("a.csv",), out="f.png", every=3)
    with pytest.raises(ValueError, match="only valid for quiver"):
        FigureSpec(kind="profile", inputs=("a.csv",), out="f.png", every=2)
    with pytest.raises(ValueError, match=">= 1"):
        FigureSpec(kind="quiver", inputs=("a.csv",), out="f.png", every=0)


def test_default_labels_come_from_file_names():
    spec = FigureSpec(kind="profile", inputs=("runs/density_x_cut.csv",),
                      out="f.png")
    assert spec.label_for(0) == "density_x_cut"
    named = FigureSpec(kind="profile", inputs=("a.csv",), labels=("mine",),
                       out="f.png")
    assert named.label_for(0) == "mine"
