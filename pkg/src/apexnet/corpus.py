"""Synthetic annotated plot corpus: randomized rendering plus ground truth.

Every example is a pure function of (seed, config): the seed drives one
numpy Generator through a fixed draw order (plot count, geometry, styles,
text, ticks, legend, background, margins), the curves are sampled next
from the same stream, and matplotlib rasterizes the result.  Ground-truth
bytes therefore regenerate identically from the same seed; image bytes
are stable for a pinned matplotlib version, which the manifest records.

Axes data limits are pinned to the unit square so ground truth aligns
with the plotted box; tick labels are cosmetically remapped through a
random display range so images still resemble real-world plots.

On-disk layout:
    out_dir/images/{id}.png    8-bit RGB
    out_dir/gt/{id}.json       {"id","seed","k","n","y"}, 9 significant digits
    out_dir/manifest.jsonl     one entry per line, written last
"""

from __future__ import annotations

import dataclasses
import json
import string
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib
import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure
from matplotlib.ticker import FuncFormatter
from PIL import Image

from .core import GroundTruthSet, PlotImage, SampleGrid, make_sample_grid
from .curves import generate_curve
from .errors import CorpusWriteError, DataError, RenderError

_LINE_STYLE_MAP = {"solid": "-", "dashed": "--", "dotted": ":", "dashdot": "-."}
_MARKER_MAP = {
    "none": "",
    "circle": "o",
    "square": "s",
    "triangle": "^",
    "diamond": "D",
    "plus": "+",
    "cross": "x",
}
_LEGEND_LOC_MAP = {
    "upper-left": {"loc": "upper left"},
    "upper-right": {"loc": "upper right"},
    "lower-left": {"loc": "lower left"},
    "lower-right": {"loc": "lower right"},
    "outside-right": {"loc": "center left", "bbox_to_anchor": (1.02, 0.5)},
}
_TEXT_CHARS = string.ascii_letters + string.digits


def backend_version() -> str:
    return f"matplotlib-{matplotlib.__version__}"


@dataclass(frozen=True)
class GeneratorConfig:
    """Randomization ranges and the predefined style lists.

    Every knob is overridable; the defaults bracket common figure styles.
    """

    max_plots: int = 10
    n_points: int = 1024
    line_styles: tuple = tuple(_LINE_STYLE_MAP)
    marker_shapes: tuple = tuple(_MARKER_MAP)
    legend_locations: tuple = tuple(_LEGEND_LOC_MAP)
    background_templates: tuple = ("plain-white", "light-gray", "ticked-frame", "minimal-spines")
    width_range: tuple = (320, 1280)
    aspect_range: tuple = (0.5, 2.0)
    dpi_range: tuple = (80, 160)
    line_width_range: tuple = (0.5, 4.0)
    marker_size_range: tuple = (2.0, 10.0)
    markevery_range: tuple = (16, 128)
    min_color_distance: float = 0.05
    text_length_range: tuple = (3, 24)
    title_size_range: tuple = (8.0, 20.0)
    label_size_range: tuple = (7.0, 16.0)
    tick_length_range: tuple = (2.0, 8.0)
    tick_label_size_range: tuple = (6.0, 13.0)
    tick_rotation_choices: tuple = (0, 0, 0, 30, 45, 90)
    legend_probability: float = 0.5
    legend_size_range: tuple = (6.0, 12.0)
    gridline_probability: float = 0.5

    @classmethod
    def from_dict(cls, d: dict) -> "GeneratorConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown generator config keys: {sorted(unknown)}")
        coerced = {
            k: tuple(v) if isinstance(getattr(cls, k), tuple) else v for k, v in d.items()
        }
        return cls(**coerced)


@dataclass(frozen=True)
class CurveStyle:
    color: tuple
    line_style: str
    line_width: float
    marker: str
    marker_size: float
    marker_face_color: tuple
    markevery: int


@dataclass(frozen=True)
class TextSpec:
    text: str
    size: float
    style: str = "normal"
    weight: str = "normal"
    location: str = "center"


@dataclass(frozen=True)
class LegendSpec:
    location: str
    size: float
    labels: tuple


@dataclass(frozen=True)
class RenderSpec:
    """Complete randomized description of one synthetic plot image."""

    k: int
    width: int
    height: int
    dpi: int
    styles: tuple
    title: TextSpec
    x_label: TextSpec
    y_label: TextSpec
    tick_length: float
    tick_label_size: float
    tick_rotation: float
    x_tick_display: tuple
    y_tick_display: tuple
    legend: LegendSpec | None
    background: str
    gridlines: bool
    margins: tuple  # (left, right, bottom, top) figure fractions


def _random_text(rng: np.random.Generator, config: GeneratorConfig) -> str:
    lo, hi = config.text_length_range
    length = int(rng.integers(lo, hi + 1))
    idx = rng.integers(0, len(_TEXT_CHARS), size=length)
    return "".join(_TEXT_CHARS[i] for i in idx)


def _random_color(rng: np.random.Generator, used: list, min_dist: float) -> tuple:
    # Resample until distinguishable from every earlier curve in the image.
    while True:
        c = rng.random(3)
        if all(np.abs(c - np.asarray(u)).max() >= min_dist for u in used):
            return tuple(float(v) for v in c)


def sample_render_spec(rng: np.random.Generator, config: GeneratorConfig | None = None) -> RenderSpec:
    """Draw a full RenderSpec; deterministic given the rng state.

    The draw order below is fixed: reordering it would silently change
    every seeded corpus.
    """
    cfg = config or GeneratorConfig()
    k = int(rng.integers(1, cfg.max_plots + 1))

    width = int(rng.integers(cfg.width_range[0], cfg.width_range[1] + 1))
    aspect = rng.uniform(*cfg.aspect_range)
    height = max(int(round(width * aspect)), 64)
    dpi = int(rng.integers(cfg.dpi_range[0], cfg.dpi_range[1] + 1))

    styles = []
    used_colors: list = []
    for _ in range(k):
        color = _random_color(rng, used_colors, cfg.min_color_distance)
        used_colors.append(color)
        styles.append(
            CurveStyle(
                color=color,
                line_style=str(rng.choice(cfg.line_styles)),
                line_width=float(rng.uniform(*cfg.line_width_range)),
                marker=str(rng.choice(cfg.marker_shapes)),
                marker_size=float(rng.uniform(*cfg.marker_size_range)),
                marker_face_color=tuple(float(v) for v in rng.random(3)),
                markevery=int(rng.integers(cfg.markevery_range[0], cfg.markevery_range[1] + 1)),
            )
        )

    def text_spec(location_choices=("center",)) -> TextSpec:
        return TextSpec(
            text=_random_text(rng, cfg),
            size=float(rng.uniform(*cfg.title_size_range)),
            style=str(rng.choice(("normal", "italic"))),
            weight=str(rng.choice(("normal", "bold"))),
            location=str(rng.choice(location_choices)),
        )

    title = text_spec(("left", "center", "right"))
    label_size = float(rng.uniform(*cfg.label_size_range))
    x_label = TextSpec(text=_random_text(rng, cfg), size=label_size)
    y_label = TextSpec(text=_random_text(rng, cfg), size=label_size)

    tick_length = float(rng.uniform(*cfg.tick_length_range))
    tick_label_size = float(rng.uniform(*cfg.tick_label_size_range))
    tick_rotation = float(rng.choice(cfg.tick_rotation_choices))

    def display_range() -> tuple:
        lo = float(rng.uniform(-100.0, 100.0))
        span = float(10.0 ** rng.uniform(-1.0, 3.0))
        return (lo, lo + span)

    x_tick_display = display_range()
    y_tick_display = display_range()

    legend = None
    if rng.random() < cfg.legend_probability:
        legend = LegendSpec(
            location=str(rng.choice(cfg.legend_locations)),
            size=float(rng.uniform(*cfg.legend_size_range)),
            labels=tuple(_random_text(rng, cfg) for _ in range(k)),
        )

    background = str(rng.choice(cfg.background_templates))
    gridlines = bool(rng.random() < cfg.gridline_probability)

    left = float(rng.uniform(0.08, 0.20))
    if legend is not None and legend.location == "outside-right":
        right = float(rng.uniform(0.70, 0.80))
    else:
        right = float(rng.uniform(0.86, 0.97))
    bottom = float(rng.uniform(0.09, 0.20))
    top = float(rng.uniform(0.82, 0.94))

    return RenderSpec(
        k=k,
        width=width,
        height=height,
        dpi=dpi,
        styles=tuple(styles),
        title=title,
        x_label=x_label,
        y_label=y_label,
        tick_length=tick_length,
        tick_label_size=tick_label_size,
        tick_rotation=tick_rotation,
        x_tick_display=x_tick_display,
        y_tick_display=y_tick_display,
        legend=legend,
        background=background,
        gridlines=gridlines,
        margins=(left, right, bottom, top),
    )


def _apply_background(fig: Figure, ax, template: str) -> None:
    if template == "light-gray":
        ax.set_facecolor("#ebebeb")
    elif template == "ticked-frame":
        ax.tick_params(direction="in", top=True, right=True)
    elif template == "minimal-spines":
        ax.spines["top"].set_visible(False)
        ax.spines["right"].set_visible(False)


def render_plot_image(spec: RenderSpec, curves: GroundTruthSet, grid: SampleGrid) -> PlotImage:
    """Rasterize one RenderSpec with the axes data limits pinned to [0,1]x[0,1]."""
    if spec.k != curves.k:
        raise ValueError(f"spec.k={spec.k} does not match curve count {curves.k}")
    try:
        fig = Figure(figsize=(spec.width / spec.dpi, spec.height / spec.dpi), dpi=spec.dpi)
        canvas = FigureCanvasAgg(fig)
        ax = fig.add_subplot()
        left, right, bottom, top = spec.margins
        fig.subplots_adjust(left=left, right=right, bottom=bottom, top=top)
        _apply_background(fig, ax, spec.background)

        for j in range(spec.k):
            st = spec.styles[j]
            ax.plot(
                grid.xs,
                curves.curves[j],
                color=st.color,
                linestyle=_LINE_STYLE_MAP[st.line_style],
                linewidth=st.line_width,
                marker=_MARKER_MAP[st.marker],
                markersize=st.marker_size,
                markerfacecolor=st.marker_face_color,
                markevery=st.markevery,
                label=spec.legend.labels[j] if spec.legend else None,
            )

        ax.set_xlim(0.0, 1.0)
        ax.set_ylim(0.0, 1.0)

        if spec.title.text:
            ax.set_title(
                spec.title.text,
                fontsize=spec.title.size,
                style=spec.title.style,
                fontweight=spec.title.weight,
                loc=spec.title.location,
            )
        if spec.x_label.text:
            ax.set_xlabel(spec.x_label.text, fontsize=spec.x_label.size)
        if spec.y_label.text:
            ax.set_ylabel(spec.y_label.text, fontsize=spec.y_label.size)

        ax.tick_params(length=spec.tick_length, labelsize=spec.tick_label_size)
        ax.tick_params(axis="x", labelrotation=spec.tick_rotation)
        xlo, xhi = spec.x_tick_display
        ylo, yhi = spec.y_tick_display
        ax.xaxis.set_major_formatter(FuncFormatter(lambda v, _: f"{xlo + v * (xhi - xlo):.3g}"))
        ax.yaxis.set_major_formatter(FuncFormatter(lambda v, _: f"{ylo + v * (yhi - ylo):.3g}"))

        if spec.legend is not None:
            ax.legend(fontsize=spec.legend.size, **_LEGEND_LOC_MAP[spec.legend.location])
        if spec.gridlines:
            ax.grid(True)

        canvas.draw()
        rgba = np.asarray(canvas.buffer_rgba())
    except (ValueError, TypeError, KeyError):
        raise
    except Exception as exc:
        raise RenderError(
            f"backend failed rendering {spec.width}x{spec.height} spec with k={spec.k}: {exc}"
        ) from exc
    return PlotImage(pixels=rgba[:, :, :3].astype(np.float64) / 255.0)


def generate_example(
    example_seed: int, config: GeneratorConfig | None = None
) -> tuple[PlotImage, GroundTruthSet, RenderSpec]:
    """Produce one (image, ground truth, spec) triple from a single seed."""
    cfg = config or GeneratorConfig()
    grid = make_sample_grid(cfg.n_points)
    rng = np.random.default_rng(int(example_seed))
    spec = sample_render_spec(rng, cfg)
    ys = np.stack([generate_curve(rng, grid).ys for _ in range(spec.k)])
    gts = GroundTruthSet(curves=ys, max_plots=cfg.max_plots)
    try:
        image = render_plot_image(spec, gts, grid)
    except RenderError as exc:
        raise RenderError(f"example seed={example_seed}: {exc}") from exc
    return image, gts, spec


def format_gt_json(entry_id: str, seed: int, gts: GroundTruthSet) -> str:
    """Serialize ground truth with stable 9-significant-digit floats."""
    rows = ",".join(
        "[" + ",".join(f"{v:.9g}" for v in row) + "]" for row in gts.curves
    )
    return (
        f'{{"id":"{entry_id}","seed":{int(seed)},"k":{gts.k},'
        f'"n":{gts.curves.shape[1]},"y":[{rows}]}}'
    )


def image_to_png_bytes(image: PlotImage) -> bytes:
    arr = np.round(image.pixels * 255.0).astype(np.uint8)
    import io

    buf = io.BytesIO()
    Image.fromarray(arr, mode="RGB").save(buf, format="PNG")
    return buf.getvalue()


@dataclass(frozen=True)
class ManifestEntry:
    id: str
    split: str
    seed: int
    image: str
    gt: str
    k: int
    backend_version: str

    def to_json(self) -> str:
        return json.dumps(
            {
                "id": self.id,
                "split": self.split,
                "seed": self.seed,
                "image": self.image,
                "gt": self.gt,
                "k": self.k,
                "backend_version": self.backend_version,
            }
        )


@dataclass(frozen=True)
class CorpusManifest:
    root: Path
    entries: tuple = field(repr=False)

    def split(self, name: str) -> list:
        return [e for e in self.entries if e.split == name]

    def __len__(self) -> int:
        return len(self.entries)


def train_count(count: int) -> int:
    """Size of the train split: first 80% of indices, floor-rounded."""
    return (4 * count) // 5


def generate_corpus(
    count: int,
    base_seed: int,
    out_dir,
    config: GeneratorConfig | None = None,
) -> CorpusManifest:
    """Write a complete corpus; the manifest is written last, so a parseable
    manifest implies every referenced file exists."""
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    cfg = config or GeneratorConfig()
    root = Path(out_dir)
    (root / "images").mkdir(parents=True, exist_ok=True)
    (root / "gt").mkdir(parents=True, exist_ok=True)

    n_train = train_count(count)
    version = backend_version()
    entries = []
    for i in range(count):
        entry_id = f"{i:08d}"
        seed = base_seed + i
        image, gts, _ = generate_example(seed, cfg)
        image_rel = f"images/{entry_id}.png"
        gt_rel = f"gt/{entry_id}.json"
        try:
            (root / image_rel).write_bytes(image_to_png_bytes(image))
            (root / gt_rel).write_text(format_gt_json(entry_id, seed, gts) + "\n")
        except OSError as exc:
            raise CorpusWriteError(f"entry {entry_id}: {exc}") from exc
        entries.append(
            ManifestEntry(
                id=entry_id,
                split="train" if i < n_train else "test",
                seed=seed,
                image=image_rel,
                gt=gt_rel,
                k=gts.k,
                backend_version=version,
            )
        )
    try:
        with open(root / "manifest.jsonl", "w") as fh:
            for e in entries:
                fh.write(e.to_json() + "\n")
    except OSError as exc:
        raise CorpusWriteError(f"manifest: {exc}") from exc
    return CorpusManifest(root=root, entries=tuple(entries))


def load_manifest(corpus_dir) -> CorpusManifest:
    root = Path(corpus_dir)
    path = root / "manifest.jsonl"
    if not path.exists():
        raise DataError(f"no manifest at {path}")
    entries = []
    try:
        for line in path.read_text().splitlines():
            if not line.strip():
                continue
            d = json.loads(line)
            entries.append(
                ManifestEntry(
                    id=d["id"],
                    split=d["split"],
                    seed=int(d["seed"]),
                    image=d["image"],
                    gt=d["gt"],
                    k=int(d["k"]),
                    backend_version=d.get("backend_version", ""),
                )
            )
    except (json.JSONDecodeError, KeyError, ValueError) as exc:
        raise DataError(f"corrupt manifest {path}: {exc}") from exc
    return CorpusManifest(root=root, entries=tuple(entries))


def load_gt(corpus_root, entry: ManifestEntry) -> GroundTruthSet:
    path = Path(corpus_root) / entry.gt
    try:
        d = json.loads(path.read_text())
        ys = np.asarray(d["y"], dtype=np.float64)
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        raise DataError(f"corrupt ground truth {path}: {exc}") from exc
    if ys.ndim != 2 or ys.shape[0] != int(d["k"]) or ys.shape[1] != int(d["n"]):
        raise DataError(f"ground truth {path} shape {ys.shape} disagrees with header")
    return GroundTruthSet(curves=ys)


def load_image_array(corpus_root, entry: ManifestEntry) -> np.ndarray:
    path = Path(corpus_root) / entry.image
    try:
        with Image.open(path) as im:
            arr = np.asarray(im.convert("RGB"), dtype=np.float64) / 255.0
    except OSError as exc:
        raise DataError(f"unreadable image {path}: {exc}") from exc
    return arr
