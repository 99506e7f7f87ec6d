"""Datasets: synthetic multi-domain corpus, directory ingestion, preprocessing, batching.

The synthetic corpus renders geometric glyphs (class = glyph geometry, identical
across domains) under per-domain style regimes (background texture frequency,
palette, noise level, stroke thickness). Class identity is carried by image
structure (phase), domain identity by texture/color statistics (amplitude),
which is exactly the factorization the spectral mixup relies on.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image

__all__ = [
    "LabeledSample",
    "DomainSplit",
    "DomainStyle",
    "SynthSpec",
    "PreprocessOptions",
    "IngestedCorpus",
    "generate_synthetic",
    "leave_one_domain_out",
    "ingest_corpus",
    "write_manifest",
    "preprocess",
    "make_batches",
    "batch_indices",
    "load_image",
    "save_image",
]


@dataclass
class LabeledSample:
    """Image (channels, H, W) in [0,1], one-hot label vector, domain index."""

    image: np.ndarray
    label: np.ndarray
    domain: int

    @property
    def class_index(self) -> int:
        return int(np.argmax(self.label))


@dataclass
class DomainSplit:
    """Index partitions into a sample list for one leave-one-domain-out fold."""

    train: list
    val: list
    test: list
    held_out_domain: int


# ---------------------------------------------------------------------------
# Synthetic corpus
# ---------------------------------------------------------------------------

NUM_GLYPHS = 10


@dataclass
class DomainStyle:
    """Per-domain style regime; class geometry never depends on these."""

    texture_freq: tuple  # (cycles_y, cycles_x) across the image
    texture_amp: float
    background: tuple  # RGB in [0,1]
    ink: tuple  # RGB in [0,1]
    noise_sigma: float
    stroke: float  # multiplies glyph stroke thickness


_BASE_STYLES = [
    DomainStyle((0.0, 3.0), 0.20, (0.55, 0.62, 0.80), (0.10, 0.10, 0.14), 0.020, 1.00),
    DomainStyle((6.0, 0.0), 0.24, (0.82, 0.64, 0.42), (0.22, 0.12, 0.08), 0.040, 1.30),
    DomainStyle((4.0, 4.0), 0.16, (0.55, 0.76, 0.55), (0.10, 0.06, 0.22), 0.010, 0.80),
    DomainStyle((2.0, 7.0), 0.28, (0.76, 0.52, 0.74), (0.04, 0.14, 0.18), 0.030, 1.15),
    DomainStyle((7.0, 2.0), 0.20, (0.70, 0.70, 0.50), (0.16, 0.16, 0.04), 0.025, 0.90),
    DomainStyle((5.0, 5.0), 0.24, (0.50, 0.70, 0.76), (0.20, 0.04, 0.10), 0.015, 1.20),
]


def default_styles(num_domains: int) -> list:
    """Deterministic style table for any domain count."""
    styles = [_BASE_STYLES[i % len(_BASE_STYLES)] for i in range(num_domains)]
    for i in range(len(_BASE_STYLES), num_domains):
        # derived variants keep styles distinct beyond the preset table
        base = styles[i]
        fy, fx = base.texture_freq
        styles[i] = DomainStyle(
            (fy + 1.0 + i % 3, fx + 2.0),
            min(0.3, base.texture_amp + 0.03),
            tuple(min(1.0, c + 0.08) for c in base.background),
            base.ink,
            base.noise_sigma,
            base.stroke,
        )
    return styles


@dataclass
class SynthSpec:
    """Parameters of the synthetic multi-domain corpus."""

    num_domains: int = 4
    num_classes: int = 7
    samples_per_class: int = 50
    image_size: int = 32
    channels: int = 3
    seed: int = 0
    styles: list = None

    def __post_init__(self) -> None:
        if self.num_domains < 2:
            raise ValueError("num_domains must be >= 2")
        if not 2 <= self.num_classes <= NUM_GLYPHS:
            raise ValueError(f"num_classes must be in [2, {NUM_GLYPHS}]")
        if self.samples_per_class < 1:
            raise ValueError("samples_per_class must be >= 1")
        if self.image_size < 8:
            raise ValueError("image_size must be >= 8")
        if self.channels not in (1, 3):
            raise ValueError("channels must be 1 or 3")
        if self.styles is None:
            self.styles = default_styles(self.num_domains)
        if len(self.styles) != self.num_domains:
            raise ValueError("styles must have one entry per domain")


def _rotate(yy, xx, angle):
    c, s = np.cos(angle), np.sin(angle)
    return c * yy - s * xx, s * yy + c * xx


def _glyph_field(glyph: int, yy, xx, t: float):
    """Signed inside-ness field for glyph `glyph` (positive inside)."""
    r = np.hypot(yy, xx)
    box = 0.78
    if glyph == 0:  # disk
        return 0.55 - r
    if glyph == 1:  # ring
        return t - np.abs(r - 0.52)
    if glyph == 2:  # upright cross
        arm_h = np.minimum(t - np.abs(yy), box - np.abs(xx))
        arm_v = np.minimum(t - np.abs(xx), box - np.abs(yy))
        return np.maximum(arm_h, arm_v)
    if glyph == 3:  # horizontal bar
        return np.minimum(1.6 * t - np.abs(yy), box - np.abs(xx))
    if glyph == 4:  # vertical bar
        return np.minimum(1.6 * t - np.abs(xx), box - np.abs(yy))
    if glyph == 5:  # square frame
        return t - np.abs(np.maximum(np.abs(yy), np.abs(xx)) - 0.52)
    if glyph == 6:  # filled triangle, apex up (half-plane distances, inside positive)
        e1 = 0.50 - yy
        e2 = (yy + 0.62) * 0.45 + xx * 0.55
        e3 = (yy + 0.62) * 0.45 - xx * 0.55
        return np.minimum(np.minimum(e1, e2), e3)
    if glyph == 7:  # diagonal cross
        s2 = np.sqrt(2.0)
        d1 = np.minimum(t - np.abs(xx - yy) / s2, box - np.maximum(np.abs(xx), np.abs(yy)))
        d2 = np.minimum(t - np.abs(xx + yy) / s2, box - np.maximum(np.abs(xx), np.abs(yy)))
        return np.maximum(d1, d2)
    if glyph == 8:  # two dots
        r1 = np.hypot(yy + 0.36, xx + 0.36)
        r2 = np.hypot(yy - 0.36, xx - 0.36)
        return np.maximum(0.30 - r1, 0.30 - r2)
    if glyph == 9:  # T shape
        bar = np.minimum(1.3 * t - np.abs(yy + 0.42), 0.66 - np.abs(xx))
        stem = np.minimum(1.3 * t - np.abs(xx), np.minimum(0.66 - yy, yy + 0.42 + 1.3 * t))
        return np.maximum(bar, stem)
    raise ValueError(f"unknown glyph index {glyph}")


def _render_sample(spec: SynthSpec, domain: int, cls: int, index: int) -> np.ndarray:
    style = spec.styles[domain]
    size = spec.image_size
    rng = np.random.default_rng([spec.seed, domain, cls, index])

    # identically distributed geometry jitter in every domain
    scale = rng.uniform(0.72, 0.98)
    dy, dx = rng.uniform(-0.14, 0.14, size=2)
    angle = rng.uniform(-0.30, 0.30)

    axis = np.linspace(-1.0, 1.0, size)
    yy, xx = np.meshgrid(axis, axis, indexing="ij")
    gy, gx = _rotate((yy - dy) / scale, (xx - dx) / scale, angle)

    t = 0.14 * style.stroke
    aa = 3.0 / size  # ~1.5 px soft edge
    mask = np.clip(_glyph_field(cls, gy, gx, t) / aa + 0.5, 0.0, 1.0)

    fy, fx = style.texture_freq
    phase = rng.uniform(0.0, 2.0 * np.pi)
    tex = np.sin(2.0 * np.pi * (fy * (yy + 1.0) / 2.0 + fx * (xx + 1.0) / 2.0) + phase)
    shade = 1.0 + style.texture_amp * tex

    bg = np.asarray(style.background, dtype=np.float64)
    ink = np.asarray(style.ink, dtype=np.float64)
    img = bg[:, None, None] * shade[None, :, :] * (1.0 - mask[None, :, :])
    img += ink[:, None, None] * mask[None, :, :]
    img += rng.normal(0.0, style.noise_sigma, size=img.shape)
    img = np.clip(img, 0.0, 1.0)
    if spec.channels == 1:
        img = img.mean(axis=0, keepdims=True)
    return img


def generate_synthetic(spec: SynthSpec, held_out_domain: int = 0, val_fraction: float = 0.1):
    """Render the corpus and a leave-one-domain-out split.

    Same spec (including seed) regenerates a byte-identical corpus; samples are
    ordered by (domain, class, index).
    """
    samples = []
    eye = np.eye(spec.num_classes, dtype=np.float64)
    for domain in range(spec.num_domains):
        for cls in range(spec.num_classes):
            for index in range(spec.samples_per_class):
                samples.append(
                    LabeledSample(_render_sample(spec, domain, cls, index), eye[cls].copy(), domain)
                )
    split = leave_one_domain_out(samples, held_out_domain, val_fraction, seed=spec.seed)
    return samples, split


def leave_one_domain_out(samples, held_out_domain: int, val_fraction: float = 0.1, seed: int = 0):
    """Split into train/val over source domains and test on the held-out one.

    Val is a stratified (per domain, per class) random fraction of the source
    data; the test partition is every held-out-domain sample.
    """
    domains = sorted({s.domain for s in samples})
    if held_out_domain not in domains:
        raise ValueError(f"held_out_domain {held_out_domain} not present in corpus")
    if len(domains) < 2:
        raise ValueError("need at least 2 domains for a leave-one-domain-out split")

    test = [i for i, s in enumerate(samples) if s.domain == held_out_domain]
    train, val = [], []
    rng = np.random.default_rng([seed, 104729, held_out_domain])
    for domain in domains:
        if domain == held_out_domain:
            continue
        for cls in sorted({s.class_index for s in samples if s.domain == domain}):
            idx = [
                i
                for i, s in enumerate(samples)
                if s.domain == domain and s.class_index == cls
            ]
            idx = list(rng.permutation(idx))
            n_val = int(round(val_fraction * len(idx)))
            val.extend(sorted(idx[:n_val]))
            train.extend(sorted(idx[n_val:]))
    return DomainSplit(sorted(train), sorted(val), sorted(test), held_out_domain)


# ---------------------------------------------------------------------------
# Directory-corpus ingestion (root/<domain>/<class>/*.png)
# ---------------------------------------------------------------------------


@dataclass
class IngestedCorpus:
    samples: list
    domain_names: list
    class_names: list
    records: list  # one {"path", "domain", "class"} dict per sample


def load_image(path, image_size: int = None, channels: int = None) -> np.ndarray:
    """Decode an image file to a float64 (channels, H, W) array in [0,1]."""
    try:
        with Image.open(path) as im:
            if channels == 1 or (channels is None and im.mode in ("L", "1", "I", "F")):
                im = im.convert("L")
            else:
                im = im.convert("RGB")
            if image_size is not None and im.size != (image_size, image_size):
                im = im.resize((image_size, image_size), Image.BILINEAR)
            arr = np.asarray(im, dtype=np.float64) / 255.0
    except (OSError, SyntaxError) as exc:
        raise ValueError(f"cannot decode image file {path}: {exc}") from exc
    if arr.ndim == 2:
        arr = arr[None, :, :]
    else:
        arr = np.moveaxis(arr, -1, 0)
    return arr


def save_image(path, image: np.ndarray) -> None:
    """Clamp to [0,1], quantize to 8-bit and write a PNG.

    This is the only place pixel values are clamped; all in-memory pipelines
    keep unclamped float64 values.
    """
    arr = np.asarray(image, dtype=np.float64)
    if arr.ndim == 2:
        arr = arr[None, :, :]
    quant = np.round(np.clip(arr, 0.0, 1.0) * 255.0).astype(np.uint8)
    if quant.shape[0] == 1:
        im = Image.fromarray(quant[0], mode="L")
    elif quant.shape[0] == 3:
        im = Image.fromarray(np.moveaxis(quant, 0, -1), mode="RGB")
    else:
        raise ValueError(f"can only export 1- or 3-channel images, got {quant.shape[0]}")
    im.save(path, format="PNG")


_IMAGE_SUFFIXES = {".png", ".jpg", ".jpeg", ".bmp", ".gif", ".tif", ".tiff"}


def ingest_corpus(root, image_size: int = None, channels: int = None) -> IngestedCorpus:
    """Load a root/<domain>/<class>/<image> tree into labeled samples.

    Domains and classes are indexed by sorted directory name; every domain must
    contain the same class set.
    """
    root = Path(root)
    if not root.is_dir():
        raise ValueError(f"corpus root {root} is not a directory")
    domain_dirs = sorted(p for p in root.iterdir() if p.is_dir())
    if not domain_dirs:
        raise ValueError(f"corpus root {root} contains no domain directories")

    class_sets = {d.name: sorted(p.name for p in d.iterdir() if p.is_dir()) for d in domain_dirs}
    class_names = sorted(set().union(*class_sets.values()))
    if not class_names:
        raise ValueError(f"no class directories found under {root}")
    for d in domain_dirs:
        if not class_sets[d.name]:
            raise ValueError(f"domain directory {d} contains no class directories")
        missing = sorted(set(class_names) - set(class_sets[d.name]))
        if missing:
            raise ValueError(f"class '{missing[0]}' missing in domain '{d.name}'")

    domain_names = [d.name for d in domain_dirs]
    eye = np.eye(len(class_names), dtype=np.float64)
    samples, records = [], []
    resolved_channels = channels
    for di, domain_dir in enumerate(domain_dirs):
        for ci, cls in enumerate(class_names):
            files = sorted(
                p for p in (domain_dir / cls).iterdir()
                if p.is_file() and p.suffix.lower() in _IMAGE_SUFFIXES
            )
            if not files:
                raise ValueError(f"class directory {domain_dir / cls} contains no images")
            for path in files:
                img = load_image(path, image_size=image_size, channels=resolved_channels)
                if resolved_channels is None:
                    resolved_channels = img.shape[0]
                samples.append(LabeledSample(img, eye[ci].copy(), di))
                records.append({"path": str(path), "domain": di, "class": ci})
    return IngestedCorpus(samples, domain_names, class_names, records)


def write_manifest(records, path) -> None:
    """Write the (path, domain index, class index) listing as JSON."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(records, fh, indent=2, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------------------
# Preprocessing (random resized crop, horizontal flip, color jitter)
# ---------------------------------------------------------------------------


@dataclass
class PreprocessOptions:
    """Standard pixel augmentation; any field can be disabled.

    crop_scale: area-fraction range of the random resized crop, None disables.
    flip_prob: probability of a horizontal flip, 0 disables.
    jitter: brightness/contrast/saturation factors drawn from [1-j, 1+j],
        0 disables.
    """

    crop_scale: tuple = (0.8, 1.0)
    flip_prob: float = 0.5
    jitter: float = 0.4

    @classmethod
    def disabled(cls) -> "PreprocessOptions":
        return cls(crop_scale=None, flip_prob=0.0, jitter=0.0)


def resize_bilinear(image: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """Pixel-center-aligned bilinear resize of a (channels, H, W) array."""
    _, h, w = image.shape
    if (h, w) == (out_h, out_w):
        return image.copy()
    ys = (np.arange(out_h) + 0.5) * h / out_h - 0.5
    xs = (np.arange(out_w) + 0.5) * w / out_w - 0.5
    y0 = np.clip(np.floor(ys).astype(np.int64), 0, h - 1)
    x0 = np.clip(np.floor(xs).astype(np.int64), 0, w - 1)
    y1 = np.minimum(y0 + 1, h - 1)
    x1 = np.minimum(x0 + 1, w - 1)
    wy = np.clip(ys - y0, 0.0, 1.0)[:, None]
    wx = np.clip(xs - x0, 0.0, 1.0)[None, :]
    top = image[:, y0[:, None], x0[None, :]] * (1 - wx) + image[:, y0[:, None], x1[None, :]] * wx
    bot = image[:, y1[:, None], x0[None, :]] * (1 - wx) + image[:, y1[:, None], x1[None, :]] * wx
    return top * (1 - wy) + bot * wy


def preprocess(sample: LabeledSample, rng: np.random.Generator, options: PreprocessOptions) -> LabeledSample:
    """Random resized crop + horizontal flip + color jitter; deterministic per rng."""
    img = sample.image
    _, h, w = img.shape

    if options.crop_scale is not None:
        lo, hi = options.crop_scale
        area = rng.uniform(lo, hi)
        ch = max(1, int(round(h * np.sqrt(area))))
        cw = max(1, int(round(w * np.sqrt(area))))
        top = int(rng.integers(0, h - ch + 1))
        left = int(rng.integers(0, w - cw + 1))
        img = resize_bilinear(img[:, top : top + ch, left : left + cw], h, w)
    else:
        img = img.copy()

    if options.flip_prob > 0.0 and rng.random() < options.flip_prob:
        img = img[:, :, ::-1].copy()

    if options.jitter > 0.0:
        fb, fc, fs = rng.uniform(1.0 - options.jitter, 1.0 + options.jitter, size=3)
        img = img * fb
        mean = img.mean()
        img = (img - mean) * fc + mean
        if img.shape[0] > 1:
            gray = img.mean(axis=0, keepdims=True)
            img = (img - gray) * fs + gray
        img = np.clip(img, 0.0, 1.0)

    return LabeledSample(img, sample.label.copy(), sample.domain)


# ---------------------------------------------------------------------------
# Batching
# ---------------------------------------------------------------------------


def batch_indices(n: int, batch_size: int, rng: np.random.Generator) -> list:
    """Shuffled fixed-size index batches; the trailing partial batch is dropped."""
    if batch_size < 1:
        raise ValueError("batch_size must be >= 1")
    order = rng.permutation(n)
    n_full = n // batch_size
    return [order[i * batch_size : (i + 1) * batch_size] for i in range(n_full)]


def make_batches(samples, batch_size: int, rng: np.random.Generator):
    """Iterate over shuffled full-size batches of samples."""
    for idx in batch_indices(len(samples), batch_size, rng):
        yield [samples[i] for i in idx]
