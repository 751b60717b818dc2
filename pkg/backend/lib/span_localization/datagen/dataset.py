"""
On-disk dataset layout:

    <dir>/index.tsv               header + one line per sample
    <dir>/images/00000.png        8-bit RGB
    <dir>/masks/00000.png         8-bit grayscale, 0 / 255

index.tsv columns: image, mask, type, seed, sample (paths relative to <dir>).
"""

import csv
import logging
from pathlib import Path
from typing import Union

from ..core.errors import DatasetError
from ..core.rng import Rng
from ..core.types import ManipulationType
from ..io.images import read_image, read_mask, write_image, write_mask
from .config import DataConfig
from .source import SampleBatch, generate_sample

logger = logging.getLogger(__name__)

INDEX_NAME = "index.tsv"
INDEX_COLUMNS = ["image", "mask", "type", "seed", "sample"]


def dump_dataset(cfg: DataConfig, out_dir: Union[str, Path], count: int, seed: int) -> Path:
    """
    Generate `count` samples of the stream seeded by `seed` and write them.

    Returns:
        Path of the index file

    Raises:
        OSError: If the directory cannot be written
    """
    out_dir = Path(out_dir)
    (out_dir / "images").mkdir(parents=True, exist_ok=True)
    (out_dir / "masks").mkdir(parents=True, exist_ok=True)
    rng = Rng(seed)
    rows = []
    for index in range(count):
        image, mask, kind = generate_sample(cfg, rng.child(index))
        image_name = f"images/{index:05d}.png"
        mask_name = f"masks/{index:05d}.png"
        write_image(out_dir / image_name, image)
        write_mask(out_dir / mask_name, mask, threshold=0.5)
        rows.append([image_name, mask_name, kind.value, str(seed), str(index)])

    index_path = out_dir / INDEX_NAME
    with open(index_path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, delimiter="\t", lineterminator="\n")
        writer.writerow(INDEX_COLUMNS)
        writer.writerows(rows)
    logger.info(f"✅ Wrote {count} samples (seed {seed}) to {out_dir}")
    return index_path


def load_dataset(data_dir: Union[str, Path]) -> SampleBatch:
    """
    Read a dumped dataset back.

    Raises:
        DatasetError: Missing or malformed index, missing image or mask file
    """
    data_dir = Path(data_dir)
    index_path = data_dir / INDEX_NAME
    if not index_path.is_file():
        raise DatasetError("dataset index not found", str(index_path))

    batch = SampleBatch()
    with open(index_path, newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f, delimiter="\t")
        if reader.fieldnames is None or any(column not in reader.fieldnames for column in INDEX_COLUMNS):
            raise DatasetError(f"index header must contain {', '.join(INDEX_COLUMNS)}", str(index_path))
        for row in reader:
            try:
                kind = ManipulationType(row["type"])
            except ValueError:
                raise DatasetError(f"unknown manipulation type {row['type']!r}", str(index_path)) from None
            image = read_image(data_dir / row["image"])
            mask = read_mask(data_dir / row["mask"])
            if (image.height, image.width) != (mask.height, mask.width):
                raise DatasetError(f"image and mask sizes differ ({image.shape} vs {mask.shape})", row["mask"])
            batch.append(image, mask, kind, row["mask"])
    logger.info(f"Loaded {len(batch)} samples from {data_dir}")
    return batch
