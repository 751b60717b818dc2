"""
Epoch history file: one line per epoch,

    epoch=0 lr=1.000000e-04 train_loss=0.6931471806 val_loss=0.6931471806 val_precision=0.000000 val_recall=0.000000 val_f1=0.000000
"""

import re
from dataclasses import dataclass
from pathlib import Path
from typing import List, Union

from ..core.errors import DatasetError

LINE_PATTERN = re.compile(
    r"^epoch=(\d+) lr=(\S+) train_loss=(\S+) val_loss=(\S+) "
    r"val_precision=(\S+) val_recall=(\S+) val_f1=(\S+)$"
)


@dataclass
class EpochRecord:
    epoch: int
    lr: float                 # rate used during this epoch
    train_loss: float         # mean over the epoch's steps
    val_loss: float
    val_precision: float
    val_recall: float
    val_f1: float
    improved: bool = False
    halved: bool = False      # rate halved after this epoch
    stopped: bool = False     # training ended after this epoch


def format_record(record: EpochRecord) -> str:
    return (
        f"epoch={record.epoch} lr={record.lr:.6e} train_loss={record.train_loss:.10f} "
        f"val_loss={record.val_loss:.10f} val_precision={record.val_precision:.6f} "
        f"val_recall={record.val_recall:.6f} val_f1={record.val_f1:.6f}"
    )


def write_history(path: Union[str, Path], records: List[EpochRecord]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("".join(format_record(r) + "\n" for r in records), encoding="utf-8")
    return path


def read_history(path: Union[str, Path]) -> List[EpochRecord]:
    """
    Raises:
        DatasetError: On a malformed line
    """
    records = []
    for number, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        match = LINE_PATTERN.match(line.strip())
        if not match:
            raise DatasetError(f"malformed history line {number}", str(path))
        epoch, *values = match.groups()
        records.append(EpochRecord(int(epoch), *(float(v) for v in values)))
    return records
