from dataclasses import dataclass
from typing import List, Tuple


@dataclass(frozen=True)
class DataPartition:
    n_items: int
    K: int
    slices: List[Tuple[int, int]]  # (offset, length) per worker rank


def partition(n_items: int, K: int) -> DataPartition:
    """Block distribution of n_items over K workers

    The first n_items % K workers get one extra item.
    """
    if isinstance(K, bool) or int(K) != K or K < 1:
        raise ValueError(f"K must be a positive integer, got {K!r}")
    if isinstance(n_items, bool) or int(n_items) != n_items or n_items < 0:
        raise ValueError(f"n_items must be a nonnegative integer, got {n_items!r}")
    n_items, K = int(n_items), int(K)

    base, extra = divmod(n_items, K)
    slices = []
    offset = 0
    for rank in range(K):
        length = base + 1 if rank < extra else base
        slices.append((offset, length))
        offset += length
    return DataPartition(n_items=n_items, K=K, slices=slices)
