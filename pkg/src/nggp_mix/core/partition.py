"""Mutable bookkeeping for the random partition during sampling."""

import logging
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from ..types import PartitionShape

logger = logging.getLogger(__name__)

UNASSIGNED = -1


@dataclass
class DetachReceipt:
    """What happened to the cluster an observation was removed from."""

    cluster_id: int
    emptied: bool
    param: Any = None


class Partition:
    """Cluster membership of n observations.

    Cluster ids are opaque integers recycled from a free list. Member lists
    use swap-remove, so detach and attach are O(1). When a stats factory is
    given, per-cluster sufficient statistics are kept up to date on every
    detach and attach.
    """

    def __init__(
        self,
        n: int,
        data: Optional[np.ndarray] = None,
        stats_factory: Optional[Callable[[], Any]] = None,
    ):
        """Initialize an empty partition.

        Args:
            n: Number of observations
            data: (n, D) observations, required when stats_factory is set
            stats_factory: Callable returning empty sufficient statistics
        """
        if stats_factory is not None and data is None:
            raise ValueError("Sufficient statistics need the data matrix")
        self.n = n
        self.data = data
        self._stats_factory = stats_factory
        self._labels = np.full(n, UNASSIGNED, dtype=np.int64)
        self._position = np.zeros(n, dtype=np.int64)
        self._members: Dict[int, List[int]] = {}
        self._params: Dict[int, Any] = {}
        self._stats: Dict[int, Any] = {}
        self._free: List[int] = []
        self._next_id = 0

    @classmethod
    def from_labels(
        cls,
        labels,
        params: Optional[Dict[int, Any]] = None,
        data: Optional[np.ndarray] = None,
        stats_factory: Optional[Callable[[], Any]] = None,
    ) -> "Partition":
        """Build a partition from per-observation labels.

        Args:
            labels: Arbitrary integer labels, one per observation
            params: Optional map from label to cluster parameter
            data: Observations for sufficient statistics
            stats_factory: Callable returning empty sufficient statistics

        Returns:
            Partition whose clusters appear in order of first occurrence
        """
        labels = np.asarray(labels)
        partition = cls(len(labels), data=data, stats_factory=stats_factory)
        label_to_id: Dict[int, int] = {}
        for i, label in enumerate(labels.tolist()):
            cid = label_to_id.get(label)
            if cid is None:
                param = params.get(label) if params is not None else None
                label_to_id[label] = partition.attach(i, None, param)
            else:
                partition.attach(i, cid)
        return partition

    # -- queries ---------------------------------------------------------

    @property
    def num_clusters(self) -> int:
        return len(self._members)

    @property
    def num_assigned(self) -> int:
        return int((self._labels != UNASSIGNED).sum())

    @property
    def labels(self) -> np.ndarray:
        return self._labels

    @property
    def cluster_ids(self) -> List[int]:
        return list(self._members)

    def label_of(self, i: int) -> int:
        return int(self._labels[i])

    def size(self, cid: int) -> int:
        return len(self._members[cid])

    def sizes(self) -> List[int]:
        return [len(m) for m in self._members.values()]

    def members(self, cid: int) -> List[int]:
        return list(self._members[cid])

    def param(self, cid: int) -> Any:
        return self._params[cid]

    def set_param(self, cid: int, value: Any) -> None:
        assert cid in self._members, f"Unknown cluster {cid}"
        self._params[cid] = value

    def params(self) -> List[Any]:
        return [self._params[cid] for cid in self._members]

    def stats(self, cid: int) -> Any:
        return self._stats[cid]

    def shape(self) -> PartitionShape:
        """Cluster sizes in insertion order."""
        sizes = self.sizes()
        return PartitionShape(n=sum(sizes), sizes=tuple(sizes))

    def canonical_labels(self) -> np.ndarray:
        """Labels renumbered 0, 1, ... in order of first appearance."""
        out = np.full(self.n, UNASSIGNED, dtype=np.int64)
        mapping: Dict[int, int] = {}
        for i, label in enumerate(self._labels.tolist()):
            if label == UNASSIGNED:
                continue
            out[i] = mapping.setdefault(label, len(mapping))
        return out

    def coclustering_matrix(self) -> np.ndarray:
        """Indicator matrix of shared cluster membership."""
        return self._labels[:, None] == self._labels[None, :]

    # -- updates ---------------------------------------------------------

    def detach(self, i: int) -> DetachReceipt:
        """Unassign observation i.

        Returns:
            Receipt with the previous cluster id; when the cluster became
            empty it is removed and its parameter is surfaced.
        """
        cid = int(self._labels[i])
        assert cid != UNASSIGNED, f"Observation {i} is not assigned"

        members = self._members[cid]
        j = self._position[i]
        last = members[-1]
        members[j] = last
        self._position[last] = j
        members.pop()
        self._labels[i] = UNASSIGNED

        if members:
            if self._stats_factory is not None:
                self._stats[cid].remove(self.data[i])
            return DetachReceipt(cluster_id=cid, emptied=False)

        del self._members[cid]
        self._stats.pop(cid, None)
        param = self._params.pop(cid, None)
        self._free.append(cid)
        return DetachReceipt(cluster_id=cid, emptied=True, param=param)

    def attach(self, i: int, target: Optional[int] = None, param: Any = None) -> int:
        """Assign observation i to an existing cluster, or to a new one.

        Args:
            i: Observation index, currently unassigned
            target: Existing cluster id, or None to open a new cluster
            param: Parameter of the new cluster (ignored for existing targets)

        Returns:
            Cluster id that i now belongs to
        """
        assert self._labels[i] == UNASSIGNED, f"Observation {i} is already assigned"
        if target is None:
            target = self._free.pop() if self._free else self._new_id()
            self._members[target] = []
            self._params[target] = param
            if self._stats_factory is not None:
                self._stats[target] = self._stats_factory()
        else:
            assert target in self._members, f"Unknown cluster {target}"

        members = self._members[target]
        self._position[i] = len(members)
        members.append(i)
        self._labels[i] = target
        if self._stats_factory is not None:
            self._stats[target].add(self.data[i])
        return target

    def rebuild_stats(self) -> None:
        """Recompute every cluster's sufficient statistics from the data."""
        if self._stats_factory is None:
            return
        for cid, members in self._members.items():
            stats = self._stats_factory()
            for i in members:
                stats.add(self.data[i])
            self._stats[cid] = stats

    def _new_id(self) -> int:
        cid = self._next_id
        self._next_id += 1
        return cid

    def check_invariants(self) -> None:
        """Assert that labels, member lists and sizes agree."""
        seen = 0
        for cid, members in self._members.items():
            assert members, f"Cluster {cid} is empty"
            for pos, i in enumerate(members):
                assert self._labels[i] == cid
                assert self._position[i] == pos
            if self._stats_factory is not None:
                assert self._stats[cid].count == len(members)
            seen += len(members)
        assert seen == self.num_assigned
