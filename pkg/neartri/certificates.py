"""TDS certificates, reduction traces and their JSON form."""

import enum
from dataclasses import dataclass, field


class CaseId(enum.StrEnum):
    REDUCIBLE = "Reducible"
    C1 = "C1"
    C2 = "C2"
    C3 = "C3"
    C4 = "C4"
    C5 = "C5"
    C6 = "C6"
    C7 = "C7"
    C8 = "C8"
    C9 = "C9"
    C10 = "C10"
    C11 = "C11"
    C12 = "C12"
    CLAIM2 = "Claim2"
    LEMMA10I = "Lemma10I"
    LEMMA10II = "Lemma10II"
    LEMMA9 = "Lemma9"
    BASE_MOP = "BaseMop"
    ORACLE_FALLBACK = "OracleFallback"


def budget(n):
    """f(n) = floor(2n/5)."""
    return 2 * n // 5


@dataclass(frozen=True)
class ReductionStep:
    case_id: CaseId
    n: int
    size_removed: int
    budget_spent: int
    bound: int
    depth: int = 0
    removed: tuple = ()
    # vertices added by the completion search
    completed: tuple = ()

    def to_dict(self):
        return {
            "case_id": str(self.case_id),
            "n": self.n,
            "k": self.size_removed,
            "d": self.budget_spent,
            "bound": self.bound,
            "depth": self.depth,
            "removed": [list(x) if isinstance(x, tuple) else x for x in self.removed],
            "completed": sorted(self.completed),
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            case_id=CaseId(data["case_id"]),
            n=data["n"],
            size_removed=data["k"],
            budget_spent=data["d"],
            bound=data.get("bound", budget(data["n"])),
            depth=data.get("depth", 0),
            removed=tuple(tuple(x) if isinstance(x, list) else x for x in data.get("removed", ())),
            completed=tuple(data.get("completed", ())),
        )


@dataclass(frozen=True)
class TdsCertificate:
    vertices: frozenset
    trace: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "vertices", frozenset(self.vertices))
        object.__setattr__(self, "trace", tuple(self.trace))

    @property
    def size(self):
        return len(self.vertices)

    def to_dict(self, n):
        return {
            "n": n,
            "size": self.size,
            "bound": budget(n),
            "vertices": sorted(self.vertices),
            "trace": [step.to_dict() for step in self.trace],
        }

    @classmethod
    def from_dict(cls, data):
        vertices = data["vertices"]
        if len(set(vertices)) != len(vertices):
            raise ValueError("certificate lists a vertex twice")
        if data.get("size", len(vertices)) != len(vertices):
            raise ValueError("certificate size does not match its vertex list")
        return cls(
            frozenset(vertices),
            tuple(ReductionStep.from_dict(step) for step in data.get("trace", ())),
        )


def is_tds(T, D):
    """Every vertex has a neighbor in D. T is a NearTriangulation or a networkx graph."""
    D = set(D)
    if hasattr(T, "rotation"):
        return all(any(u in D for u in T.rotation[v]) for v in range(T.n))
    return all(any(u in D for u in T.neighbors(v)) for v in T.nodes)


def undominated(T, D):
    D = set(D)
    return frozenset(v for v in range(T.n) if not any(u in D for u in T.rotation[v]))
