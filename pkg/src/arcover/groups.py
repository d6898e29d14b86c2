"""Deck groups: trivial, cyclic of order n, and the integers on a finite window."""

from __future__ import annotations

from dataclasses import dataclass


class GroupError(ValueError):
    pass


@dataclass(frozen=True)
class GroupSpec:
    kind: str  # "trivial", "cyclic" or "Z"
    order: int = 1  # for cyclic groups
    window: int = 0  # elements -window..window for Z

    @classmethod
    def parse(cls, text: str, window: int | None = None) -> "GroupSpec":
        t = text.strip()
        if t in ("trivial", "1"):
            return cls("trivial")
        if t.startswith("Z/"):
            n = int(t[2:])
            if n < 1:
                raise GroupError("cyclic group order must be positive")
            return cls("trivial") if n == 1 else cls("cyclic", n)
        if t in ("Z", "free(1)"):
            if window is None or window < 0:
                raise GroupError("the infinite cyclic group needs a window radius")
            return cls("Z", window=window)
        raise GroupError(f"unsupported group {text!r} (trivial, Z/n or Z)")

    def __str__(self) -> str:
        if self.kind == "trivial":
            return "trivial"
        if self.kind == "cyclic":
            return f"Z/{self.order}"
        return f"Z (window {self.window})"

    @property
    def finite(self) -> bool:
        return self.kind != "Z"

    def elements(self) -> list[int]:
        if self.kind == "trivial":
            return [0]
        if self.kind == "cyclic":
            return list(range(self.order))
        return list(range(-self.window, self.window + 1))

    def norm(self, g: int) -> int:
        return g % self.order if self.kind == "cyclic" else (0 if self.kind == "trivial" else g)

    def op(self, a: int, b: int) -> int:
        return self.norm(a + b)

    def inv(self, a: int) -> int:
        return self.norm(-a)

    def contains(self, g: int) -> bool:
        return self.kind != "Z" or -self.window <= g <= self.window

    @property
    def size(self) -> int:
        return len(self.elements())


def sheet_name(x: str, g: int) -> str:
    return f"{x}@{g}"


def split_sheet(name: str) -> tuple[str, int | None]:
    base, sep, g = name.rpartition("@")
    if not sep:
        return name, None
    try:
        return base, int(g)
    except ValueError:
        return name, None
