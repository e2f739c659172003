from pydantic import BaseModel, ConfigDict, Field, model_validator


class HeqParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    k: int = Field(ge=1)
    kprime: int = Field(ge=1)

    @property
    def length(self) -> int:
        """Input length 2^k - 1"""
        return 2**self.k - 1

    @property
    def alphabet(self) -> int:
        return 2**self.kprime

    @property
    def input_count(self) -> int:
        return self.alphabet**self.length

    @property
    def pair_count(self) -> int:
        return self.input_count**2


class HeqInput(BaseModel):
    """One party's input (a_1, ..., a_{2^k-1}), entries below 2^kprime"""

    model_config = ConfigDict(frozen=True)

    k: int = Field(ge=1)
    kprime: int = Field(ge=1)
    entries: tuple[int, ...]

    @model_validator(mode="after")
    def check_entries(self):
        if len(self.entries) != 2**self.k - 1:
            raise ValueError(f"input length must be 2^{self.k} - 1")
        limit = 2**self.kprime
        for v in self.entries:
            if not 0 <= v < limit:
                raise ValueError(f"entry {v} outside [0, {limit})")
        return self

    @property
    def params(self) -> HeqParams:
        return HeqParams(k=self.k, kprime=self.kprime)

    def __getitem__(self, i: int) -> int:
        """a_i for 1 <= i <= 2^k - 1"""
        if not 1 <= i <= len(self.entries):
            raise IndexError(f"input index {i} out of range")
        return self.entries[i - 1]

    def __str__(self) -> str:
        return "(" + ",".join(str(v) for v in self.entries) + ")"


class HeqInstance(BaseModel):
    model_config = ConfigDict(frozen=True)

    k: int
    kprime: int
    a: tuple[int, ...]
    b: tuple[int, ...]

    @classmethod
    def from_pair(cls, a: HeqInput, b: HeqInput) -> "HeqInstance":
        return cls(k=a.k, kprime=a.kprime, a=a.entries, b=b.entries)

    def to_pair(self) -> tuple[HeqInput, HeqInput]:
        a = HeqInput(k=self.k, kprime=self.kprime, entries=self.a)
        b = HeqInput(k=self.k, kprime=self.kprime, entries=self.b)
        return a, b
